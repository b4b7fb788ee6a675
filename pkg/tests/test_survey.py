import numpy as np
import numpy.testing as npt
import pytest

from gradiometry import (
    DensityModel,
    FieldPointInsideBody,
    InstrumentSpec,
    MissingNoiseDensity,
    PointMass,
    Route,
    UniformSphere,
    anomaly_profile,
    detectability,
    simulate_survey,
    submarine_model,
)
from gradiometry.constants import EOTVOS, G, STANDARD_GRAVITY
from gradiometry.survey import crossing_range

BIRMINGHAM = InstrumentSpec("Birmingham", 1.0, 470.0)
SILENT = InstrumentSpec("silent", 1.0, 0.0, 0.0)


def buried_sphere(depth=50.0):
    return DensityModel((UniformSphere((0, 0, -depth), 2700.0, 10.0),), background_density=2000.0)


def flat_route(n=11, dwell=100.0, setup=900.0):
    xs = np.linspace(-200, 200, n)
    return Route.from_arrays(np.c_[xs, np.zeros(n), np.zeros(n)], dwell, setup)


def test_zero_noise_measures_truth():
    s = simulate_survey(flat_route(), buried_sphere(), SILENT, seed=3)
    npt.assert_array_equal(s.measured_g, s.true_g)
    npt.assert_array_equal(s.measured_gamma_zz, s.true_gamma_zz)


def test_single_waypoint_sigma():
    route = Route.from_arrays([[0, 0, 10]], 600.0)
    s = simulate_survey(route, buried_sphere(), BIRMINGHAM, seed=0)
    assert s.sigma_gamma[0] == pytest.approx(19.19, abs=0.005)
    assert np.isnan(s.sigma_g[0]) and np.isnan(s.measured_g[0])


def test_determinism():
    a = simulate_survey(flat_route(), buried_sphere(), BIRMINGHAM, seed=11)
    b = simulate_survey(flat_route(), buried_sphere(), BIRMINGHAM, seed=11)
    for name in ("measured_gamma_zz", "timestamp", "true_g"):
        assert getattr(a, name).tobytes() == getattr(b, name).tobytes()
    c = simulate_survey(flat_route(), buried_sphere(), BIRMINGHAM, seed=12)
    assert not np.array_equal(a.measured_gamma_zz, c.measured_gamma_zz)


def test_per_waypoint_streams_independent_of_route_length():
    # the stream for waypoint i depends only on (seed, i)
    short = Route.from_arrays([[0, 0, 5], [10, 0, 5]], 100.0)
    long = Route.from_arrays([[0, 0, 5], [10, 0, 5], [20, 0, 5]], 100.0)
    a = simulate_survey(short, buried_sphere(), BIRMINGHAM, seed=5)
    b = simulate_survey(long, buried_sphere(), BIRMINGHAM, seed=5)
    npt.assert_array_equal(a.measured_gamma_zz, b.measured_gamma_zz[:2])


def test_timestamps_and_gravimeter_sigma():
    inst = InstrumentSpec("UAV", 1.0, accel_noise_density=37e-9)
    route = flat_route(n=4, dwell=300.0, setup=900.0)
    s = simulate_survey(route, buried_sphere(), inst, seed=1)
    npt.assert_allclose(np.diff(s.timestamp), 1200.0)
    npt.assert_allclose(s.sigma_g, 37e-9 * STANDARD_GRAVITY / np.sqrt(300.0))
    npt.assert_allclose(s.sigma_gamma, 37e-9 * STANDARD_GRAVITY / EOTVOS / np.sqrt(300.0))


def test_quadrupled_dwell_halves_sigma():
    a = simulate_survey(flat_route(dwell=100.0), buried_sphere(), BIRMINGHAM, seed=0)
    b = simulate_survey(flat_route(dwell=400.0), buried_sphere(), BIRMINGHAM, seed=0)
    npt.assert_allclose(b.sigma_gamma, a.sigma_gamma / 2, rtol=1e-15)


def test_missing_noise_density():
    with pytest.raises(MissingNoiseDensity):
        simulate_survey(flat_route(), buried_sphere(), BIRMINGHAM, seed=0, observables=["g"])


def test_waypoint_inside_body():
    route = Route.from_arrays([[0, 0, -50]], 10.0)
    with pytest.raises(FieldPointInsideBody):
        simulate_survey(route, buried_sphere(), BIRMINGHAM, seed=0)


def test_route_validation():
    with pytest.raises(ValueError):
        Route(())
    with pytest.raises(ValueError):
        Route.from_arrays([[0, 0, 0]], 0.0)
    with pytest.raises(ValueError):
        Route.from_arrays([[0, 0, 0]], 1.0, setup_time=-1.0)


def test_statistics_match_sigma():
    route = Route.from_arrays([[0, 0, 10]], 600.0)
    model = buried_sphere()
    values = np.array(
        [simulate_survey(route, model, BIRMINGHAM, seed=k).measured_gamma_zz[0] for k in range(10_000)]
    )
    sigma = 470.0 / np.sqrt(600.0)
    assert np.std(values, ddof=1) == pytest.approx(sigma, rel=0.03)


def test_profile_uniform_model_flat():
    prof = anomaly_profile(flat_route(), DensityModel(()))
    assert all(g == 0.0 and t == 0.0 for _, g, t in prof)


def test_profile_symmetric_peak_over_sphere():
    model = buried_sphere(depth=50.0)
    prof = anomaly_profile(flat_route(n=11), model)
    gzz = np.array([p[2] for p in prof])
    ganom = np.array([p[1] for p in prof])
    assert np.argmax(gzz) == 5 and np.argmax(ganom) == 5
    npt.assert_allclose(gzz, gzz[::-1], rtol=1e-12)
    m_eff = 4 / 3 * np.pi * 10.0**3 * (2700.0 - 2000.0)
    assert gzz[5] == pytest.approx(2 * G * m_eff / 50.0**3 / EOTVOS, rel=1e-12)
    assert ganom[0] == 0.0


def test_detect_point_mass_range():
    model = DensityModel((PointMass((0, 0, 0), 1e7),))
    inst = InstrumentSpec("ten", 1.0, 10.0)
    rep = detectability(model, inst, np.geomspace(10, 1000, 300), 100.0)
    assert rep.noise_floor == pytest.approx(1.0)
    expected = (2 * G * 1e7 / 1e-9) ** (1 / 3)
    assert expected == pytest.approx(110.1, abs=0.05)
    assert rep.max_detection_range == pytest.approx(expected, rel=1e-9)
    assert rep.snr == rep.anomaly_peak / rep.noise_floor


def _brute_force_range(model, inst, dwell, r0, r1):
    r = np.geomspace(r0, r1, 200_000)
    rep = detectability(model, inst, r, dwell)
    above = np.flatnonzero(rep.snr_profile >= 1.0)
    return r[above[-1]] if above.size else 0.0


def test_detect_buoyant_vs_monopole():
    sub = submarine_model(length=200.0, hull_radius=9.85, ballast_radius=4.0, ballast_drop=6.0)
    assert abs(sub.net_effective_mass) < 1e-6 * sub.gross_mass
    mono = DensityModel((PointMass(sub.centroid, sub.gross_mass),))
    inst = InstrumentSpec("ten", 1.0, 10.0)
    sweep = np.geomspace(15, 2000, 400)
    rb = detectability(sub, inst, sweep, 100.0)
    rm = detectability(mono, inst, sweep, 100.0)
    assert rm.max_detection_range >= 2 * rb.max_detection_range
    for model, rep in ((sub, rb), (mono, rm)):
        brute = _brute_force_range(model, inst, 100.0, 15.0, 2000.0)
        assert rep.max_detection_range == pytest.approx(brute, rel=1e-3)
    i = np.searchsorted(sweep, rm.max_detection_range)
    assert rb.snr_profile[i] <= rm.snr_profile[i] / 10


def test_detect_infinite_noise():
    rep = detectability(buried_sphere(), InstrumentSpec("deaf", 1.0, np.inf), [60, 100, 200], 10.0)
    assert rep.max_detection_range == 0.0


def test_detect_range_monotone_in_noise():
    model = submarine_model()
    sweep = np.geomspace(10, 500, 200)
    ranges = [
        detectability(model, InstrumentSpec("x", 1.0, d), sweep, 100.0).max_detection_range
        for d in (0.1, 1, 10, 100, 1000)
    ]
    assert all(a >= b for a, b in zip(ranges, ranges[1:]))


def test_crossing_range_edges():
    r = [1.0, 2.0, 4.0]
    assert crossing_range(r, [0.1, 0.1, 0.1]) == 0.0
    assert crossing_range(r, [5.0, 5.0, 5.0]) == 4.0
    assert crossing_range(r, [8.0, 1.0, 0.125]) == pytest.approx(2.0)


def test_buoyancy_snr_falloff():
    sub = submarine_model()
    inst = InstrumentSpec("x", 1.0, 10.0)
    sweep = np.geomspace(500, 5000, 32)
    rb = detectability(sub, inst, sweep, 100.0)
    mono = DensityModel((PointMass(sub.centroid, sub.gross_mass),))
    rm = detectability(mono, inst, sweep, 100.0)
    slope_b = np.polyfit(np.log(sweep), np.log(rb.snr_profile), 1)[0]
    slope_m = np.polyfit(np.log(sweep), np.log(rm.snr_profile), 1)[0]
    assert slope_b <= -4.0 + 0.05
    assert slope_m == pytest.approx(-3.0, abs=0.01)


def test_report_text():
    rep = detectability(buried_sphere(), BIRMINGHAM, [60, 100, 200], 600.0)
    lines = dict(line.split(": ", 1) for line in rep.as_text().splitlines())
    assert float(lines["noise_floor_E"]) == pytest.approx(19.19, abs=0.005)
    assert "np.float64" not in rep.as_text()
