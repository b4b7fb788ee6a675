import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradiometry import (
    Combination,
    InstrumentSpec,
    NoiseBudget,
    gradiometer_noise_from_gravimeters,
    reference_instruments,
    required_averaging_time,
    resolution_after_averaging,
)


def test_birmingham_averaging():
    r = resolution_after_averaging(470.0, 600.0)
    assert r == pytest.approx(19.19, abs=0.005)
    assert abs(r - 20.0) / 20.0 <= 0.05


def test_resolution_simple():
    assert resolution_after_averaging(123.4, 1.0) == 123.4
    assert resolution_after_averaging(100.0, 1e4) == pytest.approx(1.0, rel=1e-15)


def test_resolution_rejects_bad_input():
    with pytest.raises(ValueError):
        resolution_after_averaging(-1.0, 1.0)
    with pytest.raises(ValueError):
        resolution_after_averaging(1.0, 0.0)


def test_uav_conversion():
    single = gradiometer_noise_from_gravimeters(37e-9, 1.0)
    assert single == pytest.approx(362.8, abs=0.05)
    assert abs(single - 360.0) / 360.0 <= 0.01
    rss = gradiometer_noise_from_gravimeters(37e-9, 1.0, Combination.INDEPENDENT_PAIR_RSS)
    assert rss == pytest.approx(513.1, abs=0.05)
    assert gradiometer_noise_from_gravimeters(0.0, 1.0) == 0.0


def test_required_time():
    t = required_averaging_time(470.0, 0.1)
    assert t == pytest.approx(2.209e7, rel=1e-12)
    assert t / 86400 == pytest.approx(255.67, abs=0.01)
    assert required_averaging_time(5.0, 5.0) == 1.0
    assert required_averaging_time(10.0, 0.1) == pytest.approx(1e4, rel=1e-12)
    with pytest.raises(ValueError):
        required_averaging_time(0.0, 1.0)


def test_noise_budget():
    b = NoiseBudget(470.0, 600.0)
    assert b.resolution == resolution_after_averaging(470.0, 600.0)


densities = st.floats(1e-3, 1e6)
times = st.floats(1e-3, 1e8)


@given(densities, times)
def test_quarter_law(d, tau):
    assert resolution_after_averaging(d, 4 * tau) == pytest.approx(0.5 * resolution_after_averaging(d, tau), rel=1e-15)


@given(densities, st.floats(1e-3, 1e3))
def test_required_time_inverts(d, r):
    assert resolution_after_averaging(d, required_averaging_time(d, r)) == pytest.approx(r, rel=1e-12)


@given(st.floats(1e-12, 1e-5), st.floats(0.01, 100.0), st.floats(0.1, 10.0))
def test_conversion_scaling(a, b, k):
    base = gradiometer_noise_from_gravimeters(a, b)
    assert gradiometer_noise_from_gravimeters(k * a, b) == pytest.approx(k * base, rel=1e-14)
    assert gradiometer_noise_from_gravimeters(a, k * b) == pytest.approx(base / k, rel=1e-14)
    rss = gradiometer_noise_from_gravimeters(a, b, Combination.INDEPENDENT_PAIR_RSS)
    assert rss / base == pytest.approx(math.sqrt(2), rel=1e-15)


QUOTES = {
    "Perrin-2019 double-loop": "a short-term sensitivity of 65,000 E/√Hz",
    "HUST": "the sensitivity of ∼100 E/√Hz, with 0.3 metres",
    "Kasevich group": "∼30–40 E/√Hz at ∼1 metre",
    "UAV gravimeter pair": "37×10⁻⁹ g/√Hz",
    "Birmingham": "about 470 E/√Hz",
}


def test_reference_table():
    table = reference_instruments()
    assert len(table) == 5
    by_name = {s.name: s for s in table}
    assert set(by_name) == set(QUOTES)
    for name, quote in QUOTES.items():
        assert quote in by_name[name].source_note
    birm = by_name["Birmingham"]
    assert (birm.gradient_noise_density, birm.baseline) == (470.0, 1.0)
    perrin = by_name["Perrin-2019 double-loop"]
    assert perrin.short_baseline and perrin.gradient_noise_density == 65000.0
    kas = by_name["Kasevich group"]
    assert kas.gradient_noise_density == 35.0 and "min 30" in kas.source_note and "max 40" in kas.source_note
    assert by_name["HUST"].baseline == 0.3
    assert by_name["UAV gravimeter pair"].accel_noise_density == 37e-9
    with pytest.raises(Exception):
        birm.baseline = 2.0


def test_instrument_validation():
    with pytest.raises(ValueError):
        InstrumentSpec("x", 1.0)
    with pytest.raises(ValueError):
        InstrumentSpec("x", 0.0, 10.0)
    spec = InstrumentSpec("pair", 1.0, accel_noise_density=37e-9)
    assert spec.effective_gradient_density() == pytest.approx(362.846, rel=1e-5)
