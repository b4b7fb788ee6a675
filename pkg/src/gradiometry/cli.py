"""
Command-line front end.

Each scenario first parses and validates every section it needs, then
computes, then writes all its outputs at once. Exit status: 0 on success,
1 for configuration errors, 2 for computation or I/O errors.
"""
import argparse
import logging
import sys

import numpy as np

from . import config as cfgmod
from .constants import EOTVOS
from .errors import ConfigError, GradiometryError
from .field import evaluate_acceleration, evaluate_potential, evaluate_tensor
from .interferometer import (
    build_loop,
    cow_rotation_scan,
    gradiometer_phase_difference,
    min_detectable_gradient,
    phase_closed_form,
    phase_path_integral,
    scale_factor,
)
from .io import (
    PHASE_COLUMNS,
    TENSOR_COLUMNS,
    csv_text,
    instruments_csv,
    key_value_text,
    tensor_rows,
    write_outputs,
)
from .noise import (
    Combination,
    gradiometer_noise_from_gravimeters,
    reference_instruments,
    required_averaging_time,
    resolution_after_averaging,
)
from .survey import MeasurementSeries, anomaly_profile, detectability, simulate_survey

log = logging.getLogger("gradiometry")


def _field_points(data):
    sec = cfgmod.section(data, "field")
    pts = sec.get("points_m")
    try:
        arr = np.asarray(pts, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError("field.points_m", "must be a list of [x, y, z] points") from None
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] == 0:
        raise ConfigError("field.points_m", "must be a non-empty list of [x, y, z] points")
    return arr


def prepare_field(run):
    model = cfgmod.parse_model(run.data)
    pts = _field_points(run.data)

    def compute():
        tens = evaluate_tensor(model, pts)
        pot = evaluate_potential(model, pts)
        acc = evaluate_acceleration(model, pts)
        values = [tuple(p) + (u,) + tuple(a) for p, u, a in zip(pts, pot, acc)]
        files = {
            "field_tensor.csv": csv_text(TENSOR_COLUMNS, tensor_rows(tens)),
            "field_values.csv": csv_text(
                ("x_m", "y_m", "z_m", "potential_J_kg", "g_x_mps2", "g_y_mps2", "g_z_mps2"), values
            ),
        }
        zz = tens[:, 2, 2] / EOTVOS
        return files, f"field: {len(pts)} points, Gamma_zz range [{zz.min():.6g}, {zz.max():.6g}] E"

    return compute


def _tolerance(run, sec, prefix):
    if run.tolerance is not None:
        return run.tolerance
    return cfgmod._number(sec, "tolerance_rad", prefix, required=False, positive=True)


def prepare_phase(run):
    ifm = cfgmod.parse_interferometer(run.data)
    sec = run.data.get("phase") or {}
    potential, g = cfgmod.parse_potential(run.data, sec, "phase")
    tol = _tolerance(run, sec, "phase")

    def compute():
        rows = []
        local_g = g
        if local_g is None and hasattr(potential, "source_centers"):
            centroid = build_loop(ifm).vertices.mean(axis=0)
            local_g = float(-evaluate_acceleration(potential, centroid)[0, 2])
        if local_g is not None:
            cf = phase_closed_form(ifm, local_g)
            rows.append((cf.method.value, cf.delta_phi, cf.quadrature_error_estimate))
        pi = phase_path_integral(ifm, potential, tol)
        rows.append((pi.method.value, pi.delta_phi, pi.quadrature_error_estimate))
        files = {"phase.csv": csv_text(PHASE_COLUMNS, rows)}
        return files, f"phase: path integral {pi.delta_phi!r} rad (error estimate {pi.quadrature_error_estimate:.3g})"

    return compute


def prepare_gradiometer(run):
    grad = cfgmod.parse_gradiometer(run.data)
    gsec = cfgmod.section(run.data, "gradiometer")
    noise_rad = cfgmod._number(gsec, "phase_noise_rad", "gradiometer", required=False, nonneg=True)
    sec = run.data.get("phase") or {}
    potential, _ = cfgmod.parse_potential(run.data, sec, "phase")
    tol = _tolerance(run, sec, "phase")

    def compute():
        up = phase_path_integral(grad.upper, potential, tol)
        low = phase_path_integral(grad.lower, potential, tol)
        diff = up.delta_phi - low.delta_phi
        g0 = scale_factor(grad)
        pairs = [
            ("delta_phi_upper_rad", up.delta_phi),
            ("delta_phi_lower_rad", low.delta_phi),
            ("phase_difference_rad", diff),
            ("error_estimate_rad", up.quadrature_error_estimate + low.quadrature_error_estimate),
            ("k_eff_per_m", grad.lower.k_eff),
            ("baseline_m", grad.baseline),
            ("scale_factor_E_per_rad", g0 / EOTVOS),
            ("gamma_zz_from_phase_E", -g0 * diff / EOTVOS),
        ]
        if hasattr(potential, "source_centers"):
            mid = grad.midpoint
            pairs.append(("gamma_zz_model_midpoint_E", evaluate_tensor(potential, mid)[0, 2, 2] / EOTVOS))
        if noise_rad is not None:
            pairs.append(("min_detectable_gradient_E", min_detectable_gradient(grad, noise_rad)))
        return (
            {"gradiometer.txt": key_value_text(pairs)},
            f"gradiometer: phase difference {diff!r} rad, scale factor {g0 / EOTVOS:.6g} E/rad",
        )

    return compute


NOISE_OPERATIONS = ("resolution", "gravimeters", "averaging-time")


def prepare_noise(run):
    sec = run.data.get("noise") or {}
    op = sec.get("operation")
    if op not in NOISE_OPERATIONS:
        raise ConfigError("noise.operation", f"must be one of {', '.join(NOISE_OPERATIONS)}")
    num = cfgmod._number
    if op == "resolution":
        d = num(sec, "density_E_rtHz", "noise", nonneg=True)
        tau = num(sec, "tau_s", "noise", positive=True)

        def compute():
            r = resolution_after_averaging(d, tau)
            pairs = [("density_E_rtHz", d), ("tau_s", tau), ("resolution_E", r)]
            return {"noise.txt": key_value_text(pairs)}, f"noise: {d:g} E/rtHz over {tau:g} s -> {r:.6g} E"

    elif op == "gravimeters":
        a = num(sec, "accel_noise_g_rtHz", "noise", nonneg=True)
        b = num(sec, "baseline_m", "noise", positive=True)
        try:
            comb = Combination(sec.get("combination", "single"))
        except ValueError:
            raise ConfigError("noise.combination", "must be 'single' or 'rss'") from None

        def compute():
            d = gradiometer_noise_from_gravimeters(a, b, comb)
            pairs = [
                ("accel_noise_g_rtHz", a),
                ("baseline_m", b),
                ("combination", comb.value),
                ("gradient_noise_E_rtHz", d),
            ]
            return {"noise.txt": key_value_text(pairs)}, f"noise: gradiometer density {d:.6g} E/rtHz"

    else:
        d = num(sec, "density_E_rtHz", "noise", positive=True)
        target = num(sec, "target_resolution_E", "noise", positive=True)

        def compute():
            t = required_averaging_time(d, target)
            pairs = [("density_E_rtHz", d), ("target_resolution_E", target), ("averaging_time_s", t)]
            return {"noise.txt": key_value_text(pairs)}, f"noise: {t:.6g} s to reach {target:g} E"

    return compute


def prepare_survey(run):
    model = cfgmod.parse_model(run.data)
    route = cfgmod.parse_route(run.data)
    inst = cfgmod.parse_instrument(run.data)
    seed = run.seed

    def compute():
        series = simulate_survey(route, model, inst, seed)
        profile = anomaly_profile(route, model)
        files = {
            "survey.csv": csv_text(MeasurementSeries.COLUMNS, series.rows()),
            "profile.csv": csv_text(("elevation_m", "g_anomaly_mps2", "gamma_zz_E"), profile),
        }
        return files, f"survey: {len(route.waypoints)} waypoints with {inst.name}, seed {seed}"

    return compute


def prepare_detect(run):
    model = cfgmod.parse_model(run.data)
    inst = cfgmod.parse_instrument(run.data)
    sec = cfgmod.section(run.data, "detect")
    num = cfgmod._number
    r0 = num(sec, "standoff_min_m", "detect", positive=True)
    r1 = num(sec, "standoff_max_m", "detect", positive=True)
    if r1 <= r0:
        raise ConfigError("detect.standoff_max_m", "must exceed standoff_min_m")
    n = int(num(sec, "samples", "detect", default=200, required=False, positive=True))
    dwell = num(sec, "dwell_s", "detect", positive=True)
    threshold = num(sec, "threshold", "detect", default=1.0, required=False, positive=True)
    direction = cfgmod._vector(sec, "direction", "detect", default=(0.0, 0.0, 1.0))
    if not np.any(direction):
        raise ConfigError("detect.direction", "must be non-zero")

    def compute():
        rep = detectability(model, inst, np.geomspace(r0, r1, n), dwell, threshold, direction)
        sweep = zip(rep.ranges, rep.anomaly, rep.snr_profile)
        files = {
            "detect.txt": rep.as_text(),
            "detect_sweep.csv": csv_text(("range_m", "gamma_zz_E", "snr"), sweep),
        }
        return files, f"detect: SNR {rep.snr:.4g}, max detection range {rep.max_detection_range:.4g} m"

    return compute


def prepare_cow_scan(run):
    ifm = cfgmod.parse_interferometer(run.data)
    sec = cfgmod.section(run.data, "cow_scan")
    g = cfgmod._number(sec, "g_mps2", "cow_scan")
    if "angles_rad" in sec:
        try:
            angles = np.asarray(sec["angles_rad"], dtype=float).reshape(-1)
        except (TypeError, ValueError):
            raise ConfigError("cow_scan.angles_rad", "must be a list of numbers") from None
    else:
        n = int(cfgmod._number(sec, "n_angles", "cow_scan", default=32, required=False, positive=True))
        angles = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)

    def compute():
        res = cow_rotation_scan(ifm, g, angles)
        rows = [(a, r.delta_phi) for a, r in zip(angles, res)]
        peak = max(abs(r.delta_phi) for r in res)
        return {"cow_scan.csv": csv_text(("angle_rad", "delta_phi_rad"), rows)}, (
            f"cow-scan: {len(angles)} angles, peak |phase| {peak:.6g} rad"
        )

    return compute


def prepare_instruments(run):
    def compute():
        specs = reference_instruments()
        return {"instruments.csv": instruments_csv(specs)}, f"instruments: {len(specs)} reference entries"

    return compute


PREPARERS = {
    "field": prepare_field,
    "phase": prepare_phase,
    "gradiometer": prepare_gradiometer,
    "noise": prepare_noise,
    "survey": prepare_survey,
    "detect": prepare_detect,
    "cow-scan": prepare_cow_scan,
    "instruments": prepare_instruments,
}


def run(run_config, out=None, err=None):
    """Execute one scenario. Returns the process exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        compute = PREPARERS[run_config.scenario](run_config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return 1
    except ValueError as exc:
        print(f"config error: {exc}", file=err)
        return 1
    try:
        files, summary = compute()
        write_outputs(run_config.output_dir, files)
    except GradiometryError as exc:
        print(f"computation error: {exc}", file=err)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=err)
        return 2
    print(summary, file=out)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="YAML run configuration")
    common.add_argument("-o", "--output-dir", help="directory for output files")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--tolerance", type=float, help="quadrature tolerance override, rad")
    common.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE", help="override a scalar config value"
    )
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="gradiometry", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in ("field", "phase", "gradiometer", "survey", "detect", "cow-scan", "instruments"):
        sub.add_parser(name, parents=[common])
    noise = sub.add_parser("noise", parents=[common])
    noise.add_argument("operation", nargs="?", choices=NOISE_OPERATIONS)
    noise.add_argument("--density", type=float, help="gradient noise density, E/rtHz")
    noise.add_argument("--tau", type=float, help="averaging time, s")
    noise.add_argument("--accel", type=float, help="gravimeter noise density, g/rtHz")
    noise.add_argument("--baseline", type=float, help="baseline, m")
    noise.add_argument("--combination", choices=[c.value for c in Combination])
    noise.add_argument("--target", type=float, help="target resolution, E")
    return parser


_NOISE_FLAGS = {
    "operation": "operation",
    "density": "density_E_rtHz",
    "tau": "tau_s",
    "accel": "accel_noise_g_rtHz",
    "baseline": "baseline_m",
    "combination": "combination",
    "target": "target_resolution_E",
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        data = cfgmod.load_config(args.config) if args.config else {}
        for assignment in args.set:
            cfgmod.apply_override(data, assignment)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if args.scenario == "noise":
        sec = data.setdefault("noise", {}) or {}
        data["noise"] = sec
        for flag, key in _NOISE_FLAGS.items():
            value = getattr(args, flag)
            if value is not None:
                sec[key] = value
    output_dir = args.output_dir or data.get("output_dir") or "out"
    seed = args.seed if args.seed is not None else data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        print("config error: seed: must be an integer", file=sys.stderr)
        return 1
    rc = cfgmod.RunConfig(args.scenario, data, str(output_dir), seed, args.tolerance)
    log.info("scenario %s -> %s", rc.scenario, rc.output_dir)
    return run(rc)


if __name__ == "__main__":
    sys.exit(main())
