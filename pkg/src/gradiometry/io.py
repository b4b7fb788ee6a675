"""CSV / key-value output helpers with atomic, all-or-nothing writes."""
import csv
import io
import os
import tempfile

import numpy as np

from .noise import InstrumentSpec

INSTRUMENT_COLUMNS = (
    "name",
    "baseline_m",
    "gradient_noise_E_rtHz",
    "accel_noise_g_rtHz",
    "source_note",
)
TENSOR_COLUMNS = tuple(f"gamma_{a}{b}_E" for a in "xyz" for b in "xyz")
PHASE_COLUMNS = ("method", "delta_phi_rad", "error_estimate_rad")


def fmt(value):
    """Shortest round-tripping text for a number; empty for None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def key_value_text(pairs):
    return "".join(f"{k}: {fmt(v)}\n" for k, v in pairs)


def tensor_rows(tensors_si):
    from .constants import EOTVOS

    arr = np.asarray(tensors_si).reshape(-1, 9) / EOTVOS
    return [tuple(row) for row in arr]


def instruments_csv(specs):
    rows = [
        (s.name, s.baseline, s.gradient_noise_density, s.accel_noise_density, s.source_note)
        for s in specs
    ]
    return csv_text(INSTRUMENT_COLUMNS, rows)


def parse_instruments_csv(text):
    """Inverse of :func:`instruments_csv`."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != INSTRUMENT_COLUMNS:
        raise ValueError(f"unexpected instrument table header {header!r}")
    out = []
    for row in reader:
        rec = dict(zip(header, row))

        def num(key):
            return float(rec[key]) if rec[key] != "" else None

        out.append(
            InstrumentSpec(
                name=rec["name"],
                baseline=num("baseline_m"),
                gradient_noise_density=num("gradient_noise_E_rtHz"),
                accel_noise_density=num("accel_noise_g_rtHz"),
                source_note=rec["source_note"],
                short_baseline=rec["baseline_m"] == "",
            )
        )
    return out


def write_outputs(output_dir, files):
    """
    Write ``{filename: text}`` into ``output_dir``.

    Every file is first written to a temporary sibling and renamed only
    after all of them were written, so a failure leaves no partial output.
    """
    os.makedirs(output_dir, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            if os.path.basename(name) != name:
                raise ValueError(f"output name {name!r} must be a plain file name")
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=output_dir)
            staged.append((tmp, os.path.join(output_dir, name)))
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        for tmp, final in staged:
            os.replace(tmp, final)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
    return [final for _, final in staged]
