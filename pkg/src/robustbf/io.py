"""CSV import/export for matrices, snapshots, weights, spectra and tables.

Complex rows are stored interleaved: ``re_0, im_0, re_1, im_1, ...``.
Floats are written with ``repr`` so files round-trip exactly.
"""

import csv
import io

import numpy as np

from .array_model import SnapshotSet


def _interleave(row):
    out = np.empty(2 * row.size)
    out[0::2] = row.real
    out[1::2] = row.imag
    return out


def _deinterleave(values):
    values = np.asarray(values, dtype=float)
    if values.size % 2:
        raise ValueError("interleaved complex row must have an even number of fields")
    return values[0::2] + 1j * values[1::2]


def _open(dest):
    if hasattr(dest, "write"):
        return dest, False
    return open(dest, "w", newline=""), True


def _fmt(x):
    return repr(float(x))


def _write_rows(dest, header, rows):
    fh, close = _open(dest)
    try:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    finally:
        if close:
            fh.close()


def _read_rows(src, header=True):
    if hasattr(src, "read"):
        text = src.read()
    else:
        with open(src, newline="") as fh:
            text = fh.read()
    rows = list(csv.reader(io.StringIO(text)))
    return (rows[0], rows[1:]) if header else (None, rows)


def write_complex_matrix(dest, M):
    """One CSV row per matrix row, interleaved re/im, no header."""
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    _write_rows(dest, None, (_interleave(r) for r in M))


def read_complex_matrix(src):
    _, rows = _read_rows(src, header=False)
    return np.array([_deinterleave([float(v) for v in r]) for r in rows if r])


def write_snapshots(dest, snapshots):
    """One CSV row per snapshot (interleaved re/im of its N elements)."""
    write_complex_matrix(dest, snapshots.snapshots.T)


def read_snapshots(src, seed=None):
    return SnapshotSet(read_complex_matrix(src).T, seed=seed)


def write_weights(dest, w):
    w = np.asarray(getattr(w, "weights", w), dtype=complex)
    _write_rows(dest, ["re", "im"], ((z.real, z.imag) for z in w))


def read_weights(src):
    _, rows = _read_rows(src)
    return np.array([float(r[0]) + 1j * float(r[1]) for r in rows if r])


def write_spectrum(dest, thetas, values, value_name="value"):
    thetas = np.asarray(thetas, dtype=float)
    _write_rows(dest, ["theta_rad", "theta_deg", value_name],
                zip(thetas, np.rad2deg(thetas), np.asarray(values, dtype=float)))


def read_spectrum(src):
    header, rows = _read_rows(src)
    data = np.array([[float(v) for v in r] for r in rows if r])
    return data[:, header.index("theta_rad")], data[:, -1]


def write_dispersion_table(dest, rows):
    """Rows of ``(method, parameter, dispersion)``."""
    _write_rows(dest, ["method", "parameter", "dispersion"],
                ((m, p, d) for m, p, d in rows))


def read_dispersion_table(src):
    _, rows = _read_rows(src)
    return [(r[0], r[1], float(r[2])) for r in rows if r]


def write_run_records(dest, records, grid):
    """Long-format per-trial spectra: one row per (method, trial, angle)."""
    header = ["method", "trial", "seed", "covariance_digest", "theta_rad", "theta_deg",
              "value", "contribution", "error"]

    def rows():
        for r in records:
            for t, v in zip(grid, r.values):
                yield (r.method, str(r.trial), str(r.seed), r.covariance_digest,
                       t, np.rad2deg(t), v, r.contribution, r.error or "")

    _write_rows(dest, header, rows())
