"""File formats: measure JSON, function CSV, report CSVs, good-function sidecar.

Writers go through a temporary file in the target directory and rename it
into place, so a failed run never leaves a partial file behind.
"""
from __future__ import annotations

import contextlib
import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ValidationError
from .graphs.functions import SampledFunction
from .graphs.goodfn import GoodFunction
from .measures import AtomicMeasure1D, AtomicMeasure2D, DecayEstimate
from .slicing import EnergyReport


def _fmt(v: float) -> str:
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def atomic_write(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def measure_to_dict(mu) -> dict:
    if isinstance(mu, AtomicMeasure2D):
        atoms = [[float(x), float(y)] for x, y in mu.atoms]
    else:
        atoms = [float(t) for t in mu.atoms]
    return {"atoms": atoms, "weights": [float(w) for w in mu.weights]}


def measure_from_dict(d: dict):
    try:
        atoms, weights = d["atoms"], d["weights"]
    except (KeyError, TypeError):
        raise ValidationError("measure JSON needs 'atoms' and 'weights'") from None
    if not isinstance(atoms, list) or not isinstance(weights, list) or not atoms:
        raise ValidationError("'atoms' and 'weights' must be non-empty lists")
    try:
        if isinstance(atoms[0], list):
            return AtomicMeasure2D(np.array(atoms, dtype=float), np.array(weights, dtype=float))
        return AtomicMeasure1D(np.array(atoms, dtype=float), np.array(weights, dtype=float))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed measure: {exc}") from None


def write_measure(mu, path) -> None:
    atomic_write(path, json.dumps(measure_to_dict(mu)) + "\n")


def read_measure(path):
    try:
        with open(path) as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc.msg})") from None
    return measure_from_dict(d)


def write_function(f: SampledFunction, path) -> None:
    atomic_write(path, _csv_text(["x", "value"], zip(f.xs.tolist(), f.values.tolist())))


def read_function(path) -> SampledFunction:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["x", "value"]:
        raise ValidationError(f"{path}: expected header 'x,value'")
    try:
        data = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float)
    except ValueError:
        raise ValidationError(f"{path}: every row needs two numeric columns") from None
    if data.size == 0:
        raise ValidationError(f"{path}: no data rows")
    return SampledFunction(data[:, 0], data[:, 1])


def decay_csv_text(est: DecayEstimate) -> str:
    rows = [(a.R, a.sup_modulus, a.argmax.xi1, a.argmax.xi2) for a in est.annuli]
    return _csv_text(["R", "sup_modulus", "argmax_xi1", "argmax_xi2"], rows)


def write_decay(est: DecayEstimate, path) -> None:
    atomic_write(path, decay_csv_text(est))


def read_decay_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def decay_summary(est: DecayEstimate) -> dict:
    return {
        "fitted_slope": est.fitted_slope,
        "exponent_s": est.exponent_s,
        "conservative_s": est.conservative_s,
        "constant_C": est.constant_C,
        "cutoff": est.cutoff if math.isfinite(est.cutoff) else None,
        "samples_per_unit": est.samples_per_unit,
        "fit_on_trusted": est.fit_on_trusted,
        "trusted": [a.trusted for a in est.annuli],
        "warning": est.warning,
    }


def energy_csv_text(report: EnergyReport) -> str:
    rows = [(float(t), float(m), float(e)) for t, m, e in report.rows()]
    return _csv_text(["t", "tube_mass", "energy"], rows)


def write_energy(report: EnergyReport, path) -> None:
    atomic_write(path, energy_csv_text(report))


def read_energy_rows(path) -> list[dict]:
    with open(path, newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


def goodfn_sidecar(g: GoodFunction) -> dict:
    return {
        "N": int(g.N),
        "epsilon": float(g.epsilon),
        "delta": float(g.delta),
        "horizontal_idx": [int(i) for i in g.horizontal_idx],
        "vertical_idx": [int(i) for i in g.vertical_idx],
    }


def write_goodfn(g: GoodFunction, function_path, sidecar_path) -> None:
    write_function(g.fn, function_path)
    atomic_write(sidecar_path, json.dumps(goodfn_sidecar(g)) + "\n")


def read_goodfn(function_path, sidecar_path) -> GoodFunction:
    fn = read_function(function_path)
    with open(sidecar_path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{sidecar_path}: not valid JSON ({exc.msg})") from None
    try:
        return GoodFunction(fn, int(d["N"]), np.array(d["horizontal_idx"], dtype=np.intp),
                            np.array(d["vertical_idx"], dtype=np.intp),
                            float(d["epsilon"]), float(d["delta"]))
    except (KeyError, TypeError, ValueError):
        raise ValidationError(f"{sidecar_path}: malformed good-function sidecar") from None
