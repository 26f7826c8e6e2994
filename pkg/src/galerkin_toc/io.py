"""CSV/JSON artifact serialization.

Floats are written with 17 significant digits, which round-trips every IEEE
double exactly, so re-reading a CSV reproduces the in-memory table bit for bit.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .residual import Unknowns


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_csv(path, header, rows) -> None:
    """Write a numeric table; ``rows`` is an iterable of sequences or a 2-D array."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def read_csv(path):
    """Return ``(header, float array)``; the inverse of :func:`write_csv`."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        data = [[float(v) for v in row] for row in reader]
    return header, np.array(data, dtype=float).reshape(len(data), len(header))


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=False, allow_nan=True) + "\n", encoding="utf-8")


def unknowns_to_dict(u: Unknowns) -> dict:
    return {
        "alpha": u.alpha.tolist(),
        "lambda_x": float(u.lambda_xy[0]),
        "lambda_y": float(u.lambda_xy[1]),
        "beta_theta": u.beta_theta.tolist(),
        "T": float(u.T),
    }


def unknowns_from_dict(data: dict) -> Unknowns:
    missing = [k for k in ("alpha", "lambda_x", "lambda_y", "beta_theta", "T") if k not in data]
    if missing:
        raise ValueError(f"{missing[0]}: missing from unknowns file")
    return Unknowns(
        alpha=np.array(data["alpha"], dtype=float),
        lambda_xy=(float(data["lambda_x"]), float(data["lambda_y"])),
        beta_theta=np.array(data["beta_theta"], dtype=float),
        T=float(data["T"]),
    )


def load_unknowns(path) -> Unknowns:
    return unknowns_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
