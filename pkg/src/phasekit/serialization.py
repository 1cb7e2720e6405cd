"""JSON dumps of operators and states, and the fixed-precision CSV writer."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .fock_core import ComplexOperator, StateVector

TWO_MODE_ORDERING = "total-then-nfwd"
FORWARD_ORDERING = "forward"


def basis_header(tag: str) -> dict:
    kind, n = tag.split(":")
    ordering = TWO_MODE_ORDERING if kind == "two-mode" else FORWARD_ORDERING
    return {"n_max": int(n), "ordering": ordering}


def tag_from_header(header: dict) -> str:
    ordering = header["ordering"]
    if ordering not in (TWO_MODE_ORDERING, FORWARD_ORDERING):
        raise ValueError(f"unknown ordering {ordering!r}")
    kind = "two-mode" if ordering == TWO_MODE_ORDERING else "forward"
    return f"{kind}:{int(header['n_max'])}"


def _pairs(values: np.ndarray) -> list:
    flat = np.asarray(values, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def to_dict(obj) -> dict:
    if isinstance(obj, ComplexOperator):
        arr = obj.matrix
    elif isinstance(obj, StateVector):
        arr = obj.coeffs
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return {"basis": basis_header(obj.tag), "shape": list(arr.shape), "entries": _pairs(arr)}


def from_dict(data: dict):
    tag = tag_from_header(data["basis"])
    shape = tuple(data["shape"])
    entries = np.asarray(data["entries"], dtype=float)
    if entries.shape != (int(np.prod(shape)), 2):
        raise ValueError(f"entries do not match shape {shape}")
    values = (entries[:, 0] + 1j * entries[:, 1]).reshape(shape)
    if len(shape) == 1:
        return StateVector(values, tag, normalized=bool(np.isclose(np.linalg.norm(values), 1.0)))
    return ComplexOperator(values, tag)


def dumps(obj) -> str:
    return json.dumps(to_dict(obj), separators=(",", ":"))


def loads(text: str):
    return from_dict(json.loads(text))


def fmt(value) -> str:
    """17 significant digits, enough to round-trip a double."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
