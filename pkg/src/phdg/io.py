"""Plain-text outputs: CSV tables and coordinate-format matrix dumps.

Floats are written with 17 significant digits so that every value
round-trips to the same double.
"""
from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, columns) -> str:
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_csv(path, header, columns) -> None:
    atomic_write(Path(path), csv_text(header, columns))


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


def triplet_text(A) -> str:
    """``# shape rows cols`` followed by ``row col value`` lines in row-major order."""
    A = sp.coo_matrix(A)
    order = np.lexsort((A.col, A.row))
    lines = [f"# shape {A.shape[0]} {A.shape[1]}"]
    for r, c, v in zip(A.row[order], A.col[order], A.data[order]):
        if v != 0.0:
            lines.append(f"{r} {c} {fmt(v)}")
    return "\n".join(lines) + "\n"


def write_triplets(path, A) -> None:
    atomic_write(Path(path), triplet_text(A))


def read_triplets(path) -> sp.csr_matrix:
    with open(path) as fh:
        head = fh.readline().split()
        if head[:2] != ["#", "shape"]:
            raise ValueError(f"{path}: missing '# shape' header")
        shape = (int(head[2]), int(head[3]))
        rows, cols, vals = [], [], []
        for line in fh:
            r, c, v = line.split()
            rows.append(int(r))
            cols.append(int(c))
            vals.append(float(v))
    return sp.csr_matrix((vals, (rows, cols)), shape=shape)
