"""One-dimensional meshes: an ordered subdivision of [a, b] into elements."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Mesh1D:
    """Ordered vertices ``z_1 < ... < z_{N+1}`` with ``z_1 = a`` and ``z_{N+1} = b``.

    Vertices are stored once, so neighbouring elements share bit-identical
    interface coordinates.
    """

    vertices: np.ndarray

    def __post_init__(self):
        z = np.array(self.vertices, dtype=float)
        if z.ndim != 1 or z.size < 2:
            raise ValueError("a mesh needs at least two vertices")
        if not np.all(np.isfinite(z)):
            raise ValueError("mesh vertices must be finite")
        if not np.all(np.diff(z) > 0):
            raise ValueError("mesh vertices must be strictly increasing")
        z.setflags(write=False)
        object.__setattr__(self, "vertices", z)

    @property
    def a(self) -> float:
        return float(self.vertices[0])

    @property
    def b(self) -> float:
        return float(self.vertices[-1])

    @property
    def N(self) -> int:
        return self.vertices.size - 1

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.vertices)


def build_uniform_mesh(a: float, b: float, N: int) -> Mesh1D:
    """Equidistant mesh of ``N`` elements on ``[a, b]``."""
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if int(N) != N or N < 1:
        raise ValueError(f"element count must be a positive integer, got {N}")
    N = int(N)
    z = a + np.arange(N + 1) * ((b - a) / N)
    z[0], z[-1] = a, b
    return Mesh1D(z)


def element_interval(mesh: Mesh1D, i: int) -> tuple[float, float]:
    """Return ``(z_i, z_{i+1})`` for the 1-based element index ``i``."""
    if not 1 <= i <= mesh.N:
        raise IndexError(f"element index {i} outside 1..{mesh.N}")
    return float(mesh.vertices[i - 1]), float(mesh.vertices[i])
