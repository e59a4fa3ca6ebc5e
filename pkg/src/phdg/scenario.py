"""The boundary-driven wave benchmark and its analytic reference solutions.

States ``p`` (= x1) and ``q`` (= x2) on [0, 1] with ``c1 = c2 = 1``, a sine
pulse ``p(0, t) = sin(8 pi t)`` for ``t < 0.125``, ``q(1, t) = 0`` and zero
initial data.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .assembly import BoundaryConditions, BoundaryKind, GlobalPHModel, assemble_global
from .basis import eval_basis, gauss_rule, reference_basis
from .flux import FluxParams
from .mesh import build_uniform_mesh
from .simulate import InputSignal

PULSE_END = 0.125


def sine_pulse(t: float) -> float:
    """``sin(8 pi t)`` on ``[0, 0.125)``, zero elsewhere."""
    return math.sin(8.0 * math.pi * t) if 0.0 <= t < PULSE_END else 0.0


@dataclass(frozen=True)
class WaveBenchmark:
    a: float = 0.0
    b: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    N: int = 50
    k1: int = 1
    k2: int = 1
    T: float = 1.5
    dt: float = 2.5e-4
    snapshot_times: tuple = (0.5, 1.5)
    bc: BoundaryConditions = field(
        default_factory=lambda: BoundaryConditions(BoundaryKind.DIRICHLET, BoundaryKind.NEUMANN))

    def signal(self) -> InputSignal:
        return InputSignal(sine_pulse, lambda t: 0.0)

    def model(self, params: FluxParams, N: int | None = None) -> GlobalPHModel:
        return assemble_global(
            build_uniform_mesh(self.a, self.b, self.N if N is None else N),
            reference_basis(self.k1), reference_basis(self.k2), params, self.bc,
            self.c1, self.c2)


def exact_pulse_solution(z, t: float, u1=sine_pulse):
    """Characteristic solution ``(p, q)`` of the benchmark for ``0 <= t < 2``.

    The pulse enters at ``z = 0`` moving right with ``p = q``; it reflects at
    ``z = 1`` with ``q`` changing sign and would hit ``z = 0`` again at ``t = 2``.
    """
    if not 0.0 <= t < 2.0:
        raise ValueError(f"characteristic solution valid for 0 <= t < 2, got t={t}")
    z = np.asarray(z, dtype=float)
    if np.any((z < 0.0) | (z > 1.0)):
        raise ValueError("z outside [0, 1]")
    f = np.vectorize(lambda s: u1(s) if s >= 0.0 else 0.0, otypes=[float])
    right = f(t - z)
    left = f(t + z - 2.0)
    p, q = right + left, right - left
    if p.ndim == 0:
        return float(p), float(q)
    return p, q


def exact_eigenfrequencies(m_max: int) -> np.ndarray:
    """Quarter-wave frequencies ``(2m - 1) pi / 2`` for ``p(0) = 0, q(1) = 0``."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    m = np.arange(1, m_max + 1)
    return (2 * m - 1) * math.pi / 2


def nodal_field_values(model: GlobalPHModel, X, zeta) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Physical points and discrete ``(x1, x2)`` values at reference points ``zeta`` of every element.

    Returns arrays of shape (N, len(zeta)).
    """
    zeta = np.asarray(zeta, dtype=float)
    phi = np.array([eval_basis(model.basis_phi, s) for s in zeta])
    psi = np.array([eval_basis(model.basis_psi, s) for s in zeta])
    x1, x2 = model.split(X)
    z0 = model.mesh.vertices[:-1, None]
    h = model.mesh.widths[:, None]
    return z0 + h * zeta[None, :], x1 @ phi.T, x2 @ psi.T


def l2_error(model: GlobalPHModel, X, t: float, exact=exact_pulse_solution) -> float:
    """``sqrt(int (x1_h - p)^2 + (x2_h - q)^2 dz)`` with elementwise Gauss quadrature."""
    rule = gauss_rule(max(model.basis_phi.k, model.basis_psi.k) + 2)
    z, ph, qh = nodal_field_values(model, X, rule.points)
    p, q = exact(z, t)
    h = model.mesh.widths[:, None]
    integrand = (ph - p) ** 2 + (qh - q) ** 2
    return math.sqrt(float(np.sum(h * integrand * rule.weights[None, :])))


def interpolate(model: GlobalPHModel, fields) -> np.ndarray:
    """Nodal coefficients of ``fields(z) -> (x1, x2)`` on every element (discontinuous)."""
    X = np.empty(model.n_dof)
    x1, x2 = model.split(X)
    z0 = model.mesh.vertices[:-1, None]
    h = model.mesh.widths[:, None]
    x1[:] = fields(z0 + h * model.basis_phi.nodes[None, :])[0]
    x2[:] = fields(z0 + h * model.basis_psi.nodes[None, :])[1]
    return X
