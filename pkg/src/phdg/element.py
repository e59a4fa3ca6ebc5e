"""Port-Hamiltonian model of a single DG element.

On ``[z_i, z_{i+1}]`` with trial/test bases ``phi`` (for x1, e1) and ``psi``
(for x2, e2) the element obeys::

    [M1  0] d/dt [x1]   ( [ 0   P] - [R1  0] ) [e1]   [ 0  B1]
    [0  M2]      [x2] = ( [-P^T 0]   [0  R2] ) [e2] + [B2  0] U

with ``e = Q x`` and ``U`` the neighbour contributions from
:func:`element_input_vector`. The first equation is integrated by parts
once and the second twice, which fixes the sign convention of ``P``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import ReferenceBasis, eval_basis, gauss_rule, tabulate
from .flux import FluxParams


@dataclass(frozen=True)
class ElementModel:
    M1: np.ndarray
    M2: np.ndarray
    P: np.ndarray
    R1: np.ndarray
    R2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    c1: float
    c2: float
    interval: tuple[float, float]
    # h-independent volume part of P: integral of d(phi)/dz psi^T
    K: np.ndarray

    @property
    def n1(self) -> int:
        return self.M1.shape[0]

    @property
    def n2(self) -> int:
        return self.M2.shape[0]

    @property
    def M(self) -> np.ndarray:
        return _blockdiag(self.M1, self.M2)

    @property
    def J(self) -> np.ndarray:
        Z1 = np.zeros((self.n1, self.n1))
        Z2 = np.zeros((self.n2, self.n2))
        return np.block([[Z1, self.P], [-self.P.T, Z2]])

    @property
    def R(self) -> np.ndarray:
        return _blockdiag(self.R1, self.R2)

    @property
    def B(self) -> np.ndarray:
        return np.block([
            [np.zeros((self.n1, 2)), self.B1],
            [self.B2, np.zeros((self.n2, 2))],
        ])

    @property
    def Q(self) -> np.ndarray:
        return np.diag(np.concatenate([np.full(self.n1, self.c1), np.full(self.n2, self.c2)]))


def _blockdiag(A, B):
    out = np.zeros((A.shape[0] + B.shape[0], A.shape[1] + B.shape[1]))
    out[: A.shape[0], : A.shape[1]] = A
    out[A.shape[0]:, A.shape[1]:] = B
    return out


def element_matrices(
    interval,
    basis_phi: ReferenceBasis,
    basis_psi: ReferenceBasis,
    params: FluxParams,
    c1: float = 1.0,
    c2: float = 1.0,
    left: FluxParams | None = None,
    right: FluxParams | None = None,
) -> ElementModel:
    """Element matrices for the interval ``(z_i, z_{i+1})``.

    ``left`` and ``right`` override the flux parameters on one face; the
    global assembly uses this for boundary faces, where the ghost-value
    flux carries its own ``beta`` and no penalty.
    """
    zl, zr = float(interval[0]), float(interval[1])
    h = zr - zl
    if not h > 0:
        raise ValueError(f"element width must be positive, got {h}")
    if not (c1 > 0 and c2 > 0):
        raise ValueError(f"constitutive coefficients must be positive, got c1={c1}, c2={c2}")
    left = params if left is None else left
    right = params if right is None else right

    rule = gauss_rule(max(basis_phi.k, basis_psi.k) + 1)
    phi, dphi = tabulate(basis_phi, rule.points)
    psi, _ = tabulate(basis_psi, rule.points)
    wq = rule.weights

    M1 = h * (phi.T * wq) @ phi
    M2 = h * (psi.T * wq) @ psi
    # d/dz = (1/h) d/dzeta and dz = h dzeta cancel
    K = (dphi.T * wq) @ psi

    phi_l, phi_r = eval_basis(basis_phi, 0.0), eval_basis(basis_phi, 1.0)
    psi_l, psi_r = eval_basis(basis_psi, 0.0), eval_basis(basis_psi, 1.0)

    P = K + (1.0 - left.beta) * np.outer(phi_l, psi_l) - right.beta * np.outer(phi_r, psi_r)
    R1 = left.tau * np.outer(phi_l, phi_l) + right.tau * np.outer(phi_r, phi_r)
    R2 = left.xi * np.outer(psi_l, psi_l) + right.xi * np.outer(psi_r, psi_r)
    B1 = np.column_stack([phi_l, phi_r])
    B2 = np.column_stack([psi_l, psi_r])

    # exact symmetry of the mass matrices
    M1 = 0.5 * (M1 + M1.T)
    M2 = 0.5 * (M2 + M2.T)
    return ElementModel(M1=M1, M2=M2, P=P, R1=R1, R2=R2, B1=B1, B2=B2,
                        c1=float(c1), c2=float(c2), interval=(zl, zr), K=K)


def element_hamiltonian(elem: ElementModel, x1, x2) -> float:
    """Stored energy ``(c1 x1^T M1 x1 + c2 x2^T M2 x2) / 2``."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != (elem.n1,) or x2.shape != (elem.n2,):
        raise ValueError(
            f"coefficient shapes {x1.shape}, {x2.shape} do not match basis sizes "
            f"({elem.n1},), ({elem.n2},)")
    return 0.5 * (elem.c1 * x1 @ elem.M1 @ x1 + elem.c2 * x2 @ elem.M2 @ x2)


def element_input_vector(params: FluxParams, e1_prev, e2_prev, e1_next, e2_next) -> np.ndarray:
    """Neighbour input ``U`` of one element.

    ``*_prev`` are the left neighbour's traces at ``z_i``, ``*_next`` the
    right neighbour's traces at ``z_{i+1}``. Rows 0-1 drive the ``x2``
    equation through ``B2``, rows 2-3 the ``x1`` equation through ``B1``.
    """
    b, tau, xi = params.beta, params.tau, params.xi
    return np.array([
        (1.0 - b) * e1_prev + xi * e2_prev,
        -b * e1_next + xi * e2_next,
        b * e2_prev + tau * e1_prev,
        (b - 1.0) * e2_next + tau * e1_next,
    ], dtype=float)
