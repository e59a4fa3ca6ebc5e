"""Global port-Hamiltonian model ``M dX/dt = (J - R) E + G U``, ``E = Q X``.

Degrees of freedom are ordered element-major and field-major inside each
element: ``[x1 of element 1, x2 of element 1, x1 of element 2, ...]``, so
``M`` and ``Q`` are block diagonal.

``J`` is built from a coupling matrix ``C`` whose only nonzeros map ``e2``
onto ``x1`` equations, and ``J = C - C^T``. Every entry is therefore paired
with its exact negative and ``J + J^T`` vanishes identically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.sparse as sp

from .basis import ReferenceBasis
from .element import element_matrices
from .flux import FluxParams, interface_flux
from .mesh import Mesh1D


class BoundaryKind(str, Enum):
    DIRICHLET = "dirichlet"   # e1 prescribed
    NEUMANN = "neumann"       # n * e2 prescribed


@dataclass(frozen=True)
class BoundaryConditions:
    """Boundary kind at ``a`` (outer normal -1) and at ``b`` (outer normal +1).

    Column 0 of the input map carries the input at ``a``, column 1 the input
    at ``b``. On a Neumann side the input is ``n * e2``, so the conjugate
    output is ``-e1`` on either side; on a Dirichlet side it is ``-n * e2``.
    """

    left: BoundaryKind = BoundaryKind.DIRICHLET
    right: BoundaryKind = BoundaryKind.NEUMANN

    def __post_init__(self):
        object.__setattr__(self, "left", BoundaryKind(self.left))
        object.__setattr__(self, "right", BoundaryKind(self.right))


@dataclass(frozen=True)
class BoundaryFlux:
    """Ghost-value realization of a boundary flux.

    The boundary face uses the interface flux with ``tau = xi = 0`` and the
    given ``beta``, the exterior trace of the prescribed effort being the
    input (times ``sign``). ``input_field`` names which effort the input sets.
    """

    ghost: FluxParams
    input_field: str
    sign: float

    def fluxes(self, side: str, e1_interior: float, e2_interior: float, u: float):
        """``(e1*, e2*)`` at this boundary for interior traces and input ``u``."""
        ghost_e1 = self.sign * u if self.input_field == "e1" else 0.0
        ghost_e2 = self.sign * u if self.input_field == "e2" else 0.0
        if side == "left":
            return interface_flux(self.ghost, ghost_e1, e1_interior, ghost_e2, e2_interior)
        return interface_flux(self.ghost, e1_interior, ghost_e1, e2_interior, ghost_e2)


def boundary_flux_rule(bc: BoundaryConditions) -> tuple[BoundaryFlux, BoundaryFlux]:
    """Boundary fluxes at ``a`` and ``b``.

    Dirichlet side: ``e1* = u``, ``e2*`` = interior trace.
    Neumann side: ``e1*`` = interior trace, ``e2* = n u``.
    """
    def rule(kind, n):
        # beta selects the exterior e1 on the Dirichlet side and the exterior e2 on the Neumann side
        if kind is BoundaryKind.DIRICHLET:
            beta = 0.0 if n < 0 else 1.0
            return BoundaryFlux(FluxParams(beta, 0.0, 0.0), "e1", 1.0)
        beta = 1.0 if n < 0 else 0.0
        return BoundaryFlux(FluxParams(beta, 0.0, 0.0), "e2", float(n))

    return rule(bc.left, -1), rule(bc.right, +1)


@dataclass(frozen=True, eq=False)
class GlobalPHModel:
    M: sp.csr_matrix
    J: sp.csr_matrix
    R: sp.csr_matrix
    G: sp.csr_matrix
    Q: sp.csr_matrix
    mesh: Mesh1D
    basis_phi: ReferenceBasis
    basis_psi: ReferenceBasis
    params: FluxParams
    bc: BoundaryConditions
    c1: float
    c2: float
    # per-element mass blocks, shapes (N, n1, n1) and (N, n2, n2)
    M1_blocks: np.ndarray = field(repr=False)
    M2_blocks: np.ndarray = field(repr=False)
    q_diag: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return self.mesh.N

    @property
    def n1(self) -> int:
        return self.basis_phi.size

    @property
    def n2(self) -> int:
        return self.basis_psi.size

    @property
    def n_dof(self) -> int:
        return self.N * (self.n1 + self.n2)

    def x1_dofs(self, i: int) -> np.ndarray:
        """Global indices of the ``x1`` coefficients of 0-based element ``i``."""
        off = i * (self.n1 + self.n2)
        return np.arange(off, off + self.n1)

    def x2_dofs(self, i: int) -> np.ndarray:
        off = i * (self.n1 + self.n2) + self.n1
        return np.arange(off, off + self.n2)

    def split(self, X) -> tuple[np.ndarray, np.ndarray]:
        """Views ``(x1, x2)`` of shape (N, n1) and (N, n2)."""
        Xb = np.asarray(X).reshape(self.N, self.n1 + self.n2)
        return Xb[:, : self.n1], Xb[:, self.n1:]

    def efforts(self, X) -> np.ndarray:
        return self.q_diag * X

    def mass_apply(self, X) -> np.ndarray:
        x1, x2 = self.split(X)
        out = np.empty((self.N, self.n1 + self.n2))
        out[:, : self.n1] = np.einsum("nij,nj->ni", self.M1_blocks, x1)
        out[:, self.n1:] = np.einsum("nij,nj->ni", self.M2_blocks, x2)
        return out.reshape(-1)

    def mass_solve(self, Y) -> np.ndarray:
        """``M^{-1} Y`` through the per-block Cholesky factors.

        ``Y`` may be a vector or a matrix with ``n_dof`` rows.
        """
        Y = np.asarray(Y, dtype=float)
        vec = Y.ndim == 1
        Yb = Y.reshape(self.N, self.n1 + self.n2, -1)
        out = np.empty_like(Yb)
        L1, L2 = self._cholesky
        out[:, : self.n1] = _chol_solve(L1, Yb[:, : self.n1])
        out[:, self.n1:] = _chol_solve(L2, Yb[:, self.n1:])
        return out.reshape(-1) if vec else out.reshape(Y.shape)

    @property
    def _cholesky(self):
        cached = self.__dict__.get("_chol")
        if cached is None:
            cached = (np.linalg.cholesky(self.M1_blocks), np.linalg.cholesky(self.M2_blocks))
            object.__setattr__(self, "_chol", cached)
        return cached

    def hamiltonian(self, X) -> float:
        X = np.asarray(X, dtype=float)
        if X.shape != (self.n_dof,):
            raise ValueError(f"state has shape {X.shape}, expected ({self.n_dof},)")
        return 0.5 * float(X @ (self.q_diag * self.mass_apply(X)))


def _chol_solve(L, B):
    y = np.linalg.solve(L, B)
    return np.linalg.solve(np.swapaxes(L, -1, -2), y)


def assemble_global(
    mesh: Mesh1D,
    basis_phi: ReferenceBasis,
    basis_psi: ReferenceBasis,
    params: FluxParams,
    bc: BoundaryConditions | None = None,
    c1: float = 1.0,
    c2: float = 1.0,
) -> GlobalPHModel:
    bc = BoundaryConditions() if bc is None else bc
    left_rule, right_rule = boundary_flux_rule(bc)
    N = mesh.N
    n1, n2 = basis_phi.size, basis_psi.size
    nb = n1 + n2
    n_dof = N * nb

    h = mesh.widths

    # reference element (h = 1); mass matrices scale with h, the coupling
    # and penalty matrices do not depend on h
    ref = element_matrices((0.0, 1.0), basis_phi, basis_psi, params, c1, c2)
    P = np.broadcast_to(ref.P, (N, n1, n2)).copy()
    R1 = np.broadcast_to(ref.R1, (N, n1, n1)).copy()
    R2 = np.broadcast_to(ref.R2, (N, n2, n2)).copy()
    for i in {0, N - 1}:
        el = element_matrices(
            (0.0, 1.0), basis_phi, basis_psi, params, c1, c2,
            left=left_rule.ghost if i == 0 else params,
            right=right_rule.ghost if i == N - 1 else params)
        P[i], R1[i], R2[i] = el.P, el.R1, el.R2
    M1_blocks = h[:, None, None] * ref.M1
    M2_blocks = h[:, None, None] * ref.M2

    x1_off = np.arange(N) * nb
    x2_off = x1_off + n1
    C = _Triplets()
    Rt = _Triplets()
    Mt = _Triplets()
    C.add_batch(x1_off, x2_off, P)
    Rt.add_batch(x1_off, x1_off, R1)
    Rt.add_batch(x2_off, x2_off, R2)
    Mt.add_batch(x1_off, x1_off, M1_blocks)
    Mt.add_batch(x2_off, x2_off, M2_blocks)

    b = params.beta
    phi_l, phi_r = ref.B1.T
    psi_l, psi_r = ref.B2.T
    # interfaces between element i (left) and i + 1 (right)
    L1, L2 = x1_off[:-1], x2_off[:-1]
    R1o, R2o = x1_off[1:], x2_off[1:]
    C.add_batch(L1, R2o, (b - 1.0) * np.outer(phi_r, psi_l))
    C.add_batch(R1o, L2, b * np.outer(phi_l, psi_r))
    if params.tau != 0.0:
        cross = -params.tau * np.outer(phi_r, phi_l)
        Rt.add_batch(L1, R1o, cross)
        Rt.add_batch(R1o, L1, cross.T)
    if params.xi != 0.0:
        cross = -params.xi * np.outer(psi_r, psi_l)
        Rt.add_batch(L2, R2o, cross)
        Rt.add_batch(R2o, L2, cross.T)

    Cm = C.to_csr((n_dof, n_dof))
    J = (Cm - Cm.T).tocsr()
    J.eliminate_zeros()
    R = Rt.to_csr((n_dof, n_dof))
    R.eliminate_zeros()
    M = Mt.to_csr((n_dof, n_dof))

    G = np.zeros((n_dof, 2))
    first, last = 0, (N - 1) * nb
    for col, rule, off, trace1, trace2 in (
        (0, left_rule, first, phi_l, psi_l),
        (1, right_rule, last, phi_r, psi_r),
    ):
        n = -1.0 if col == 0 else 1.0
        # the x1 equation sees -n e2*, the x2 equation sees -n (e1* - e1)
        if rule.input_field == "e1":
            G[off + n1: off + nb, col] = -n * rule.sign * trace2
        else:
            G[off: off + n1, col] = -n * rule.sign * trace1
    G = sp.csr_matrix(G)

    q_diag = np.tile(np.concatenate([np.full(n1, float(c1)), np.full(n2, float(c2))]), N)
    Q = sp.diags(q_diag, format="csr")

    return GlobalPHModel(
        M=M, J=J, R=R, G=G, Q=Q, mesh=mesh, basis_phi=basis_phi, basis_psi=basis_psi,
        params=params, bc=bc, c1=float(c1), c2=float(c2),
        M1_blocks=M1_blocks, M2_blocks=M2_blocks,
        q_diag=q_diag,
    )


class _Triplets:
    """Coordinate-format accumulator with deterministic insertion order."""

    def __init__(self):
        self.rows, self.cols, self.vals = [], [], []

    def add_batch(self, row_offsets, col_offsets, blocks):
        """Place ``blocks[e]`` (or one shared block) at ``(row_offsets[e], col_offsets[e])``."""
        row_offsets = np.asarray(row_offsets)
        if row_offsets.size == 0:
            return
        blocks = np.broadcast_to(np.asarray(blocks, dtype=float),
                                 (row_offsets.size,) + np.shape(blocks)[-2:])
        nr, nc = blocks.shape[1:]
        rr = row_offsets[:, None, None] + np.arange(nr)[None, :, None]
        cc = np.asarray(col_offsets)[:, None, None] + np.arange(nc)[None, None, :]
        rr, cc = np.broadcast_arrays(rr, cc)
        mask = blocks != 0.0
        self.rows.append(rr[mask])
        self.cols.append(cc[mask])
        self.vals.append(blocks[mask])

    def to_csr(self, shape):
        if not self.vals:
            return sp.csr_matrix(shape)
        return sp.coo_matrix(
            (np.concatenate(self.vals), (np.concatenate(self.rows), np.concatenate(self.cols))),
            shape=shape,
        ).tocsr()


@dataclass
class StructureReport:
    skew_defect: float          # max |J + J^T|
    r_asymmetry: float          # max |R - R^T|
    r_min_eig: float
    r_norm: float
    r_rank: int
    m_min_eig: float
    m_cholesky_ok: bool
    conservative: bool
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        out = [
            f"max|J+J^T|      = {self.skew_defect:.3e}",
            f"max|R-R^T|      = {self.r_asymmetry:.3e}",
            f"min eig(R)      = {self.r_min_eig:.3e}  (||R|| = {self.r_norm:.3e}, rank {self.r_rank})",
            f"min eig(M)      = {self.m_min_eig:.3e}  (Cholesky {'ok' if self.m_cholesky_ok else 'FAILED'})",
        ]
        if self.conservative:
            out.append("R ≡ 0 (conservative)")
        for name, ok in self.checks.items():
            out.append(f"[{'PASS' if ok else 'FAIL'}] {name}")
        return out


def structure_report(model: GlobalPHModel, rel_tol: float = 1e-13) -> StructureReport:
    """Measure skew-symmetry of J, symmetry/semidefiniteness of R and definiteness of M."""
    J, R = model.J, model.R
    skew = abs(J + J.T).max() if J.nnz else 0.0
    r_asym = abs(R - R.T).max() if R.nnz else 0.0

    Rd = R.toarray()
    if R.nnz:
        ev = np.linalg.eigvalsh(0.5 * (Rd + Rd.T))
        r_norm = float(np.max(np.abs(ev)))
        r_min = float(ev.min())
        r_rank = int(np.sum(ev > r_norm * model.n_dof * np.finfo(float).eps))
    else:
        r_norm = r_min = 0.0
        r_rank = 0
    conservative = R.nnz == 0

    try:
        model._cholesky
        chol_ok = True
    except np.linalg.LinAlgError:
        chol_ok = False
    m_min = min(float(np.linalg.eigvalsh(model.M1_blocks).min()),
                float(np.linalg.eigvalsh(model.M2_blocks).min()))

    checks = {
        "J skew-symmetric (exact)": skew == 0.0,
        "R symmetric (exact)": r_asym == 0.0,
        "R positive semidefinite": r_min >= -rel_tol * r_norm,
        "R == 0 for conservative flux": (not model.params.is_conservative()) or conservative,
        "M symmetric positive definite": chol_ok and m_min > 0,
    }
    return StructureReport(
        skew_defect=float(skew), r_asymmetry=float(r_asym), r_min_eig=r_min, r_norm=r_norm,
        r_rank=r_rank, m_min_eig=m_min, m_cholesky_ok=chol_ok, conservative=conservative,
        checks=checks,
    )


def power_balance_defect(model: GlobalPHModel, X, U) -> float:
    """Relative defect of ``dH/dt = Y^T U - E^T R E`` for the state ``X`` and input ``U``.

    ``dH/dt`` is evaluated as the gradient ``Q M X`` applied to the rate
    ``M^{-1} ((J - R) E + G U)``.
    """
    X = np.asarray(X, dtype=float)
    U = np.asarray(U, dtype=float)
    E = model.efforts(X)
    rate = model.mass_solve((model.J - model.R) @ E + model.G @ U)
    grad = model.q_diag * model.mass_apply(X)
    lhs = float(grad @ rate)
    Y = model.G.T @ E
    dissipation = float(E @ (model.R @ E))
    rhs = float(Y @ U) - dissipation
    scale = max(abs(float(Y @ U)), dissipation, abs(float(E @ (model.J @ E))), np.finfo(float).tiny)
    return abs(lhs - rhs) / scale
