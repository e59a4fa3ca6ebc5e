"""Eigenvalue analysis of the semi-discrete generator ``M^{-1} (J - R) Q``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import GlobalPHModel

MAX_DENSE_DOF = 4096


class EigenSolverError(RuntimeError):
    pass


@dataclass
class SpectrumResult:
    eigenvalues: np.ndarray      # complex, sorted by (real, imag)
    operator_kind: str

    @property
    def max_real_part(self) -> float:
        return float(self.eigenvalues.real.max())

    @property
    def min_real_part(self) -> float:
        return float(self.eigenvalues.real.min())

    @property
    def spectral_radius(self) -> float:
        return float(np.abs(self.eigenvalues).max())

    def conjugate_defect(self) -> float:
        """Distance between the spectrum and its complex conjugate, matched in sorted order."""
        lam = self.eigenvalues
        conj = np.conj(lam)
        conj = conj[np.lexsort((conj.imag, conj.real))]
        return float(np.max(np.abs(lam - conj))) if lam.size else 0.0


def system_operator(model: GlobalPHModel, include_damping: bool = True,
                    include_constitutive: bool = True) -> np.ndarray:
    """Dense ``M^{-1} J``, ``M^{-1} (J - R)`` or ``M^{-1} (J - R) Q``."""
    if model.n_dof > MAX_DENSE_DOF:
        raise ValueError(
            f"{model.n_dof} degrees of freedom exceed the dense eigenvalue limit {MAX_DENSE_DOF}")
    A = model.J - model.R if include_damping else model.J
    if include_constitutive:
        A = A @ model.Q
    return model.mass_solve(A.toarray())


def eigenvalues(A, kind: str = "generic") -> SpectrumResult:
    """All eigenvalues of a real square matrix (LAPACK balancing + Hessenberg + shifted QR)."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    try:
        lam = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverError(f"eigenvalue iteration did not converge: {exc}") from exc
    lam = lam.astype(complex)
    lam = lam[np.lexsort((lam.imag, lam.real))]
    return SpectrumResult(eigenvalues=lam, operator_kind=kind)


def classify(result: SpectrumResult, rel_tol: float = 1e-8) -> str:
    rho = result.spectral_radius
    tol = rel_tol * rho
    re = result.eigenvalues.real
    if np.max(np.abs(re)) <= tol:
        return "conservative"
    if re.max() <= tol and re.min() < 0:
        return "dissipative"
    return "unstable"


def spectrum_summary(model: GlobalPHModel, include_damping: bool = True,
                     rel_tol: float = 1e-8) -> tuple[str, SpectrumResult]:
    kind = "M^-1 (J-R) Q" if include_damping else "M^-1 J Q"
    res = eigenvalues(system_operator(model, include_damping=include_damping), kind)
    return classify(res, rel_tol), res
