"""Nodal Lagrange bases on the reference interval [0, 1] and Gauss quadrature.

Nodes are Gauss-Lobatto-Legendre points, so both interval endpoints are
interpolation nodes and element traces are single nodal coefficients.
Evaluation uses the barycentric form.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre


@dataclass(frozen=True)
class QuadratureRule:
    points: np.ndarray
    weights: np.ndarray

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Contract the leading (point) axis of ``values`` with the weights."""
        return np.tensordot(self.weights, values, axes=(0, 0))


@dataclass(frozen=True)
class ReferenceBasis:
    """Lagrange basis of degree ``k`` with nodes ``0 = nodes[0] < ... < nodes[k] = 1``."""

    k: int
    nodes: np.ndarray
    bary_weights: np.ndarray
    diff_matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.k + 1


def gll_nodes(k: int) -> np.ndarray:
    """Gauss-Lobatto-Legendre nodes of degree ``k`` mapped to [0, 1]."""
    if k == 1:
        x = np.array([-1.0, 1.0])
    else:
        interior = legendre.Legendre.basis(k).deriv().roots().real
        x = np.concatenate(([-1.0], np.sort(interior), [1.0]))
    nodes = 0.5 * (x + 1.0)
    # exact endpoints and mirror symmetry about 1/2
    nodes = 0.5 * (nodes + (1.0 - nodes[::-1]))
    nodes[0], nodes[-1] = 0.0, 1.0
    return nodes


def reference_basis(k: int) -> ReferenceBasis:
    if int(k) != k or k < 1:
        raise ValueError(f"basis degree must be an integer >= 1, got {k}")
    k = int(k)
    nodes = gll_nodes(k)
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    w = 1.0 / np.prod(diff, axis=1)

    # D[i, j] = l_j'(node_i)
    D = (w[None, :] / w[:, None]) / diff
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))

    for arr in (nodes, w, D):
        arr.setflags(write=False)
    return ReferenceBasis(k=k, nodes=nodes, bary_weights=w, diff_matrix=D)


def _check_coordinate(zeta: float) -> float:
    zeta = float(zeta)
    if not 0.0 <= zeta <= 1.0:
        raise ValueError(f"reference coordinate {zeta} outside [0, 1]")
    return zeta


def eval_basis(basis: ReferenceBasis, zeta: float) -> np.ndarray:
    """Values ``[l_0(zeta), ..., l_k(zeta)]``."""
    zeta = _check_coordinate(zeta)
    d = zeta - basis.nodes
    # closer than this the nodal value is exact to rounding and w/d may overflow
    hit = np.flatnonzero(np.abs(d) < 1e-150)
    if hit.size:
        out = np.zeros(basis.size)
        out[hit[0]] = 1.0
        return out
    c = basis.bary_weights / d
    return c / c.sum()


def eval_basis_deriv(basis: ReferenceBasis, zeta: float) -> np.ndarray:
    """Reference-coordinate derivatives ``[l_0'(zeta), ..., l_k'(zeta)]``.

    Each derivative is a polynomial of degree ``k - 1``, so interpolating its
    nodal values (rows of the differentiation matrix) is exact. Divide by the
    element width to obtain physical derivatives.
    """
    return eval_basis(basis, zeta) @ basis.diff_matrix


def gauss_rule(n: int) -> QuadratureRule:
    """``n``-point Gauss-Legendre rule on [0, 1]; exact up to degree ``2n - 1``."""
    if int(n) != n or n < 1:
        raise ValueError(f"quadrature point count must be >= 1, got {n}")
    x, w = legendre.leggauss(int(n))
    return QuadratureRule(points=0.5 * (x + 1.0), weights=0.5 * w)


def tabulate(basis: ReferenceBasis, points) -> tuple[np.ndarray, np.ndarray]:
    """Basis values and reference derivatives at ``points``, each of shape (npts, k+1)."""
    vals = np.array([eval_basis(basis, p) for p in points])
    ders = np.array([eval_basis_deriv(basis, p) for p in points])
    return vals, ders
