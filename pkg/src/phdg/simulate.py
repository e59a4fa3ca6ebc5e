"""Implicit midpoint time integration of the assembled port-Hamiltonian model.

For linear dynamics with a quadratic Hamiltonian the midpoint rule satisfies
the discrete power balance

    H(X_{n+1}) - H(X_n) = dt * (Y_m . U_m - E_m . R E_m)

exactly, with ``X_m`` the step midpoint. The per-step defect of this identity
is recorded as the power residual and only measures linear-solve rounding.
"""
from __future__ import annotations

import math
import weakref
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .assembly import GlobalPHModel


class SingularSystemError(RuntimeError):
    """The midpoint system matrix ``E - dt/2 A`` could not be factorized."""


@dataclass(frozen=True)
class InputSignal:
    """Boundary inputs: ``u1`` at the left end, ``u2`` at the right end."""

    u1: Callable[[float], float]
    u2: Callable[[float], float]

    def __call__(self, t: float) -> np.ndarray:
        return np.array([self.u1(t), self.u2(t)], dtype=float)


def zero_signal() -> InputSignal:
    return InputSignal(lambda t: 0.0, lambda t: 0.0)


class LinearPHSystem:
    """``E dx/dt = A x + G u`` with effort map ``e(x)`` and energy ``H(x)``.

    Midpoint factorizations are cached per step size.
    """

    def __init__(self, E, A, G, R, effort, hamiltonian):
        self.E = sp.csc_matrix(E)
        self.A = sp.csc_matrix(A)
        self.G = sp.csr_matrix(G)
        self.R = sp.csr_matrix(R)
        self.effort = effort
        self.hamiltonian = hamiltonian
        self._factors: dict[float, tuple] = {}

    @property
    def n(self) -> int:
        return self.E.shape[0]

    def factor(self, dt: float):
        cached = self._factors.get(dt)
        if cached is None:
            lhs = (self.E - (0.5 * dt) * self.A).tocsc()
            rhs = (self.E + (0.5 * dt) * self.A).tocsr()
            try:
                lu = spla.splu(lhs)
            except RuntimeError as exc:
                raise SingularSystemError(f"midpoint matrix singular for dt={dt}: {exc}") from exc
            if not np.all(np.isfinite(lu.U.diagonal())) or np.any(lu.U.diagonal() == 0):
                raise SingularSystemError(f"midpoint matrix singular for dt={dt}")
            cached = (lu, rhs)
            self._factors[dt] = cached
        return cached

    def step(self, x, t, dt, u: InputSignal):
        lu, rhs = self.factor(dt)
        um = u(t + 0.5 * dt)
        return lu.solve(rhs @ x + dt * (self.G @ um)), um


_systems: "weakref.WeakKeyDictionary[object, LinearPHSystem]" = weakref.WeakKeyDictionary()


def _linear_system(model) -> LinearPHSystem:
    if isinstance(model, CoenergyModel):
        return model.system
    system = _systems.get(model)
    if system is None:
        if isinstance(model, GlobalPHModel):
            system = LinearPHSystem(
                model.M, (model.J - model.R) @ model.Q, model.G, model.R,
                effort=model.efforts, hamiltonian=model.hamiltonian)
        else:
            # any object exposing M, J, R, Q, G (dense or sparse)
            M = sp.csr_matrix(model.M)
            Q = sp.csr_matrix(model.Q)
            system = LinearPHSystem(
                M, (sp.csr_matrix(model.J) - sp.csr_matrix(model.R)) @ Q, model.G, model.R,
                effort=lambda x: Q @ x,
                hamiltonian=lambda x: 0.5 * float(x @ (Q @ (M @ x))))
        _systems[model] = system
    return system


def hamiltonian(model, X) -> float:
    """Stored energy ``X^T Q M X / 2`` of a state of ``model``."""
    return _linear_system(model).hamiltonian(np.asarray(X, dtype=float))


def implicit_midpoint_step(model, X_n, t_n: float, dt: float, u: InputSignal) -> np.ndarray:
    """One step ``(M - dt/2 (J-R)Q) X_{n+1} = (M + dt/2 (J-R)Q) X_n + dt G U(t_n + dt/2)``."""
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    x_new, _ = _linear_system(model).step(np.asarray(X_n, dtype=float), t_n, dt, u)
    return x_new


@dataclass
class Trajectory:
    step_times: np.ndarray           # t_0 .. t_n
    hamiltonian_trace: np.ndarray    # H(t_k) for every step
    midpoint_times: np.ndarray       # t_k + dt_k / 2
    input_trace: np.ndarray          # U at midpoints, shape (n, 2)
    output_trace: np.ndarray         # Y = G^T E at midpoints, shape (n, 2)
    power_residuals: np.ndarray      # per-step power balance defect
    times: np.ndarray                # decimated sample times
    sample_steps: np.ndarray         # step index of each entry of ``times``
    states: np.ndarray = field(repr=False)  # states at ``times``, shape (len(times), n_dof)

    @property
    def n_steps(self) -> int:
        return self.power_residuals.size

    def state_at(self, t: float) -> np.ndarray:
        """Stored state at sample time ``t`` (matched to 1e-9 relative)."""
        idx = np.flatnonzero(np.abs(self.times - t) <= 1e-9 * max(1.0, abs(t)))
        if idx.size == 0:
            raise KeyError(f"time {t} is not a stored sample time")
        return self.states[idx[0]]


def step_schedule(T: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Step start times and step sizes covering [0, T]; the last step is shortened if needed."""
    if not T >= 0:
        raise ValueError(f"final time must be nonnegative, got {T}")
    if not dt > 0:
        raise ValueError(f"time step must be positive, got {dt}")
    n_full = math.floor(T / dt + 1e-9)
    starts = np.arange(n_full) * dt
    sizes = np.full(n_full, float(dt))
    rest = T - n_full * dt
    if rest > 1e-9 * dt:
        starts = np.append(starts, n_full * dt)
        sizes = np.append(sizes, rest)
    return starts, sizes


def simulate(model, u: InputSignal, T: float, dt: float, output_every: int = 1,
             x0=None) -> Trajectory:
    """Integrate from ``t = 0`` to ``T``.

    ``model`` is a :class:`GlobalPHModel` or a :class:`CoenergyModel`. States
    are stored every ``output_every`` steps and at the final time.
    """
    if int(output_every) != output_every or output_every < 1:
        raise ValueError(f"output_every must be a positive integer, got {output_every}")
    system = _linear_system(model)
    starts, sizes = step_schedule(T, dt)
    n = starts.size
    x = np.zeros(system.n) if x0 is None else np.array(x0, dtype=float)
    if x.shape != (system.n,):
        raise ValueError(f"initial state has shape {x.shape}, expected ({system.n},)")

    H = np.empty(n + 1)
    U = np.empty((n, 2))
    Y = np.empty((n, 2))
    res = np.empty(n)
    H[0] = system.hamiltonian(x)
    keep_k, keep_x = [0], [x.copy()]

    for k in range(n):
        t, h = starts[k], sizes[k]
        x_new, um = system.step(x, t, h, u)
        e_mid = system.effort(0.5 * (x + x_new))
        y = system.G.T @ e_mid
        H[k + 1] = system.hamiltonian(x_new)
        res[k] = (H[k + 1] - H[k]) - h * (y @ um - e_mid @ (system.R @ e_mid))
        U[k], Y[k] = um, y
        x = x_new
        if (k + 1) % output_every == 0 or k == n - 1:
            keep_k.append(k + 1)
            keep_x.append(x.copy())

    step_times = np.append(starts, T if n else 0.0)
    return Trajectory(
        step_times=step_times, hamiltonian_trace=H, midpoint_times=starts + 0.5 * sizes,
        input_trace=U, output_trace=Y, power_residuals=res,
        times=step_times[keep_k], sample_steps=np.array(keep_k), states=np.array(keep_x),
    )


class CoenergyModel:
    """The model in coordinates ``X~ = M X``: ``dX~/dt = (J - R) E + G U`` with ``E = Q M^{-1} X~``.

    The efforts are the gradient of ``H = X~^T M^{-1} Q X~ / 2``, so this is
    the input-state-output form with unchanged output ``Y = G^T E``.
    """

    def __init__(self, model: GlobalPHModel):
        self.model = model
        JR = (model.J - model.R).tocsr()
        # (J - R) Q M^{-1} = (M^{-1} Q (J - R)^T)^T by symmetry of M and Q
        A = model.mass_solve((model.Q @ JR.T).toarray()).T
        self.system = LinearPHSystem(
            sp.identity(model.n_dof, format="csc"), sp.csc_matrix(A), model.G, model.R,
            effort=self.efforts, hamiltonian=self.hamiltonian)

    def to_coenergy(self, X) -> np.ndarray:
        return self.model.mass_apply(X)

    def from_coenergy(self, Xt) -> np.ndarray:
        return self.model.mass_solve(Xt)

    def efforts(self, Xt) -> np.ndarray:
        return self.model.q_diag * self.model.mass_solve(Xt)

    def hamiltonian(self, Xt) -> float:
        Xt = np.asarray(Xt, dtype=float)
        return 0.5 * float(Xt @ self.efforts(Xt))


def coenergy_transform(model: GlobalPHModel) -> CoenergyModel:
    return CoenergyModel(model)
