"""Parameterized numerical flux family for the two-field conservation law.

At an interface the traces of the element on the smaller-coordinate side
("left") and the larger side ("right") are combined as::

    e1* = (1 - beta) e1_left + beta e1_right + xi  (e2_left - e2_right)
    e2* = beta e2_left + (1 - beta) e2_right + tau (e1_left - e1_right)

``tau`` penalizes jumps of ``e1`` and therefore produces the dissipation
block acting on the ``x1`` equation; ``xi`` does the same for ``x2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class FluxParams:
    beta: float = 0.5
    tau: float = 0.0
    xi: float = 0.0

    def __post_init__(self):
        for name in ("beta", "tau", "xi"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValueError(f"flux parameter {name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if not 0.0 <= self.beta <= 1.0:
            raise ValueError(f"beta must lie in [0, 1], got {self.beta}")
        if self.tau < 0.0:
            raise ValueError(f"tau must be nonnegative, got {self.tau}")
        if self.xi < 0.0:
            raise ValueError(f"xi must be nonnegative, got {self.xi}")

    def is_conservative(self) -> bool:
        return self.tau == 0.0 and self.xi == 0.0


PRESETS = ("central", "upwind_left", "upwind_right", "lax_friedrichs", "damped_central")


def flux_preset(name: str, c: float | None = None) -> FluxParams:
    """Named flux parameter sets.

    ``lax_friedrichs`` and ``damped_central`` take the penalty ``c > 0``
    (both give ``beta = 0.5, tau = xi = c``).
    """
    if name == "central":
        return FluxParams(0.5, 0.0, 0.0)
    if name == "upwind_left":
        return FluxParams(0.0, 0.0, 0.0)
    if name == "upwind_right":
        return FluxParams(1.0, 0.0, 0.0)
    if name in ("lax_friedrichs", "damped_central"):
        if c is None or not c > 0:
            raise ValueError(f"flux preset {name!r} needs a penalty c > 0, got {c!r}")
        return FluxParams(0.5, float(c), float(c))
    raise ValueError(f"unknown flux preset {name!r}; expected one of {', '.join(PRESETS)}")


def interface_flux(params: FluxParams, e1_left, e1_right, e2_left, e2_right):
    """Single-valued interface efforts ``(e1*, e2*)`` from the two traces."""
    b = params.beta
    e1_star = (1.0 - b) * e1_left + b * e1_right + params.xi * (e2_left - e2_right)
    e2_star = b * e2_left + (1.0 - b) * e2_right + params.tau * (e1_left - e1_right)
    return e1_star, e2_star
