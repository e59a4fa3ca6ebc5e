"""JSON run configuration.

Every key is optional and defaults to the wave benchmark (N = 50 linear
elements on [0, 1], central flux, sine pulse at the left end, T = 1.5,
dt = 2.5e-4). Unknown keys are rejected.

Example::

    {
      "mesh": {"a": 0.0, "b": 1.0, "N": 50},
      "degrees": {"k1": 1, "k2": 1},
      "material": {"c1": 1.0, "c2": 1.0},
      "flux": {"preset": "damped_central", "c": 0.5},
      "boundary": {"left": "dirichlet", "right": "neumann",
                   "u1": "paper_pulse", "u2": "zero"},
      "time": {"T": 1.5, "dt": 2.5e-4, "output_every": 1},
      "snapshot_times": [0.5, 1.5]
    }

``flux`` may also be a preset name (``"central"``) or explicit
``{"beta": ..., "tau": ..., "xi": ...}``. Signals are ``"paper_pulse"``,
``"zero"``, ``"constant:<v>"`` or ``"sine:<amp>:<freq>:<t_off>"``
(``amp sin(2 pi freq t)`` for ``0 <= t < t_off``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .assembly import BoundaryConditions, BoundaryKind
from .flux import PRESETS, FluxParams, flux_preset
from .scenario import sine_pulse
from .simulate import InputSignal


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    a: float = 0.0
    b: float = 1.0
    N: int = 50
    k1: int = 1
    k2: int = 1
    c1: float = 1.0
    c2: float = 1.0
    flux: FluxParams = field(default_factory=lambda: flux_preset("central"))
    bc: BoundaryConditions = field(default_factory=BoundaryConditions)
    u1: str = "paper_pulse"
    u2: str = "zero"
    T: float = 1.5
    dt: float = 2.5e-4
    output_every: int = 1
    snapshot_times: tuple = (0.5, 1.5)
    initial_state: tuple | None = None
    outputs: str | None = None

    def signal(self) -> InputSignal:
        return InputSignal(parse_signal(self.u1, "boundary.u1"), parse_signal(self.u2, "boundary.u2"))


_SECTIONS = {
    "mesh": {"a", "b", "N"},
    "degrees": {"k1", "k2"},
    "material": {"c1", "c2"},
    "flux": None,
    "boundary": {"left", "right", "u1", "u2"},
    "time": {"T", "dt", "output_every"},
    "snapshot_times": None,
    "initial_state": None,
    "outputs": None,
}


def _number(value, name, *, positive=False, nonnegative=False, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{name}: must be finite")
    if integer and int(value) != value:
        raise ConfigError(f"{name}: expected an integer, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{name}: must be positive, got {value!r}")
    if nonnegative and not value >= 0:
        raise ConfigError(f"{name}: must be nonnegative, got {value!r}")
    return int(value) if integer else float(value)


def _section(doc, key):
    sec = doc.get(key, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"{key}: expected an object")
    unknown = set(sec) - _SECTIONS[key]
    if unknown:
        raise ConfigError(f"{key}.{sorted(unknown)[0]}: unknown key")
    return sec


def parse_signal(spec: str, name: str = "signal") -> Callable[[float], float]:
    if not isinstance(spec, str):
        raise ConfigError(f"{name}: expected a signal name, got {spec!r}")
    if spec == "paper_pulse":
        return sine_pulse
    if spec == "zero":
        return lambda t: 0.0
    kind, _, rest = spec.partition(":")
    try:
        args = [float(x) for x in rest.split(":")] if rest else []
    except ValueError:
        raise ConfigError(f"{name}: malformed signal {spec!r}") from None
    if kind == "constant" and len(args) == 1 and math.isfinite(args[0]):
        v = args[0]
        return lambda t: v
    if kind == "sine" and len(args) == 3 and all(map(math.isfinite, args)):
        amp, freq, t_off = args
        return lambda t: amp * math.sin(2 * math.pi * freq * t) if 0.0 <= t < t_off else 0.0
    raise ConfigError(f"{name}: unknown signal {spec!r}")


def _parse_flux(value) -> FluxParams:
    if isinstance(value, str):
        value = {"preset": value}
    if not isinstance(value, dict):
        raise ConfigError("flux: expected a preset name or an object")
    try:
        if "preset" in value:
            unknown = set(value) - {"preset", "c"}
            if unknown:
                raise ConfigError(f"flux.{sorted(unknown)[0]}: unknown key")
            name = value["preset"]
            if name not in PRESETS:
                raise ConfigError(f"flux.preset: unknown preset {name!r}")
            c = value.get("c")
            if c is not None:
                c = _number(c, "flux.c", positive=True)
            return flux_preset(name, c)
        unknown = set(value) - {"beta", "tau", "xi"}
        if unknown:
            raise ConfigError(f"flux.{sorted(unknown)[0]}: unknown key")
        beta = _number(value.get("beta", 0.5), "flux.beta")
        if not 0.0 <= beta <= 1.0:
            raise ConfigError(f"flux.beta: must lie in [0, 1], got {beta}")
        tau = _number(value.get("tau", 0.0), "flux.tau", nonnegative=True)
        xi = _number(value.get("xi", 0.0), "flux.xi", nonnegative=True)
        return FluxParams(beta, tau, xi)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"flux: {exc}") from None


def parse_config(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("config: expected a JSON object")
    unknown = set(doc) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown key")
    kw = {}

    mesh = _section(doc, "mesh")
    kw["a"] = _number(mesh.get("a", 0.0), "mesh.a")
    kw["b"] = _number(mesh.get("b", 1.0), "mesh.b")
    if not kw["a"] < kw["b"]:
        raise ConfigError(f"mesh.b: must exceed mesh.a ({kw['a']}), got {kw['b']}")
    kw["N"] = _number(mesh.get("N", 50), "mesh.N", integer=True, positive=True)

    deg = _section(doc, "degrees")
    for k in ("k1", "k2"):
        kw[k] = _number(deg.get(k, 1), f"degrees.{k}", integer=True, positive=True)

    mat = _section(doc, "material")
    for c in ("c1", "c2"):
        kw[c] = _number(mat.get(c, 1.0), f"material.{c}", positive=True)

    kw["flux"] = _parse_flux(doc.get("flux", "central"))

    bnd = _section(doc, "boundary")
    kinds = {}
    for side, default in (("left", "dirichlet"), ("right", "neumann")):
        v = bnd.get(side, default)
        try:
            kinds[side] = BoundaryKind(v)
        except ValueError:
            raise ConfigError(f"boundary.{side}: expected 'dirichlet' or 'neumann', got {v!r}") from None
    kw["bc"] = BoundaryConditions(kinds["left"], kinds["right"])
    for u, default in (("u1", "paper_pulse"), ("u2", "zero")):
        kw[u] = bnd.get(u, default)
        parse_signal(kw[u], f"boundary.{u}")

    tm = _section(doc, "time")
    kw["T"] = _number(tm.get("T", 1.5), "time.T", nonnegative=True)
    kw["dt"] = _number(tm.get("dt", 2.5e-4), "time.dt", positive=True)
    kw["output_every"] = _number(tm.get("output_every", 1), "time.output_every",
                                 integer=True, positive=True)

    snaps = doc.get("snapshot_times", [0.5, 1.5])
    if not isinstance(snaps, list):
        raise ConfigError("snapshot_times: expected a list of times")
    snaps = tuple(_number(s, f"snapshot_times[{i}]", nonnegative=True) for i, s in enumerate(snaps))
    for i, s in enumerate(snaps):
        if s > kw["T"] + 1e-12:
            raise ConfigError(f"snapshot_times[{i}]: {s} lies beyond time.T = {kw['T']}")
    kw["snapshot_times"] = snaps

    init = doc.get("initial_state")
    if init is not None:
        n_dof = kw["N"] * (kw["k1"] + kw["k2"] + 2)
        if not isinstance(init, list) or len(init) != n_dof:
            raise ConfigError(f"initial_state: expected a list of {n_dof} numbers")
        kw["initial_state"] = tuple(_number(v, f"initial_state[{i}]") for i, v in enumerate(init))

    out = doc.get("outputs")
    if out is not None and not isinstance(out, str):
        raise ConfigError("outputs: expected a directory path")
    kw["outputs"] = out
    return RunConfig(**kw)


def load_config(path) -> RunConfig:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {path}: {exc}") from None
    return parse_config(doc)
