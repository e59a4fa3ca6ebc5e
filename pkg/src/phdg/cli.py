"""``phdg`` command line: simulate, spectrum and structural checks.

Exit codes: 0 success, 1 configuration error, 2 numerical failure
(singular solve, eigensolver breakdown, failed structural check).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .assembly import GlobalPHModel, assemble_global, power_balance_defect, structure_report
from .basis import eval_basis, reference_basis
from .config import ConfigError, RunConfig, load_config
from .io import csv_text, fmt, triplet_text, atomic_write
from .mesh import build_uniform_mesh
from .simulate import SingularSystemError, Trajectory, simulate, step_schedule
from .spectrum import MAX_DENSE_DOF, EigenSolverError, classify, eigenvalues, system_operator

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2


def build_model(cfg: RunConfig) -> GlobalPHModel:
    return assemble_global(
        build_uniform_mesh(cfg.a, cfg.b, cfg.N), reference_basis(cfg.k1), reference_basis(cfg.k2),
        cfg.flux, cfg.bc, cfg.c1, cfg.c2)


def snapshot_name(t: float) -> str:
    return f"snapshot_{t:g}.csv"


def _sample_times(cfg: RunConfig) -> np.ndarray:
    starts, sizes = step_schedule(cfg.T, cfg.dt)
    n = starts.size
    ends = np.append(starts, cfg.T if n else 0.0)
    keep = [0] + [k for k in range(1, n + 1) if k % cfg.output_every == 0 or k == n]
    return ends[keep]


def _check_snapshots(cfg: RunConfig) -> None:
    samples = _sample_times(cfg)
    for i, t in enumerate(cfg.snapshot_times):
        if not np.any(np.abs(samples - t) <= 1e-9 * max(1.0, abs(t))):
            raise ConfigError(
                f"snapshot_times[{i}]: {t} is not a stored sample time "
                f"(dt={cfg.dt}, output_every={cfg.output_every})")


def snapshot_table(model: GlobalPHModel, X) -> tuple[list, list]:
    """Columns ``element, local_node, z, p, q`` with interface points listed once per element."""
    basis = model.basis_phi if model.basis_phi.k >= model.basis_psi.k else model.basis_psi
    nodes = basis.nodes
    phi = np.array([eval_basis(model.basis_phi, s) for s in nodes])
    psi = np.array([eval_basis(model.basis_psi, s) for s in nodes])
    x1, x2 = model.split(X)
    z0 = model.mesh.vertices[:-1]
    h = model.mesh.widths
    elem, local, z, p, q = [], [], [], [], []
    for i in range(model.N):
        pv, qv = phi @ x1[i], psi @ x2[i]
        for j, s in enumerate(nodes):
            elem.append(i + 1)
            local.append(j)
            # exact shared vertex coordinates at element ends
            if j == 0:
                z.append(model.mesh.vertices[i])
            elif j == nodes.size - 1:
                z.append(model.mesh.vertices[i + 1])
            else:
                z.append(z0[i] + h[i] * s)
            p.append(pv[j])
            q.append(qv[j])
    return ["element", "local_node", "z", "p", "q"], [elem, local, z, p, q]


def simulation_files(cfg: RunConfig, model: GlobalPHModel, traj: Trajectory) -> dict[str, str]:
    files = {
        "hamiltonian.csv": csv_text(
            ["t", "H"], [traj.times, traj.hamiltonian_trace[traj.sample_steps]]),
        "outputs.csv": csv_text(
            ["t", "y1", "y2"], [traj.midpoint_times, traj.output_trace[:, 0], traj.output_trace[:, 1]]),
        "power_residual.csv": csv_text(
            ["step", "residual"], [np.arange(traj.n_steps), traj.power_residuals]),
    }
    for t in cfg.snapshot_times:
        header, cols = snapshot_table(model, traj.state_at(t))
        files[snapshot_name(t)] = csv_text(header, cols)
    return files


def matrix_files(model: GlobalPHModel) -> dict[str, str]:
    return {f"{name}.txt": triplet_text(getattr(model, name)) for name in ("M", "J", "R", "G", "Q")}


def _write_all(out: Path, files: dict[str, str]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(files):
        atomic_write(out / name, files[name])


def cmd_simulate(cfg: RunConfig, out: Path, dump_matrices: bool = False) -> int:
    _check_snapshots(cfg)
    model = build_model(cfg)
    traj = simulate(model, cfg.signal(), cfg.T, cfg.dt, cfg.output_every,
                    x0=None if cfg.initial_state is None else np.array(cfg.initial_state))
    files = simulation_files(cfg, model, traj)
    if dump_matrices:
        files.update(matrix_files(model))
    _write_all(out, files)
    H = traj.hamiltonian_trace
    print(f"{model.n_dof} dofs, {traj.n_steps} steps; H(T) = {fmt(H[-1])}, "
          f"max |power residual| = {np.max(np.abs(traj.power_residuals), initial=0.0):.3e}")
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, out: Path, operator: str = "full") -> int:
    model = build_model(cfg)
    if model.n_dof > MAX_DENSE_DOF:
        raise ConfigError(
            f"mesh.N: {model.n_dof} degrees of freedom exceed the dense limit {MAX_DENSE_DOF}")
    full = operator == "full"
    A = system_operator(model, include_damping=full, include_constitutive=full)
    res = eigenvalues(A, "M^-1 (J-R) Q" if full else "M^-1 J")
    label = classify(res)
    lam = res.eigenvalues
    rho = res.spectral_radius
    summary = "\n".join([
        f"classification: {label}",
        f"operator: {res.operator_kind}",
        f"eigenvalues: {lam.size}",
        f"spectral_radius: {fmt(rho)}",
        f"max_real_part: {fmt(res.max_real_part)}",
        f"min_real_part: {fmt(res.min_real_part)}",
        f"max_abs_real_over_radius: {fmt(np.max(np.abs(lam.real)) / rho if rho else 0.0)}",
        f"conjugate_pair_defect: {fmt(res.conjugate_defect())}",
    ]) + "\n"
    _write_all(out, {
        "eigenvalues.csv": csv_text(["re", "im"], [lam.real, lam.imag]),
        "spectrum_summary.txt": summary,
    })
    print(f"{lam.size} eigenvalues, {label}")
    return EXIT_OK


def cmd_check(cfg: RunConfig, n_samples: int = 5, seed: int = 0) -> int:
    model = build_model(cfg)
    report = structure_report(model)
    for line in report.lines():
        print(line)
    rng = np.random.default_rng(seed)
    worst = max(power_balance_defect(model, rng.standard_normal(model.n_dof), rng.standard_normal(2))
                for _ in range(n_samples))
    balance_ok = worst <= 1e-12
    print(f"[{'PASS' if balance_ok else 'FAIL'}] power balance identity "
          f"(max relative defect {worst:.3e} over {n_samples} random states)")
    return EXIT_OK if report.passed and balance_ok else EXIT_NUMERICAL


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="phdg", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run the implicit midpoint simulation and write CSV files")
    s.add_argument("--config", type=Path, help="JSON run configuration (default: wave benchmark)")
    s.add_argument("--out", type=Path, help="output directory")
    s.add_argument("--dump-matrices", action="store_true",
                   help="also write M, J, R, G, Q as coordinate triplets")

    s = sub.add_parser("spectrum", help="eigenvalues of the semi-discrete operator")
    s.add_argument("--config", type=Path)
    s.add_argument("--out", type=Path)
    s.add_argument("--operator", choices=("full", "structure-only"), default="full")

    s = sub.add_parser("check", help="structural checks of the assembled model")
    s.add_argument("--config", type=Path)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else RunConfig()
        if args.command == "check":
            return cmd_check(cfg)
        out = args.out or (Path(cfg.outputs) if cfg.outputs else None)
        if out is None:
            raise ConfigError("outputs: no output directory (use --out)")
        if args.command == "simulate":
            return cmd_simulate(cfg, out, args.dump_matrices)
        return cmd_spectrum(cfg, out, args.operator)
    except ConfigError as exc:
        print(f"phdg: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SingularSystemError, EigenSolverError, np.linalg.LinAlgError) as exc:
        print(f"phdg: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
