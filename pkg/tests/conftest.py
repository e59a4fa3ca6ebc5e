import pytest

from phdg.flux import flux_preset
from phdg.scenario import WaveBenchmark
from phdg.simulate import simulate

BENCH_FLUXES = {
    "central": flux_preset("central"),
    "upwind": flux_preset("upwind_left"),
    "damped_central": flux_preset("damped_central", 0.5),
}


class BenchmarkRuns:
    """Full benchmark simulations, computed once per session and shared."""

    def __init__(self):
        self.bench = WaveBenchmark()
        self._cache = {}

    def run(self, flux: str, N: int = 50, T: float | None = None):
        key = (flux, N, T)
        if key not in self._cache:
            model = self.bench.model(BENCH_FLUXES[flux], N)
            traj = simulate(model, self.bench.signal(), self.bench.T if T is None else T,
                            self.bench.dt)
            self._cache[key] = (model, traj)
        return self._cache[key]


@pytest.fixture(scope="session")
def runs():
    return BenchmarkRuns()


_acceptance_lines = []


@pytest.fixture
def criterion():
    def record(number, text, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {text}"
        if detail:
            line += f"  ({detail})"
        _acceptance_lines.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
