import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phdg.flux import flux_preset
from phdg.scenario import (
    PULSE_END, WaveBenchmark, exact_eigenfrequencies, exact_pulse_solution, interpolate,
    l2_error, nodal_field_values, sine_pulse,
)
from phdg.simulate import simulate

BENCH = WaveBenchmark()


def test_pulse_shape():
    assert sine_pulse(-0.01) == 0.0
    assert sine_pulse(1 / 16) == pytest.approx(1.0, abs=1e-15)
    assert sine_pulse(PULSE_END) == 0.0
    assert abs(sine_pulse(PULSE_END - 1e-12)) < 1e-9   # continuous at the switch-off


def test_benchmark_defaults():
    assert (BENCH.N, BENCH.k1, BENCH.k2, BENCH.T, BENCH.dt) == (50, 1, 1, 1.5, 2.5e-4)
    model = BENCH.model(flux_preset("central"))
    assert model.n_dof == 200


def test_incident_peak():
    p, q = exact_pulse_solution(0.4375, 0.5)
    assert p == pytest.approx(1.0, abs=1e-14)
    assert q == pytest.approx(1.0, abs=1e-14)


def test_pulse_support_at_half():
    z = np.linspace(0, 1, 401)
    p, q = exact_pulse_solution(z, 0.5)
    outside = (z < 0.375) | (z > 0.5)
    assert np.all(np.abs(p[outside]) <= 1e-12)
    assert np.all(np.abs(q[outside]) <= 1e-12)
    assert np.max(p) == pytest.approx(1.0, abs=1e-3)


def test_reflected_peak():
    p, q = exact_pulse_solution(0.5625, 1.5)
    assert p == pytest.approx(1.0, abs=1e-14)
    assert q == pytest.approx(-1.0, abs=1e-14)


def test_zero_initial_state():
    p, q = exact_pulse_solution(np.linspace(0, 1, 11), 0.0)
    assert not p.any() and not q.any()


@pytest.mark.parametrize("t", [2.0, 3.0, -0.1])
def test_rejects_times_outside_validity(t):
    with pytest.raises(ValueError):
        exact_pulse_solution(0.5, t)


def test_rejects_points_outside_domain():
    with pytest.raises(ValueError):
        exact_pulse_solution([0.5, 1.2], 0.5)


@settings(max_examples=60, deadline=None)
@given(z=st.floats(0, 1), t=st.floats(0, 1.99), s=st.floats(-0.3, 0.3))
def test_characteristic_invariants(z, t, s):
    """p + q travels right and p - q travels left at unit speed."""
    z2, t2 = z + s, t + s
    if not (0 <= z2 <= 1 and 0 <= t2 < 2):
        return
    p, q = exact_pulse_solution(z, t)
    p2, q2 = exact_pulse_solution(z2, t2)
    assert p + q == pytest.approx(p2 + q2, abs=1e-12)
    z3, t3 = z - s, t + s
    if not (0 <= z3 <= 1 and 0 <= t3 < 2):
        return
    p3, q3 = exact_pulse_solution(z3, t3)
    assert p - q == pytest.approx(p3 - q3, abs=1e-12)


def test_boundary_conditions_hold():
    for t in np.linspace(0, 1.99, 50):
        p0, _ = exact_pulse_solution(0.0, t)
        _, q1 = exact_pulse_solution(1.0, t)
        assert p0 == pytest.approx(sine_pulse(t), abs=1e-14)
        assert q1 == pytest.approx(0.0, abs=1e-14)


def test_eigenfrequencies():
    w = exact_eigenfrequencies(5)
    assert w[0] == pytest.approx(1.570796, abs=1e-6)
    assert w[1] == pytest.approx(3 * math.pi / 2)
    np.testing.assert_allclose(np.diff(w), math.pi)
    with pytest.raises(ValueError):
        exact_eigenfrequencies(0)


def test_nodal_values_reproduce_nodes():
    model = BENCH.model(flux_preset("central"), N=4)
    X = np.arange(model.n_dof, dtype=float)
    z, x1, x2 = nodal_field_values(model, X, [0.0, 1.0])
    a, b = model.split(X)
    np.testing.assert_allclose(x1, a)
    np.testing.assert_allclose(x2, b)
    np.testing.assert_allclose(z[:, 0], model.mesh.vertices[:-1])


def test_l2_error_of_zero_is_zero():
    model = BENCH.model(flux_preset("central"))
    zero = lambda z, t: (np.zeros_like(z), np.zeros_like(z))  # noqa: E731
    assert l2_error(model, np.zeros(model.n_dof), 0.5, zero) == 0.0


def test_l2_error_exact_polynomial_is_zero():
    model = BENCH.model(flux_preset("central"), N=3)
    lin = lambda z, t=None: (2 * z - 1, -z)  # noqa: E731
    X = interpolate(model, lin)
    assert l2_error(model, X, 0.0, lin) <= 1e-14


def test_interpolation_error_bounds():
    model = BENCH.model(flux_preset("central"))
    X = interpolate(model, lambda z: exact_pulse_solution(z, 0.5))
    err = l2_error(model, X, 0.5)
    zero = np.zeros(model.n_dof)
    norm = l2_error(model, zero, 0.5)
    assert 0.0 < err < norm


def test_upwind_beats_central_at_half():
    errs = {}
    for name in ("central", "upwind_left"):
        model = BENCH.model(flux_preset(name))
        traj = simulate(model, BENCH.signal(), 0.5, BENCH.dt, output_every=2000)
        errs[name] = l2_error(model, traj.state_at(0.5), 0.5)
    assert errs["upwind_left"] < errs["central"]
