import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import robin_lambda, robin_phi
from robinrd.mesh import build_interval, build_rectangle, integrate_volume, l2_norm
from robinrd.operator import assemble, dirichlet_energy, quadratic_form
from robinrd.spectral import (
    EigenError,
    certify_positivity,
    first_eigenpair,
    poincare_friedrichs_constant,
    robin_eigenvalue_interval,
)


def test_interval_helper_matches_bisection_oracle():
    for c in (0.1, 1.0, 10.0, 100.0):
        assert robin_eigenvalue_interval(c) == pytest.approx(robin_lambda(c), rel=1e-13)
    assert robin_eigenvalue_interval(1.0, 2.0) == pytest.approx(robin_lambda(1.0, 2.0), rel=1e-13)


def test_interval_eigenvalue_second_order():
    exact = robin_lambda(1.0)
    errs = []
    for n in (257, 513, 1025):
        pair = first_eigenpair(assemble(build_interval(n, 1.0), 1.0))
        errs.append(abs(pair.lambda1 - exact))
    assert errs[-1] <= 1e-6
    assert all(1.8 <= math.log2(errs[i] / errs[i + 1]) <= 2.2 for i in range(2))


def test_eigenfunction_shape_matches_oracle():
    g = build_interval(257, 1.0)
    pair = first_eigenpair(assemble(g, 1.0))
    (x,) = g.mesh()
    ref = robin_phi(1.0, x)
    ref /= integrate_volume(g, ref)
    assert np.max(np.abs(pair.phi1 - ref)) < 1e-4
    assert integrate_volume(g, pair.phi1) == pytest.approx(1.0, abs=1e-13)


def test_dirichlet_limit():
    pair = first_eigenpair(assemble(build_interval(257, 1.0), 1e6))
    assert abs(pair.lambda1 - math.pi**2) < 1e-2
    rep = certify_positivity(pair)
    assert rep.passed and rep.minimum < 1e-4 and rep.on_boundary


def test_square_is_tensor_product():
    g = build_rectangle(65, 65, 1.0, 1.0)
    pair = first_eigenpair(assemble(g, 1.0))
    g1 = build_interval(65, 1.0)
    p1 = first_eigenpair(assemble(g1, 1.0))
    assert pair.lambda1 == pytest.approx(2 * p1.lambda1, rel=1e-10)
    np.testing.assert_allclose(pair.phi1, np.outer(p1.phi1, p1.phi1).ravel(), rtol=1e-7)
    assert abs(pair.lambda1 - 2 * robin_lambda(1.0)) < 1e-3


def test_rayleigh_quotient_and_residual():
    g = build_rectangle(33, 17, 1.0, 0.5)
    op = assemble(g, 2.0)
    pair = first_eigenpair(op, tol=1e-10)
    rq = quadratic_form(op, pair.phi1) / l2_norm(g, pair.phi1) ** 2
    assert rq == pytest.approx(pair.lambda1, rel=1e-10)
    assert pair.residual <= 1e-10


def test_zero_coefficient_rejected():
    with pytest.raises(ValueError, match="Robin coefficient must be positive for eigen mode"):
        first_eigenpair(assemble(build_interval(9, 1.0), 0.0))


def test_neumann_mode_constant_ground_state():
    g = build_interval(33, 2.0)
    pair = first_eigenpair(assemble(g, 0.0), allow_neumann=True)
    assert abs(pair.lambda1) < 1e-10
    np.testing.assert_allclose(pair.phi1, 0.5, rtol=1e-9)
    assert certify_positivity(pair).minimum == pytest.approx(0.5)


def test_iteration_limit():
    with pytest.raises(EigenError):
        first_eigenpair(assemble(build_interval(65, 1.0), 1.0), max_iter=1)


def test_positivity_minimum_at_endpoint():
    g = build_interval(129, 1.0)
    rep = certify_positivity(first_eigenpair(assemble(g, 1.0)))
    assert rep.passed and rep.on_boundary
    assert rep.location[0] in (0.0, 1.0)


def test_poincare_constant_equals_eigenvalue_and_is_monotone():
    g = build_interval(129, 1.0)
    assert poincare_friedrichs_constant(g, 1.0) == first_eigenpair(assemble(g, 1.0)).lambda1
    vals = [poincare_friedrichs_constant(g, beta) for beta in (0.01, 0.1, 1.0)]
    assert vals[0] < vals[1] < vals[2]
    assert vals[0] < 0.03


@settings(max_examples=25, deadline=None)
@given(
    dim=st.sampled_from([1, 2]),
    beta=st.floats(0.05, 20.0),
    seed=st.integers(0, 2**32 - 1),
)
def test_poincare_inequality_on_random_fields(dim, beta, seed):
    g = build_interval(41, 1.0) if dim == 1 else build_rectangle(15, 11, 1.0, 1.0)
    c_f = poincare_friedrichs_constant(g, beta)
    op = assemble(g, beta)
    v = np.random.default_rng(seed).normal(size=g.size)
    grad, bd = dirichlet_energy(op, v)
    rhs = grad + beta * bd
    assert rhs - c_f * l2_norm(g, v) ** 2 >= -1e-10 * rhs
