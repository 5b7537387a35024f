import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.polynomial import polynomial as P

from stgalerkin.errors import InvalidCount, InvalidDegree, OutOfDomain
from stgalerkin.spatial import (assemble, build_graded_space, build_space, evaluate_fe,
                                interpolate_fe, l2_project_space, lobatto_nodes,
                                ritz_project_space)

PI = np.pi


def l2_error(space, dofs, f, npts=20, derivative=False):
    x, w, _, _ = space.quadrature(npts)
    vals = evaluate_fe(space, dofs, x.ravel(), derivative).reshape(x.shape)
    return np.sqrt(np.sum(w * (vals - f(x)) ** 2))


def test_dof_counts_and_sizes():
    assert build_space(0, 1, 4, 1).n_dofs == 3
    assert build_space(0, 1, 3, 2).n_dofs == 5
    assert build_space(0, 2, 5, 1).h == pytest.approx(0.4)


def test_build_errors():
    with pytest.raises(InvalidCount):
        build_space(0, 1, 1, 1)
    with pytest.raises(InvalidDegree):
        build_space(0, 1, 4, 7)
    with pytest.raises(ValueError):
        build_space(1, 0, 4, 1)
    with pytest.raises(InvalidCount):
        build_graded_space([0.0, 0.5, 0.4], 1)


def test_lobatto_nodes():
    assert np.allclose(lobatto_nodes(1), [-1, 1])
    assert np.allclose(lobatto_nodes(2), [-1, 0, 1])
    assert np.allclose(lobatto_nodes(3), [-1, -1 / np.sqrt(5), 1 / np.sqrt(5), 1])


def test_p1_rows_by_hand():
    space = build_space(0, 1, 8, 1)
    h = space.h
    ops = assemble(space)
    assert ops.mass[3, 2:5] == pytest.approx([h / 6, 2 * h / 3, h / 6])
    assert ops.stiffness[3, 2:5] == pytest.approx([-1 / h, 2 / h, -1 / h])


def _lagrange_element_matrices(p, h):
    """Element mass/stiffness from monomial Lagrange polynomials on (0, h)."""
    nodes = 0.5 * h * (lobatto_nodes(p) + 1)
    basis = [P.polyfit(nodes, np.eye(p + 1)[k], p) for k in range(p + 1)]
    integ = lambda c: P.polyval(h, P.polyint(c)) - P.polyval(0, P.polyint(c))
    me = np.array([[integ(P.polymul(a, b)) for b in basis] for a in basis])
    ke = np.array([[integ(P.polymul(P.polyder(a), P.polyder(b))) for b in basis] for a in basis])
    return me, ke


@pytest.mark.parametrize("p", [1, 2, 3, 4])
def test_assembly_against_independent_element_matrices(p):
    M = 5
    space = build_space(0.0, 2.0, M, p)
    me, ke = _lagrange_element_matrices(p, space.h)
    n = M * p + 1
    mass, stiff = np.zeros((n, n)), np.zeros((n, n))
    for e in range(M):
        g = e * p + np.arange(p + 1)
        mass[np.ix_(g, g)] += me
        stiff[np.ix_(g, g)] += ke
    ops = assemble(space)
    assert np.allclose(ops.mass, mass[1:-1, 1:-1], atol=1e-12)
    assert np.allclose(ops.stiffness, stiff[1:-1, 1:-1], atol=1e-9)


@pytest.mark.parametrize("p", range(1, 7))
def test_matrices_symmetric_positive_definite(p):
    ops = assemble(build_graded_space([0.0, 0.1, 0.35, 0.6, 1.0], p))
    for A in (ops.mass, ops.stiffness):
        assert np.allclose(A, A.T, atol=1e-12 * np.abs(A).max())
        np.linalg.cholesky(A)


def test_partition_of_unity_on_interior_patch():
    # the constant 1 restricted to interior DOFs: sum of all mass entries equals
    # the integral of (sum of interior basis)^2, which is 1 except on the two end elements
    space = build_space(0, 1, 10, 2)
    ones = np.ones(space.n_dofs)
    sq = l2_error(space, ones, lambda x: 0 * x) ** 2
    assert ones @ assemble(space).mass @ ones == pytest.approx(sq, rel=1e-12)


def test_l2_projection_identity_and_zero():
    space = build_space(0, 1, 6, 2)
    for k in (0, 4, space.n_dofs - 1):
        e = np.eye(space.n_dofs)[k]
        f = lambda x, e=e: evaluate_fe(space, e, x.ravel()).reshape(x.shape)
        assert np.allclose(l2_project_space(space, f), e, atol=1e-12)
    assert np.allclose(l2_project_space(space, lambda x: 0 * x), 0.0)


def test_l2_projection_orthogonality():
    space = build_space(0, 1, 7, 3)
    f = lambda x: np.exp(x) * np.sin(3 * x)
    d = l2_project_space(space, f)
    ops = assemble(space)
    assert np.allclose(space.load(f, 30) - ops.mass @ d, 0.0, atol=1e-13)


def test_l2_projection_rate():
    f = lambda x: np.sin(PI * x)
    errs = [l2_error(build_space(0, 1, M, 1), l2_project_space(build_space(0, 1, M, 1), f), f)
            for M in (64, 128)]
    assert np.log2(errs[0] / errs[1]) == pytest.approx(2.0, abs=0.1)


def test_ritz_projection_rates_p1():
    u, du = (lambda x: np.sin(PI * x)), (lambda x: PI * np.cos(PI * x))
    e0, e1 = [], []
    for M in (32, 64):
        space = build_space(0, 1, M, 1)
        d = ritz_project_space(space, u, du)
        e0.append(l2_error(space, d, u))
        e1.append(l2_error(space, d, du, derivative=True))
    assert np.log2(e1[0] / e1[1]) == pytest.approx(1.0, abs=0.1)
    assert np.log2(e0[0] / e0[1]) == pytest.approx(2.0, abs=0.1)


def test_ritz_projection_exact_for_discrete_functions():
    space = build_space(0, 1, 5, 2)
    d = ritz_project_space(space, lambda x: x * (1 - x), lambda x: 1 - 2 * x)
    assert np.allclose(d, interpolate_fe(space, lambda x: x * (1 - x)), atol=1e-12)
    with pytest.raises(ValueError):
        ritz_project_space(space, lambda x: 1 + 0 * x, lambda x: 0 * x)


def test_ritz_galerkin_orthogonality():
    space = build_space(0, 1, 6, 3)
    u, du = (lambda x: x ** 5 * (1 - x)), (lambda x: 5 * x ** 4 - 6 * x ** 5)
    d = ritz_project_space(space, u, du)
    assert np.allclose(assemble(space).stiffness @ d - space.stiffness_load(du, 12), 0.0, atol=1e-12)


def test_evaluate_fe_examples():
    space = build_space(0, 1, 4, 1)
    hat = np.eye(space.n_dofs)[1]
    assert evaluate_fe(space, hat, 0.5) == pytest.approx(1.0)
    rng = np.random.default_rng(0)
    d = rng.normal(size=space.n_dofs)
    assert evaluate_fe(space, d, 0.0) == 0.0
    assert evaluate_fe(space, d, 1.0) == pytest.approx(0.0, abs=1e-15)
    # midpoint of element 2 (between DOFs 0 and 1): average of nodal values
    assert evaluate_fe(space, d, 0.375) == pytest.approx(0.5 * (d[0] + d[1]))
    assert evaluate_fe(space, d, 0.375, derivative=True) == pytest.approx((d[1] - d[0]) / 0.25)
    with pytest.raises(OutOfDomain):
        evaluate_fe(space, d, 1.5)


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_interpolation_reproduces_discrete_polynomials(p, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=p - 1) if p >= 2 else np.zeros(0)
    # x(1-x) * random polynomial of degree p-2 vanishes on the boundary and has degree p
    f = lambda x: x * (1 - x) * P.polyval(x, c) if c.size else 0 * x
    space = build_space(0, 1, 3, p)
    d = interpolate_fe(space, f)
    x = np.linspace(0, 1, 41)
    assert np.allclose(evaluate_fe(space, d, x), f(x), atol=1e-11)


def test_scatter_gather_round_trip():
    space = build_space(0, 1, 4, 3)
    d = np.arange(space.n_dofs, dtype=float)
    local = space.gather(d)
    assert local.shape == (4, 4)
    assert local[0, 0] == 0.0 and local[-1, -1] == 0.0
    assert np.allclose(local[1:, 0], local[:-1, -1])
