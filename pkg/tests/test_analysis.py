import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stgalerkin.analysis import (NormKind, VerificationConstants, compute_eoc, error_norms,
                                 eval_norm, radau_lebesgue_constant, sample_points, split_norm_name)
from stgalerkin.errors import IncompatibleDimensions, NonPositiveError, TooFewLevels
from stgalerkin.harness.solutions import get_solution
from stgalerkin.methods import MethodSpec, Solution, solve
from stgalerkin.spatial import assemble, build_space, interpolate_fe, ritz_project_space
from stgalerkin.temporal import TimeMesh
from stgalerkin.timeops import TimePolyField, project_l2_time

KINDS = list(NormKind)


def random_field(seed, space, mesh, q, continuous=False):
    rng = np.random.default_rng(seed)
    return TimePolyField(mesh, rng.normal(size=(mesh.N, q + 1, space.n_dofs)))


SPACE = build_space(0, 1, 5, 2)
MESH = TimeMesh([0.0, 0.3, 0.7, 1.0])


def test_zero_field_has_zero_norm():
    z = TimePolyField.zeros(MESH, 2, SPACE.n_dofs)
    for kind in KINDS:
        assert eval_norm(kind, z, SPACE) == 0.0


def test_dimension_check():
    with pytest.raises(IncompatibleDimensions):
        eval_norm("LinfL2", TimePolyField.zeros(MESH, 1, 3), SPACE)


@given(st.integers(0, 2**32 - 1), st.floats(-5, 5), st.integers(0, 4))
@settings(max_examples=30, deadline=None)
def test_homogeneity(seed, alpha, q):
    f = random_field(seed, SPACE, MESH, q)
    for kind in KINDS:
        assert eval_norm(kind, alpha * f, SPACE) == pytest.approx(abs(alpha) * eval_norm(kind, f, SPACE),
                                                                   rel=1e-12, abs=1e-14)


@given(st.integers(0, 2**32 - 1), st.integers(0, 4))
@settings(max_examples=30, deadline=None)
def test_triangle_inequality(seed, q):
    f, g = random_field(seed, SPACE, MESH, q), random_field(seed + 1, SPACE, MESH, q)
    for kind in KINDS:
        assert eval_norm(kind, f + g, SPACE) <= eval_norm(kind, f, SPACE) + eval_norm(kind, g, SPACE) + 1e-12


def test_jump_seminorm_of_continuous_field_is_trace_terms():
    rng = np.random.default_rng(3)
    mesh = TimeMesh.uniform(1.0, 4)
    # continuous: one global polynomial in t written per slab
    glob = rng.normal(size=(3, SPACE.n_dofs))
    vals = lambda t: np.polynomial.polynomial.polyval(t, glob).T
    f = project_l2_time(2, vals, mesh, degree_hint=2)
    f = TimePolyField(mesh, f.coeffs, continuous=True)
    M = assemble(SPACE).mass
    end, start = vals(np.array([1.0]))[0], vals(np.array([0.0]))[0]
    assert eval_norm("JumpSeminorm", f, SPACE) == pytest.approx(math.sqrt(end @ M @ end + start @ M @ start))


def test_l2qt_of_constant_against_quadrature():
    space = build_space(0, 1, 8, 1)
    T, c = 2.0, 1.7
    mesh = TimeMesh.uniform(T, 3)
    f = TimePolyField(mesh, np.tile(np.r_[c * np.ones(space.n_dofs)][None, None, :], (3, 1, 1)))
    x, w, _, _ = space.quadrature(6)
    from stgalerkin.spatial import evaluate_fe
    ref = c * math.sqrt(T) * math.sqrt(np.sum(w * evaluate_fe(space, np.ones(space.n_dofs), x.ravel()).reshape(x.shape) ** 2))
    assert eval_norm("L2QT", f, space) == pytest.approx(ref, rel=1e-12)


def test_linf_sampling_never_exceeds_dense_sup_and_is_adequate():
    rng = np.random.default_rng(4)
    s_dense = np.linspace(-1, 1, 20001)
    M = assemble(SPACE).mass
    for q in range(6):
        for _ in range(20):
            f = TimePolyField(TimeMesh([0.0, 1.0]), rng.normal(size=(1, q + 1, SPACE.n_dofs)))
            v1, v2 = eval_norm("LinfL2", f, SPACE), eval_norm("LinfL2", f, SPACE, density=2)
            vals = f.eval_reference(1, s_dense)
            dense = math.sqrt(np.einsum("md,de,me->m", vals, M, vals).max())
            assert v1 <= dense * (1 + 1e-12)
            assert abs(v2 - v1) <= 1e-3 * v2


def test_sample_points():
    s = sample_points(2)
    assert s[0] == -1.0 and s[-1] == 1.0 and s.size == 10 * (2 * 2 + 5) + 2
    assert sample_points(2, 2).size == 20 * (2 * 2 + 5) + 2


def test_split_norm_name():
    assert split_norm_name("LinfL2@dt") == (NormKind.LinfL2, "dt")
    assert split_norm_name("L2QT") == (NormKind.L2QT, "u")
    with pytest.raises(ValueError):
        split_norm_name("LinfL2@w")
    with pytest.raises(ValueError):
        split_norm_name("Bogus")


def test_exact_discrete_solution_has_tiny_errors_and_perturbation_grows():
    exact = get_solution("heat_poly_exact", q=2)
    space, mesh = build_space(0, 1, 8, 2), TimeMesh.uniform(1.0, 4)
    sol = solve(MethodSpec("HeatJamet", 2, 2), space, mesh, exact.problem(1.0))
    names = ["LinfL2", "L2QT", "LinfH1semi", "L2H1semi", "TraceL2AtT", "LinfL2@dt"]
    errs = error_norms(sol, exact, names)
    assert set(errs) == set(names)
    assert max(errs.values()) <= 1e-8
    shifted = Solution(sol.spec, space, mesh, 0.5 * sol.u)
    far = Solution(sol.spec, space, mesh, 0.0 * sol.u)
    e1, e2 = error_norms(shifted, exact, ["LinfL2"]), error_norms(far, exact, ["LinfL2"])
    assert e2["LinfL2"] > e1["LinfL2"] > 1e-3


def test_velocity_norm_needs_velocity_field():
    exact = get_solution("heat_poly_exact", q=1)
    sol = solve(MethodSpec("HeatJamet", 1, 2), build_space(0, 1, 4, 2), TimeMesh.uniform(1.0, 2),
                exact.problem(1.0))
    with pytest.raises(ValueError):
        error_norms(sol, exact, ["LinfL2@v"])


def test_projection_error_orders():
    # u = sin(pi x) e^{-t}: Ritz in space, L2 in time; the tau-error of the projection
    # decays like tau^{q+1}
    exact = get_solution("heat_sine")
    space = build_space(0, 1, 32, 4)
    ops = assemble(space)
    g = ritz_project_space(space, lambda x: np.sin(np.pi * x), lambda x: np.pi * np.cos(np.pi * x), ops)
    for q in (0, 1, 2):
        errs, taus = [], []
        for N in (4, 8, 16):
            mesh = TimeMesh.uniform(1.0, N)
            tproj = project_l2_time(q, lambda t: np.exp(-t)[:, None], mesh)
            field = TimePolyField(mesh, tproj.coeffs * g[None, None, :])
            sol = Solution(MethodSpec("HeatJamet", q, 4), space, mesh, field)
            errs.append(error_norms(sol, exact, ["L2QT"])["L2QT"])
            taus.append(1.0 / N)
        assert compute_eoc(taus, errs).last == pytest.approx(q + 1, abs=0.15)


def test_compute_eoc_examples_and_errors():
    assert compute_eoc([1, 0.5, 0.25], [1, 0.5, 0.25]).orders == pytest.approx((1.0, 1.0))
    assert compute_eoc([1, 0.5], [1, 0.25]).orders == pytest.approx((2.0,))
    t = compute_eoc([0.1, 0.05, 0.025], [1e-2, 1.25e-3, 1.5625e-4])
    assert t.orders == pytest.approx((3.0, 3.0)) and t.last == pytest.approx(3.0)
    with pytest.raises(TooFewLevels):
        compute_eoc([1.0], [1.0])
    with pytest.raises(NonPositiveError):
        compute_eoc([1.0, 0.5], [1.0, 0.0])
    with pytest.raises(ValueError):
        compute_eoc([0.5, 1.0], [1.0, 0.5])


def test_radau_lebesgue_constants():
    measured = [radau_lebesgue_constant(q) for q in range(9)]
    assert measured[0] == pytest.approx(1.0)
    assert measured[1] == pytest.approx(2.0, abs=1e-3)
    assert all(b > a for a, b in zip(measured, measured[1:]))
    assert all(m <= 2 * math.sqrt(q + 1) for q, m in enumerate(measured))
    assert VerificationConstants.c_si(3) == measured[3]


def test_verification_constants():
    vc = VerificationConstants()
    assert vc.c_inv(2) == 27.0 and vc.c_pi(2) == 9.0
    assert VerificationConstants(0.5).c_cfl(2, 2) == 0.5
    assert vc.c_cfl(1, 2) == pytest.approx(0.25 / (3 ** 1.5 * 2))
