"""Algebraic identities of the temporal toolkit and discrete energy bounds.

Each check returns a ``CheckResult``; ``run_all`` drives the ``verify``
subcommand. Two quantities (the top-coefficient value and the left-Thomee
weighted value) are checked in their corrected closed forms
``q/(2(2q+1)) |alpha|^2`` and ``tau q / (4 (2q-1)^2)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .methods import MethodSpec, ProblemData, solve
from .spatial import assemble, build_space
from .temporal import TimeMesh, gauss_legendre, gauss_radau_left, legendre_values
from .timeops import (TimePolyField, WeightFunction, jump, project_l2_time, project_thomee,
                      reconstruct, slab_trace)

TOL = 1e-11


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))


def _slab_integral(fn, mesh: TimeMesh, n: int, npts: int = 24) -> float:
    rule = gauss_legendre(npts)
    t, w = rule.mapped(*mesh.slab(n))
    return float(np.sum(w * fn(t)))


def _dot(a, b):
    return np.einsum("md,md->m", a, b)


def _random_mesh(rng, N: int) -> TimeMesh:
    return TimeMesh(np.concatenate(([0.0], np.cumsum(rng.uniform(0.2, 1.0, N)))))


def _random_field(rng, mesh, q, dim=2, continuous=False) -> TimePolyField:
    return TimePolyField(mesh, rng.normal(size=(mesh.N, q + 1, dim)))


def legendre_orthogonality(max_degree: int = 8, tau: float = 0.37) -> CheckResult:
    mesh = TimeMesh([0.0, tau])
    rule = gauss_legendre(max_degree + 2)
    t, w = rule.mapped(0.0, tau)
    P = legendre_values(max_degree, mesh.to_reference(1, t))
    gram = (P * w) @ P.T
    expected = np.diag(tau / (2 * np.arange(max_degree + 1) + 1))
    err = float(np.max(np.abs(gram - expected)))
    return CheckResult("legendre_orthogonality", err <= TOL * tau, f"max deviation {err:.2e}")


def radau_exactness(max_q: int = 6) -> CheckResult:
    worst, boundary_ok = 0.0, True
    for q in range(max_q + 1):
        rule = gauss_radau_left(q)
        for k in range(2 * q + 1):
            exact = 2.0 / (k + 1) if k % 2 == 0 else 0.0
            worst = max(worst, abs(rule.weights @ rule.nodes ** k - exact))
        boundary_ok &= abs(rule.weights @ rule.nodes ** (2 * q + 1)) > 1e-8
    return CheckResult("radau_exactness", worst <= TOL and boundary_ok,
                       f"max moment error {worst:.2e}; degree 2q+1 fails: {boundary_ok}")


def weight_identities(max_q: int = 5, trials: int = 100, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for q in range(max_q + 1):
        for _ in range(trials):
            mesh = _random_mesh(rng, 2)
            v = _random_field(rng, mesh, q)
            dv = v.derivative()
            phi = WeightFunction(mesh, 2)
            lam = phi.slope
            lhs = _slab_integral(lambda t: _dot(dv.eval_slab(2, t), phi(t)[:, None] * v.eval_slab(2, t)),
                                 mesh, 2)
            norm2 = _slab_integral(lambda t: _dot(v.eval_slab(2, t), v.eval_slab(2, t)), mesh, 2)
            right, left = slab_trace(v, 2, "minus"), slab_trace(v, 1, "plus")
            rhs = 0.25 * right @ right - 0.5 * left @ left + 0.5 * lam * norm2
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
            prev, jmp = slab_trace(v, 1, "minus"), jump(v, 1)
            lhs_b = lhs + jmp @ left
            rhs_b = 0.25 * right @ right + 0.5 * jmp @ jmp - 0.5 * prev @ prev + 0.5 * lam * norm2
            worst = max(worst, abs(lhs_b - rhs_b) / max(1.0, abs(lhs_b)))
    return CheckResult("weight_identities", worst <= TOL, f"max scaled deviation {worst:.2e}")


def top_coefficient_value(q: int, tau: float, coeffs) -> float:
    """``-int phi_n u' (Id - Pi_{q-1}) u`` on a single slab (0, tau) for scalar u."""
    mesh = TimeMesh([0.0, tau])
    coeffs = np.asarray(coeffs, dtype=float)
    u = TimePolyField(mesh, coeffs[None, :, None])
    du = u.derivative()
    top = TimePolyField(mesh, (np.eye(q + 1)[q] * coeffs[q])[None, :, None])
    phi = WeightFunction(mesh, 1)
    return -_slab_integral(lambda t: phi(t) * du.eval_slab(1, t)[:, 0] * top.eval_slab(1, t)[:, 0],
                           mesh, 1)


def top_coefficient_identity(max_q: int = 6, seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for q in range(1, max_q + 1):
        tau = rng.uniform(0.1, 2.0)
        c = rng.normal(size=q + 1)
        val = top_coefficient_value(q, tau, c)
        expected = q / (2.0 * (2 * q + 1)) * c[q] ** 2
        worst = max(worst, abs(val - expected) / max(1.0, abs(expected)))
    return CheckResult("top_coefficient_identity", worst <= TOL,
                       f"value q/(2(2q+1))|alpha|^2, max deviation {worst:.2e}")


def left_thomee_weight_value(q: int, tau: float) -> float:
    """``-int w (Id - left Thomee_{q-1})(phi_n w)`` with w = L_{q-1} on the slab (0, tau)."""
    mesh = TimeMesh([0.0, tau])
    w = TimePolyField(mesh, np.eye(q)[q - 1][None, :, None])
    phi = WeightFunction(mesh, 1)
    phiw = lambda t: phi(t) * w.eval_slab(1, t)[:, 0]
    proj = project_thomee(q - 1, phiw, mesh, "left", n_points=q + 2)
    return -_slab_integral(lambda t: w.eval_slab(1, t)[:, 0] * (phiw(t) - proj.eval_slab(1, t)[:, 0]),
                           mesh, 1)


def left_thomee_weight_identity(max_q: int = 6, seed: int = 2) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for q in range(2, max_q + 1):
        tau = rng.uniform(0.1, 2.0)
        val = left_thomee_weight_value(q, tau)
        expected = tau * q / (4.0 * (2 * q - 1) ** 2)
        worst = max(worst, abs(val - expected) / max(1.0, abs(expected)))
    return CheckResult("left_thomee_weight_identity", worst <= TOL,
                       f"value tau q/(4(2q-1)^2), max deviation {worst:.2e}")


def left_thomee_of_legendre(max_q: int = 6) -> CheckResult:
    worst = 0.0
    mesh = TimeMesh([0.0, 0.3, 1.1])
    for q in range(2, max_q + 1):
        Lq = TimePolyField(mesh, np.tile(np.eye(q + 1)[q][None, :, None], (2, 1, 1)))
        out = project_thomee(q - 1, Lq, mesh, "left")
        expected = np.tile(-np.eye(q)[q - 1][None, :, None], (2, 1, 1))
        worst = max(worst, float(np.max(np.abs(out.coeffs - expected))))
    return CheckResult("left_thomee_of_legendre", worst <= TOL, f"max deviation {worst:.2e}")


def reconstruction_energy(max_q: int = 4, max_N: int = 8, trials: int = 20, seed: int = 3) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for q in range(max_q + 1):
        for _ in range(trials):
            mesh = _random_mesh(rng, int(rng.integers(1, max_N + 1)))
            v = _random_field(rng, mesh, q, dim=3)
            R = reconstruct(v, np.zeros(3))
            dR = R.derivative()
            total = 0.0
            for n in range(1, mesh.N + 1):
                total += _slab_integral(lambda t: _dot(dR.eval_slab(n, t), v.eval_slab(n, t)), mesh, n)
                end = slab_trace(v, n, "minus")
                jumps = sum(jump(v, m) @ jump(v, m) for m in range(1, n))
                start = slab_trace(v, 0, "plus")
                expected = 0.5 * (end @ end + jumps + start @ start)
                worst = max(worst, abs(total - expected) / max(1.0, abs(expected)))
    return CheckResult("reconstruction_energy", worst <= TOL, f"max scaled deviation {worst:.2e}")


def thomee_orthogonality_chain(max_q: int = 4, seed: int = 4) -> CheckResult:
    """int (d/dt R Thomee v) w = int v' w + v(0) w(0^+) for smooth v, swept over quadrature."""
    rng = np.random.default_rng(seed)
    v = lambda t: np.stack([np.sin(2 * t) + t, np.exp(-t)], axis=1)
    dv = lambda t: np.stack([2 * np.cos(2 * t) + 1, -np.exp(-t)], axis=1)
    worst = 0.0
    for q in range(max_q + 1):
        mesh = _random_mesh(rng, 4)
        w = _random_field(rng, mesh, q)
        prev = None
        for npts in (2 * q + 4, 2 * q + 8, 2 * q + 16, 2 * q + 32):
            P = project_thomee(q, v, mesh, "right", n_points=npts)
            dR = reconstruct(P, np.zeros(2)).derivative()
            lhs = sum(_slab_integral(lambda t: _dot(dR.eval_slab(n, t), w.eval_slab(n, t)), mesh, n)
                      for n in range(1, mesh.N + 1))
            if prev is not None and abs(lhs - prev) <= 1e-14 * max(1.0, abs(lhs)):
                break
            prev = lhs
        rhs = sum(_slab_integral(lambda t: _dot(dv(t), w.eval_slab(n, t)), mesh, n, 40)
                  for n in range(1, mesh.N + 1)) + v(np.array([0.0]))[0] @ slab_trace(w, 0, "plus")
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return CheckResult("thomee_orthogonality_chain", worst <= 1e-10, f"max scaled deviation {worst:.2e}")


def inverse_estimate(max_q: int = 6, trials: int = 500, seed: int = 5) -> CheckResult:
    rng = np.random.default_rng(seed)
    s = np.linspace(-1, 1, 2001)
    worst_ratio, best_ratio = 0.0, 0.0
    for q in range(max_q + 1):
        P = legendre_values(q, s)
        for _ in range(trials):
            tau = rng.uniform(0.05, 3.0)
            c = rng.normal(size=(q + 1, 2))
            sup2 = float(np.max(np.sum((P.T @ c) ** 2, axis=1)))
            l2 = float(np.sum(tau / (2 * np.arange(q + 1) + 1) * np.sum(c ** 2, axis=1)))
            worst_ratio = max(worst_ratio, sup2 / ((q + 1) ** 3 / tau * l2))
        # L_q alone attains sup 1 with L2 norm tau/(2q+1)
        best_ratio = max(best_ratio, (2 * q + 1) / (q + 1) ** 3)
    return CheckResult("inverse_estimate", worst_ratio <= 1.0 + 1e-12,
                       f"max sup^2/bound over random samples {worst_ratio:.3f}")


def walkington_trace_bound(max_q: int = 5, trials: int = 500, seed: int = 6) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for q in range(2, max_q + 1):
        for _ in range(trials):
            tau = rng.uniform(0.05, 3.0)
            mesh = TimeMesh([0.0, tau])
            w = TimePolyField(mesh, rng.normal(size=(1, q, 3)))
            phi = WeightFunction(mesh, 1, "walkington", q)
            g = lambda t: phi(t)[:, None] * w.eval_slab(1, t)
            proj = project_l2_time(q - 1, g, mesh, degree_hint=q)
            rest = TimePolyField(mesh, project_l2_time(q, g, mesh, degree_hint=q).coeffs
                                 - proj.with_degree(q).coeffs)
            lhs = np.linalg.norm(slab_trace(rest, 0, "plus"))
            l2 = np.sqrt(np.sum(tau / (2 * np.arange(q) + 1) * np.sum(w.coeffs[0] ** 2, axis=1)))
            worst = max(worst, lhs / (0.5 * np.sqrt(phi.slope) * l2))
    return CheckResult("walkington_trace_bound", worst <= 1.0, f"max lhs/bound {worst:.3f}")


# solver-level checks -------------------------------------------------------------

def _smooth_data(T: float, with_f: bool = False) -> ProblemData:
    PI = np.pi
    u0 = lambda x: np.sin(PI * x) + 0.3 * np.sin(3 * PI * x)
    du0 = lambda x: PI * np.cos(PI * x) + 0.9 * PI * np.cos(3 * PI * x)
    v0 = lambda x: x * (1 - x) * (1 + x)
    f = (lambda x, t: np.cos(3 * t) * x * (1 - x) + 0 * t) if with_f else None
    return ProblemData(T, u0, f, v0, du0)


def french_peterson_reduction(qs=(1, 2, 3)) -> CheckResult:
    worst = 0.0
    space = build_space(0.0, 1.0, 8, 2)
    for q in qs:
        mesh = TimeMesh.uniform(1.0, 6)
        sol = solve(MethodSpec("WaveFrenchPeterson", q, 2), space, mesh, _smooth_data(1.0, True))
        du = sol.u.derivative().coeffs
        vlow = sol.v.coeffs[:, :q]
        worst = max(worst, float(np.max(np.abs(du - vlow))) / max(1.0, float(np.max(np.abs(du)))))
    return CheckResult("french_peterson_reduction", worst <= 1e-9, f"max deviation {worst:.2e}")


def energy_terms(sol, data: ProblemData) -> list[tuple[float, float]]:
    """(lhs, rhs) of each scheme's zero-source weak bound at every node t_n."""
    space, mesh, spec = sol.space, sol.mesh, sol.spec
    ops = assemble(space)
    M, K = ops.mass, ops.stiffness
    nrm = lambda A, x: float(x @ A @ x)
    X, W, _, _ = space.quadrature(space.p + 12)
    u0sq = float(np.sum(W * data.u0(X) ** 2))
    gu0sq = float(np.sum(W * data.du0(X) ** 2)) if data.du0 is not None else 0.0
    v0sq = float(np.sum(W * data.v0(X) ** 2)) if data.v0 is not None else 0.0
    c2 = spec.c ** 2
    out = []
    u = sol.u
    for n in range(1, mesh.N + 1):
        if spec.scheme == "HeatJamet":
            grad = sum(np.sum(mesh.tau(m) / (2 * np.arange(u.q + 1) + 1)
                              * np.einsum("id,de,ie->i", u.coeffs[m - 1], K, u.coeffs[m - 1]))
                       for m in range(1, n + 1))
            lhs = (0.5 * nrm(M, slab_trace(u, n, "minus")) + 0.5 * spec.nu * grad
                   + 0.5 * sum(nrm(M, jump(u, m)) for m in range(1, n))
                   + 0.25 * nrm(M, slab_trace(u, 0, "plus")))
            out.append((lhs, u0sq))
        elif spec.scheme == "HeatAzizMonk":
            grad = sum(np.sum(mesh.tau(m) / (2 * np.arange(u.q) + 1)
                              * np.einsum("id,de,ie->i", u.coeffs[m - 1, :-1], K, u.coeffs[m - 1, :-1]))
                       for m in range(1, n + 1))
            out.append((0.5 * nrm(M, slab_trace(u, n, "minus")) + 0.25 * spec.nu * grad, 0.5 * u0sq))
        elif spec.scheme == "WaveVanilla":
            du = u.derivative()
            lhs = 0.5 * nrm(M, slab_trace(du, n, "minus")) + 0.5 * c2 * nrm(K, slab_trace(u, n, "minus"))
            out.append((lhs, 0.5 * v0sq + 0.5 * c2 * gu0sq))
        elif spec.scheme == "WaveFrenchPeterson":
            v = sol.v
            lhs = 0.5 * (nrm(M, slab_trace(v, n, "minus")) + c2 * nrm(K, slab_trace(u, n, "minus")))
            out.append((lhs, 0.5 * (v0sq + c2 * gu0sq)))
        elif spec.scheme == "WaveJohnson":
            v = sol.v
            lhs = (0.5 * nrm(M, slab_trace(v, n, "minus")) + 0.5 * sum(nrm(M, jump(v, m)) for m in range(1, n))
                   + 0.25 * nrm(M, slab_trace(v, 0, "plus"))
                   + 0.5 * c2 * nrm(K, slab_trace(u, n, "minus"))
                   + 0.5 * c2 * sum(nrm(K, jump(u, m)) for m in range(1, n))
                   + 0.25 * c2 * nrm(K, slab_trace(u, 0, "plus")))
            out.append((lhs, v0sq + c2 * gu0sq))
        else:
            du = u.derivative()
            lhs = (0.5 * nrm(M, slab_trace(du, n, "minus")) + 0.5 * sum(nrm(M, jump(du, m)) for m in range(1, n))
                   + 0.25 * nrm(M, slab_trace(du, 0, "plus"))
                   + 0.5 * c2 * nrm(K, slab_trace(u, n, "minus"))
                   + 0.5 * c2 * nrm(K, slab_trace(u, 0, "plus")))
            out.append((lhs, v0sq + c2 * gu0sq))
    return out


ENERGY_CASES = (
    ("HeatJamet", 1, {}), ("HeatJamet", 2, {}),
    ("HeatAzizMonk", 1, {}), ("HeatAzizMonk", 2, {}),
    ("WaveVanilla", 2, {}), ("WaveVanilla", 2, {"delta": 1.0}),
    ("WaveFrenchPeterson", 1, {}), ("WaveFrenchPeterson", 2, {}),
    ("WaveJohnson", 1, {}), ("WaveJohnson", 2, {}),
    ("WaveWalkington", 2, {}), ("WaveWalkington", 3, {}),
)


def energy_bounds(slack: float = 1e-9) -> CheckResult:
    worst = -np.inf
    space = build_space(0.0, 1.0, 4, 2)
    for scheme, q, extra in ENERGY_CASES:
        if scheme == "WaveVanilla":
            T, N = 0.05, 16
        else:
            T, N = 2.0, 8
        sol = solve(MethodSpec(scheme, q, 2, **extra), space, TimeMesh.uniform(T, N), _smooth_data(T))
        for lhs, rhs in energy_terms(sol, _smooth_data(T)):
            worst = max(worst, lhs - rhs)
    return CheckResult("energy_bounds", worst <= slack, f"max lhs - rhs {worst:.3e}")


CHECKS = (legendre_orthogonality, radau_exactness, weight_identities, top_coefficient_identity,
          left_thomee_weight_identity, left_thomee_of_legendre, reconstruction_energy,
          thomee_orthogonality_chain, inverse_estimate, walkington_trace_bound,
          french_peterson_reduction, energy_bounds)


def run_all() -> list[CheckResult]:
    return [check() for check in CHECKS]
