"""
Energy without a source, and the step-size guard
================================================

With f = 0 the discrete energy never grows. Asking the plain DG wave scheme
for a step beyond its restriction raises, unless explicitly overridden.
"""

from stgalerkin.errors import CflViolation
from stgalerkin.harness.solutions import get_solution
from stgalerkin.identities import energy_terms
from stgalerkin.methods import MethodSpec, ProblemData, solve
from stgalerkin.spatial import build_space
from stgalerkin.temporal import TimeMesh

s = get_solution("wave_standing")
data = ProblemData(T=2.0, u0=lambda x: s.u(x, 0.0), v0=lambda x: s.u_t(x, 0.0),
                   du0=lambda x: s.u_x(x, 0.0))
space = build_space(0.0, 1.0, 8, 2)
for scheme in ("WaveFrenchPeterson", "WaveJohnson", "WaveWalkington"):
    sol = solve(MethodSpec(scheme, q=2, p=2), space, TimeMesh.uniform(2.0, 10), data)
    terms = energy_terms(sol, data)
    worst = max(lhs - rhs for lhs, rhs in terms)
    print(f"{scheme:19s} largest energy excess over bound: {worst:+.1e}")

spec = MethodSpec("WaveVanilla", q=2, p=2)
try:
    solve(spec, space, TimeMesh.uniform(2.0, 4), data)
except CflViolation as exc:
    print("guard:", exc)
sol = solve(MethodSpec("WaveVanilla", q=2, p=2, cfl_override=True), space,
            TimeMesh.uniform(2.0, 4), data)
print(f"override: ran with cfl ratio {sol.cfl_ratio:.1f}, residual {sol.max_residual:.1e}")
