"""
Four wave schemes on one standing wave
======================================

Same problem, four time discretisations. The plain DG scheme needs the
step-size restriction; the others run with tau independent of h.
"""

import numpy as np

from stgalerkin.analysis import error_norms
from stgalerkin.harness.solutions import get_solution
from stgalerkin.methods import MethodSpec, solve
from stgalerkin.spatial import build_space
from stgalerkin.temporal import TimeMesh

exact = get_solution("wave_standing")
space = build_space(0.0, 1.0, 16, 6)
T = 1.0

for scheme, norm in (("WaveFrenchPeterson", "LinfL2@v"), ("WaveJohnson", "LinfL2@v"),
                     ("WaveWalkington", "LinfL2@dt")):
    for N in (8, 16):
        sol = solve(MethodSpec(scheme, q=2, p=6), space, TimeMesh.uniform(T, N), exact.problem(T))
        errs = error_norms(sol, exact, ("LinfH1semi", norm))
        print(f"{scheme:19s} N={N:3d}  grad {errs['LinfH1semi']:.2e}  {norm} {errs[norm]:.2e}")

# the plain DG scheme within its restriction, on a coarser space
space = build_space(0.0, 1.0, 8, 2)
spec = MethodSpec("WaveVanilla", q=2, p=2)
N = int(np.ceil(T * exact.c / (spec.cfl_constant * space.h_min)))
sol = solve(spec, space, TimeMesh.uniform(T, N), exact.problem(T))
print(f"WaveVanilla needs N >= {N}; cfl ratio {sol.cfl_ratio:.2f}, "
      f"grad error {error_norms(sol, exact, ('LinfH1semi',))['LinfH1semi']:.2e}")
