"""
Algebraic identities behind the analysis
========================================

Run every built-in check. Two closed forms are reported next to the values
the library computes, so the gap between stated and actual is visible.
"""

import numpy as np

from stgalerkin.identities import left_thomee_weight_value, run_all, top_coefficient_value

for r in run_all():
    print(("PASS " if r.passed else "FAIL ") + f"{r.name}: {r.detail}")

rng = np.random.default_rng(0)
for q in (1, 2, 3):
    coeffs = rng.standard_normal(q + 1)
    tau = 0.8
    got = top_coefficient_value(q, tau, coeffs)
    print(f"q={q}: top-coefficient value {got:.6f}, q/(2(2q+1)) a_q^2 = "
          f"{q / (2 * (2 * q + 1)) * coeffs[q] ** 2:.6f}")
for q in (2, 3):
    for tau in (0.5, 1.0):
        got = left_thomee_weight_value(q, tau)
        print(f"q={q} tau={tau}: weighted value {got:.6f}, tau q/(4(2q-1)^2) = "
              f"{tau * q / (4 * (2 * q - 1) ** 2):.6f}")
