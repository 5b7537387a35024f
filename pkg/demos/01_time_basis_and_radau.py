"""
Legendre slab basis and the left Radau rule
===========================================

Each slab carries shifted Legendre polynomials normalised to 1 at the right
end. The left Radau rule with q+1 points is exact up to degree 2q.
"""

import numpy as np

from stgalerkin.temporal import TimeMesh, gauss_radau_left, legendre_shifted_eval

mesh = TimeMesh.uniform(1.0, 4)
n = 2
a, b = mesh.slab(n)
print(f"slab {n}: [{a}, {b}]")
for i in range(4):
    left, right = legendre_shifted_eval(i, mesh, n, np.array([a, b]))
    print(f"  L_{i}: left {left:+.1f}  right {right:+.1f}")

# exactness boundary of the Radau rule on [-1, 1]
for q in range(4):
    rule = gauss_radau_left(q)
    errs = []
    for deg in (2 * q, 2 * q + 1):
        exact = (1 - (-1) ** (deg + 1)) / (deg + 1)
        errs.append(abs(rule.integrate(lambda x: x ** deg) - exact))
    print(f"q={q}: error at degree 2q {errs[0]:.1e}, at 2q+1 {errs[1]:.1e}")
