"""Time meshes, Legendre bases on slabs, and Gauss-type quadrature.

Reference interval is [-1, 1]; slab ``n`` (1-based) is mapped by
``t = (1 - s)/2 * t_{n-1} + (1 + s)/2 * t_n``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, InvalidCount, InvalidDegree, OutOfSlab

NEWTON_TOL = 1e-15
NEWTON_MAXIT = 100
MAX_RADAU_DEGREE = 12


class TimeMesh:
    """Partition ``0 = t_0 < ... < t_N = T``; slabs are indexed 1..N."""

    def __init__(self, nodes):
        nodes = np.array(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise InvalidCount("a time mesh needs at least two nodes")
        if nodes[0] != 0.0:
            raise ValueError("time mesh must start at t_0 = 0")
        if not np.all(np.diff(nodes) > 0):
            raise ValueError("time mesh nodes must be strictly increasing")
        nodes.setflags(write=False)
        self.nodes = nodes

    @classmethod
    def uniform(cls, T: float, N: int) -> "TimeMesh":
        if N < 1:
            raise InvalidCount("N must be >= 1")
        if not T > 0:
            raise ValueError("T must be positive")
        nodes = np.linspace(0.0, T, N + 1)
        nodes[-1] = T
        return cls(nodes)

    @property
    def N(self) -> int:
        return self.nodes.size - 1

    @property
    def T(self) -> float:
        return float(self.nodes[-1])

    @property
    def taus(self) -> np.ndarray:
        return np.diff(self.nodes)

    def tau(self, n: int) -> float:
        self._check_slab(n)
        return float(self.nodes[n] - self.nodes[n - 1])

    def slab(self, n: int) -> tuple[float, float]:
        self._check_slab(n)
        return float(self.nodes[n - 1]), float(self.nodes[n])

    def to_reference(self, n: int, t):
        a, b = self.slab(n)
        return (2.0 * np.asarray(t, dtype=float) - a - b) / (b - a)

    def to_physical(self, n: int, s):
        a, b = self.slab(n)
        s = np.asarray(s, dtype=float)
        return 0.5 * (1.0 - s) * a + 0.5 * (1.0 + s) * b

    def _check_slab(self, n: int) -> None:
        if not 1 <= n <= self.N:
            raise IndexOutOfRange(f"slab index {n} outside 1..{self.N}")

    def __eq__(self, other):
        return isinstance(other, TimeMesh) and np.array_equal(self.nodes, other.nodes)

    def __hash__(self):
        return hash(self.nodes.tobytes())

    def __repr__(self):
        return f"TimeMesh(N={self.N}, T={self.T:g})"


@dataclass(frozen=True)
class QuadratureRule:
    """Rule on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray
    exactness_degree: int

    def mapped(self, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes and weights on the physical interval (a, b)."""
        return 0.5 * (1 - self.nodes) * a + 0.5 * (1 + self.nodes) * b, 0.5 * (b - a) * self.weights

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def legendre_values(k: int, x) -> np.ndarray:
    """Rows ``P_0(x) .. P_k(x)`` by the three-term recurrence, shape (k+1, len(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((k + 1, x.size))
    out[0] = 1.0
    if k >= 1:
        out[1] = x
    for i in range(1, k):
        out[i + 1] = ((2 * i + 1) * x * out[i] - i * out[i - 1]) / (i + 1)
    return out


def legendre_derivative_values(k: int, x) -> np.ndarray:
    """Rows ``P_0'(x) .. P_k'(x)`` via ``P_{i+1}' = P_{i-1}' + (2i+1) P_i``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = legendre_values(k, x)
    out = np.zeros((k + 1, x.size))
    if k >= 1:
        out[1] = 1.0
    for i in range(1, k):
        out[i + 1] = out[i - 1] + (2 * i + 1) * p[i]
    return out


def legendre_shifted_eval(i: int, mesh: TimeMesh, n: int, t) -> np.ndarray | float:
    """Slab-``n`` Legendre polynomial of degree ``i`` at physical time(s) ``t``."""
    a, b = mesh.slab(n)
    t_arr = np.asarray(t, dtype=float)
    slack = 1e-12 * (b - a)
    if np.any(t_arr < a - slack) or np.any(t_arr > b + slack):
        raise OutOfSlab(f"t={t} outside slab {n} = [{a}, {b}]")
    s = np.clip(mesh.to_reference(n, t_arr), -1.0, 1.0)
    val = legendre_values(i, s.ravel())[i].reshape(s.shape)
    return float(val) if val.ndim == 0 else val


def _newton(f_and_df, x0: np.ndarray) -> np.ndarray:
    x = x0.copy()
    for _ in range(NEWTON_MAXIT):
        f, df = f_and_df(x)
        dx = f / df
        x -= dx
        if np.max(np.abs(dx)) < NEWTON_TOL:
            break
    return x


def gauss_legendre(m: int) -> QuadratureRule:
    """m-point Gauss-Legendre rule, exact to degree 2m-1."""
    if m < 1:
        raise InvalidCount("need at least one quadrature point")
    k = np.arange(1, m + 1)
    x0 = -np.cos(np.pi * (k - 0.25) / (m + 0.5))

    def fd(x):
        return legendre_values(m, x)[m], legendre_derivative_values(m, x)[m]

    x = _newton(fd, x0)
    dp = legendre_derivative_values(m, x)[m]
    w = 2.0 / ((1 - x ** 2) * dp ** 2)
    return QuadratureRule(x, w, 2 * m - 1)


def gauss_radau_left(q: int) -> QuadratureRule:
    """Left-sided Gauss-Radau rule with q+1 points (first node -1), exact to degree 2q."""
    if q < 0 or q > MAX_RADAU_DEGREE:
        raise InvalidDegree(f"Radau degree must lie in 0..{MAX_RADAU_DEGREE}")
    n = q + 1
    if q == 0:
        return QuadratureRule(np.array([-1.0]), np.array([2.0]), 0)
    # interior nodes are the roots of (P_q + P_{q+1}) other than -1
    j = np.arange(1, n)
    x0 = -np.cos(2 * np.pi * j / (2 * q + 1))

    def fd(x):
        p = legendre_values(n, x)
        dp = legendre_derivative_values(n, x)
        return p[q] + p[q + 1], dp[q] + dp[q + 1]

    xi = _newton(fd, x0)
    x = np.concatenate(([-1.0], np.sort(xi)))
    pq = legendre_values(q, x)[q]
    w = (1 - x) / (n ** 2 * pq ** 2)
    w[0] = 2.0 / n ** 2
    return QuadratureRule(x, w, 2 * q)


def chebyshev_points(m: int) -> np.ndarray:
    """Chebyshev-Gauss points on (-1, 1), ascending."""
    k = np.arange(m)
    return -np.cos((2 * k + 1) * np.pi / (2 * m))
