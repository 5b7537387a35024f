"""Broken time polynomials and the temporal operator toolkit.

Fields are stored slab by slab as Legendre coefficients, so truncation,
endpoint traces (1 on the right, (-1)^i on the left) and orthogonality
relations are exact in arithmetic.

Time functions passed to the projections are either a ``TimePolyField``
(evaluated slab-locally, so one-sided traces are honoured) or a callable
mapping a 1D array of times to an array of shape ``(m,)`` or ``(m, dim)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.polynomial import legendre as npleg

from .errors import (IncompatibleDimensions, IndexOutOfRange, InvalidDegree, OutOfSlab,
                     QuadratureUnderresolved, SingularReconstruction)
from .linalg import lu_solve
from .temporal import TimeMesh, gauss_legendre, gauss_radau_left, legendre_values

DEFAULT_EXTRA_POINTS = 10


class TimePolyField:
    """Per-slab Legendre expansion ``sum_i coeffs[n-1, i] * L_i^(n)(t)``.

    ``coeffs`` has shape ``(N, q+1, dim)``.
    """

    def __init__(self, mesh: TimeMesh, coeffs, continuous: bool = False):
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.ndim == 2:
            coeffs = coeffs[:, :, None]
        if coeffs.ndim != 3 or coeffs.shape[0] != mesh.N:
            raise IncompatibleDimensions(
                f"coeffs shape {coeffs.shape} does not match a mesh with {mesh.N} slabs")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        self.mesh = mesh
        self.coeffs = coeffs
        self.continuous = bool(continuous)
        if self.continuous:
            self._check_continuity()

    @classmethod
    def zeros(cls, mesh: TimeMesh, q: int, dim: int = 1, continuous: bool = False):
        return cls(mesh, np.zeros((mesh.N, q + 1, dim)), continuous)

    @property
    def q(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def dim(self) -> int:
        return self.coeffs.shape[2]

    def _check_continuity(self, rtol: float = 1e-12) -> None:
        scale = max(float(np.max(np.abs(self.coeffs), initial=0.0)), 1e-300)
        right = self.coeffs[:-1].sum(axis=1)
        left = np.einsum("i,nid->nd", _signs(self.q), self.coeffs[1:])
        gap = np.max(np.abs(right - left), initial=0.0)
        if gap > rtol * scale * (self.q + 1):
            raise ValueError(f"field flagged continuous has trace gap {gap:.3e}")

    # evaluation -----------------------------------------------------------
    def eval_slab(self, n: int, t) -> np.ndarray:
        """Values of the slab-``n`` polynomial at times ``t``, shape (m, dim)."""
        a, b = self.mesh.slab(n)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        slack = 1e-12 * (b - a)
        if np.any(t < a - slack) or np.any(t > b + slack):
            raise OutOfSlab(f"times outside slab {n} = [{a}, {b}]")
        s = np.clip(self.mesh.to_reference(n, t), -1.0, 1.0)
        return legendre_values(self.q, s).T @ self.coeffs[n - 1]

    def eval_reference(self, n: int, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return legendre_values(self.q, s).T @ self.coeffs[n - 1]

    def __call__(self, t) -> np.ndarray:
        """Evaluate at arbitrary times; a node value is taken from the left slab."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        idx = np.clip(np.searchsorted(self.mesh.nodes, t, side="left"), 1, self.mesh.N)
        out = np.empty((t.size, self.dim))
        for n in np.unique(idx):
            mask = idx == n
            out[mask] = self.eval_slab(int(n), t[mask])
        return out

    def trace(self, n: int, side: str) -> np.ndarray:
        return slab_trace(self, n, side)

    def derivative(self) -> "TimePolyField":
        """Slab-wise time derivative, a broken field of degree max(q-1, 0)."""
        q = self.q
        qd = max(q - 1, 0)
        out = np.zeros((self.mesh.N, qd + 1, self.dim))
        if q >= 1:
            d = npleg.legder(self.coeffs, axis=1)
            out[:, : d.shape[1]] = d * (2.0 / self.mesh.taus)[:, None, None]
        return TimePolyField(self.mesh, out, continuous=False)

    def with_degree(self, q: int) -> "TimePolyField":
        """Same function with coefficient array padded (or truncated) to degree q."""
        out = np.zeros((self.mesh.N, q + 1, self.dim))
        k = min(q, self.q) + 1
        out[:, :k] = self.coeffs[:, :k]
        return TimePolyField(self.mesh, out, continuous=self.continuous and q >= self.q)

    # arithmetic -----------------------------------------------------------
    def _binary(self, other, op):
        if not isinstance(other, TimePolyField) or other.mesh != self.mesh:
            raise IncompatibleDimensions("fields live on different meshes")
        q = max(self.q, other.q)
        a, b = self.with_degree(q).coeffs, other.with_degree(q).coeffs
        return TimePolyField(self.mesh, op(a, b), continuous=False)

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, alpha):
        return TimePolyField(self.mesh, alpha * self.coeffs, self.continuous)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __repr__(self):
        kind = "continuous" if self.continuous else "broken"
        return f"TimePolyField(N={self.mesh.N}, q={self.q}, dim={self.dim}, {kind})"


def _signs(q: int) -> np.ndarray:
    return (-1.0) ** np.arange(q + 1)


TimeFunction = Union[TimePolyField, Callable]


def _as_2d(values, m: int) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.ndim == 0:
        values = np.full(m, float(values))
    if values.ndim == 1:
        values = values[:, None]
    return values


def _slab_sampler(v: TimeFunction, mesh: TimeMesh):
    """Return ``f(n, s) -> (m, dim)`` sampling ``v`` on slab n at reference points s."""
    if isinstance(v, TimePolyField):
        if v.mesh != mesh:
            raise IncompatibleDimensions("field lives on a different mesh")
        return lambda n, s: v.eval_reference(n, s)

    def sample(n, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return _as_2d(v(mesh.to_physical(n, s)), s.size)

    return sample


def _legendre_moments(sample, mesh: TimeMesh, k: int, npts: int) -> np.ndarray:
    """Coefficients v_i = (2i+1)/tau int v L_i for i <= k on every slab, shape (N, k+1, dim)."""
    rule = gauss_legendre(npts)
    P = legendre_values(k, rule.nodes)
    scale = (2 * np.arange(k + 1) + 1) / 2.0
    out = [scale[:, None] * ((P * rule.weights) @ sample(n, rule.nodes))
           for n in range(1, mesh.N + 1)]
    return np.array(out)


def _quad_points(q: int, degree_hint, exactness, n_points) -> int:
    if degree_hint is not None:
        need = degree_hint + q
        if exactness is not None and exactness < need:
            raise QuadratureUnderresolved(
                f"exactness {exactness} < {need} needed for a degree-{degree_hint} input")
        return max(need // 2 + 1, 1)
    if n_points is not None:
        return int(n_points)
    if exactness is not None:
        return exactness // 2 + 1
    return 2 * q + DEFAULT_EXTRA_POINTS


def project_l2_time(q: int, v: TimeFunction, mesh: TimeMesh, *, degree_hint: int | None = None,
                    exactness: int | None = None, n_points: int | None = None) -> TimePolyField:
    """Slab-wise L2 projection onto degree-q polynomials (Legendre truncation)."""
    if q < 0:
        raise InvalidDegree("q must be >= 0")
    if isinstance(v, TimePolyField):
        return TimePolyField(mesh, v.with_degree(q).coeffs) if v.mesh == mesh else \
            project_l2_time(q, _detach(v), mesh, degree_hint=v.q)
    npts = _quad_points(q, degree_hint, exactness, n_points)
    return TimePolyField(mesh, _legendre_moments(_slab_sampler(v, mesh), mesh, q, npts))


def _detach(v: TimePolyField):
    return lambda t: v(t)


def project_thomee(q: int, v: TimeFunction, mesh: TimeMesh, side: str = "right", *,
                   n_points: int | None = None) -> TimePolyField:
    """Projection matching the slab trace at one endpoint, L2-orthogonal to degree q-1.

    ``side='right'`` interpolates at t_n^-, ``side='left'`` at t_{n-1}^+.
    For q = 0 the result is the constant endpoint value.
    """
    if q < 0:
        raise InvalidDegree("q must be >= 0")
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    sample = _slab_sampler(v, mesh)
    s_end = 1.0 if side == "right" else -1.0
    npts = n_points or 2 * q + DEFAULT_EXTRA_POINTS
    if isinstance(v, TimePolyField):
        npts = max(v.q + q, 0) // 2 + 1
    ends = np.array([sample(n, [s_end])[0] for n in range(1, mesh.N + 1)])
    dim = ends.shape[1]
    coeffs = np.zeros((mesh.N, q + 1, dim))
    if q >= 1:
        coeffs[:, :q] = _legendre_moments(sample, mesh, q - 1, npts)
    low_end = np.einsum("i,nid->nd", s_end ** np.arange(q + 1), coeffs)
    coeffs[:, q] = (ends - low_end) / s_end ** q
    return TimePolyField(mesh, coeffs)


def _node_values(v: TimeFunction, mesh: TimeMesh, v_at_nodes) -> np.ndarray:
    if v_at_nodes is not None:
        vals = np.asarray(v_at_nodes, dtype=float)
        return vals[:, None] if vals.ndim == 1 else vals
    if isinstance(v, TimePolyField):
        if not v.continuous:
            raise ValueError("node values of a broken field are ambiguous; pass v_at_nodes")
        first = v.trace(0, "plus")[None]
        return np.vstack([first, np.array([v.trace(n, "minus") for n in range(1, mesh.N + 1)])])
    return _as_2d(v(mesh.nodes), mesh.N + 1)


def project_aziz_monk(q: int, v: TimeFunction, mesh: TimeMesh, v_at_nodes=None, *,
                      n_points: int | None = None) -> TimePolyField:
    """Continuous degree-q projection: nodal interpolation plus orthogonality to degree q-2."""
    if q < 1:
        raise InvalidDegree("the nodal-matching projection needs q >= 1")
    sample = _slab_sampler(v, mesh)
    nodes = _node_values(v, mesh, v_at_nodes)
    dim = nodes.shape[1]
    coeffs = np.zeros((mesh.N, q + 1, dim))
    if q >= 2:
        npts = n_points or 2 * q + DEFAULT_EXTRA_POINTS
        if isinstance(v, TimePolyField):
            npts = (v.q + q) // 2 + 1
        coeffs[:, : q - 1] = _legendre_moments(sample, mesh, q - 2, npts)
    low = coeffs[:, : q - 1]
    mu_right = nodes[1:] - low.sum(axis=1)
    mu_left = nodes[:-1] - np.einsum("i,nid->nd", _signs(q - 2), low)
    sgn = (-1.0) ** q
    coeffs[:, q - 1] = 0.5 * (mu_right - sgn * mu_left)
    coeffs[:, q] = 0.5 * (mu_right + sgn * mu_left)
    return TimePolyField(mesh, coeffs, continuous=True)


def antiderivative(d: TimePolyField, left_values) -> TimePolyField:
    """Slab-wise primitive of ``d`` equal to ``left_values[n-1]`` at t_{n-1}^+."""
    left_values = np.asarray(left_values, dtype=float)
    if left_values.ndim == 1:
        left_values = left_values[:, None]
    prim = npleg.legint(d.coeffs, lbnd=-1, axis=1) * (0.5 * d.mesh.taus)[:, None, None]
    prim[:, 0] += left_values
    return TimePolyField(d.mesh, prim)


def project_walkington(q: int, v: TimeFunction, dv: TimeFunction, mesh: TimeMesh, *,
                       v_at_nodes=None, n_points: int | None = None) -> TimePolyField:
    """Continuous projection whose derivative is the right Thomee(q-1) projection of ``dv``.

    On each slab: ``v(t_{n-1}) + int_{t_{n-1}}^t Thomee_{q-1}(dv)``.
    """
    if q < 2:
        raise InvalidDegree("this projection needs q >= 2")
    d = project_thomee(q - 1, dv, mesh, "right", n_points=n_points)
    nodes = _node_values(v, mesh, v_at_nodes)
    prim = antiderivative(d, nodes[:-1])
    return TimePolyField(mesh, prim.coeffs, continuous=True)


def interpolate_radau(q: int, v: TimeFunction, mesh: TimeMesh) -> TimePolyField:
    """Broken Lagrange interpolant at the q+1 left Gauss-Radau nodes of each slab."""
    rule = gauss_radau_left(q)
    sample = _slab_sampler(v, mesh)
    vander = legendre_values(q, rule.nodes).T
    coeffs = np.array([lu_solve(vander, sample(n, rule.nodes)) for n in range(1, mesh.N + 1)])
    return TimePolyField(mesh, coeffs)


def _derivative_gram(k: int) -> np.ndarray:
    """``D[j, i] = int_{-1}^{1} P_i' P_j ds`` for i, j <= k."""
    i = np.arange(k + 1)
    return ((i[None, :] > i[:, None]) & ((i[None, :] + i[:, None]) % 2 == 1)) * 2.0


def reconstruct(v: TimeFunction, v_init, mesh: TimeMesh | None = None, q: int | None = None, *,
                n_points: int | None = None) -> TimePolyField:
    """Continuous degree-(q+1) lift of a broken degree-q function.

    Per slab the lift ``R`` satisfies ``R(t_{n-1}) = v(t_{n-1}^-)`` (``v_init``
    on the first slab), ``R(t_n) = v(t_n^-)`` and, for every degree-q test
    polynomial w, ``int dR w = int dv w + [v]_{n-1} w(t_{n-1}^+)`` with the
    first jump taken against ``v_init``.

    ``v`` may also be a smooth callable, in which case ``mesh`` and ``q`` are
    required and slab integrals use Gauss-Legendre quadrature.
    """
    if isinstance(v, TimePolyField):
        mesh, q = v.mesh, v.q
    elif mesh is None or q is None:
        raise ValueError("callable inputs need mesh and q")
    sample = _slab_sampler(v, mesh)
    v_init = np.atleast_1d(np.asarray(v_init, dtype=float))
    k = q + 1
    D = _derivative_gram(k)
    # rows: left value, right value, derivative moments against L_1..L_q
    A = np.vstack([_signs(k), np.ones(k + 1), D[1:q + 1]])
    npts = n_points or (q + 1 if isinstance(v, TimePolyField) else 2 * q + DEFAULT_EXTRA_POINTS)
    rule = gauss_legendre(npts)
    dP = np.array([np.polynomial.legendre.Legendre.basis(j).deriv()(rule.nodes)
                   for j in range(q + 1)])
    prev = v_init
    out = []
    for n in range(1, mesh.N + 1):
        right = sample(n, [1.0])[0]
        if prev.shape != right.shape:
            prev = np.broadcast_to(prev, right.shape)
        # int dv L_j + [v]_{n-1} L_j(t_{n-1}) = v(t_n^-) - (-1)^j v(t_{n-1}^-) - int v L_j'
        moments = (dP * rule.weights) @ sample(n, rule.nodes)
        rhs_var = right[None, :] - _signs(q)[:, None] * prev[None, :] - moments
        rhs = np.vstack([prev[None, :], right[None, :], rhs_var[1:]])
        try:
            out.append(lu_solve(A, rhs))
        except ArithmeticError as exc:
            raise SingularReconstruction(str(exc)) from exc
        prev = right
    return TimePolyField(mesh, np.array(out), continuous=True)


@dataclass(frozen=True)
class WeightFunction:
    """Affine slab weight ``1 - slope * (t - t_{n-1})``.

    ``standard`` uses slope 1/(2 tau_n); ``walkington`` uses xi_q / tau_n with
    xi_q = 1/(4(2q+1)).
    """

    mesh: TimeMesh
    n: int
    variant: str = "standard"
    q: int | None = None

    def __post_init__(self):
        if self.variant not in ("standard", "walkington"):
            raise ValueError("variant must be 'standard' or 'walkington'")
        if self.variant == "walkington" and (self.q is None or self.q < 0):
            raise InvalidDegree("the walkington weight needs its degree q")
        self.mesh.slab(self.n)

    @property
    def xi(self) -> float:
        return 1.0 / (4.0 * (2 * self.q + 1))

    @property
    def slope(self) -> float:
        tau = self.mesh.tau(self.n)
        return 1.0 / (2.0 * tau) if self.variant == "standard" else self.xi / tau

    def __call__(self, t):
        return weight_eval(self, t)


def weight_eval(w: WeightFunction, t):
    a, b = w.mesh.slab(w.n)
    t_arr = np.asarray(t, dtype=float)
    slack = 1e-12 * (b - a)
    if np.any(t_arr < a - slack) or np.any(t_arr > b + slack):
        raise OutOfSlab(f"t={t} outside slab {w.n}")
    val = 1.0 - w.slope * (t_arr - a)
    return float(val) if val.ndim == 0 else val


def slab_trace(v: TimePolyField, n: int, side: str) -> np.ndarray:
    """``v(t_n^-)`` (side 'minus') or ``v(t_n^+)`` (side 'plus') for node index n."""
    N = v.mesh.N
    if side == "minus":
        if not 1 <= n <= N:
            raise IndexOutOfRange(f"no slab to the left of node {n}")
        return v.coeffs[n - 1].sum(axis=0)
    if side == "plus":
        if not 0 <= n <= N - 1:
            raise IndexOutOfRange(f"no slab to the right of node {n}")
        return _signs(v.q) @ v.coeffs[n]
    raise ValueError("side must be 'minus' or 'plus'")


def jump(v: TimePolyField, n: int) -> np.ndarray:
    """``[v]_n = v(t_n^+) - v(t_n^-)`` at an interior node 1 <= n <= N-1."""
    if not 1 <= n <= v.mesh.N - 1:
        raise IndexOutOfRange(f"jump needs an interior node, got {n}")
    if v.continuous:
        return np.zeros(v.dim)
    return slab_trace(v, n, "plus") - slab_trace(v, n, "minus")
