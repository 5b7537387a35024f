"""Space-time Galerkin schemes for the heat and wave equations.

Every scheme marches slab by slab. On slab n the unknowns are Legendre
coefficients in time times interior FE DOFs in space (time index major), and
the slab matrix is a sum of Kronecker products ``kron(time, space)``.
Continuous-in-time trial fields carry their left trace from the previous
slab; that trace is eliminated from the unknowns.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import legendre as npleg

from .errors import CflViolation, InvalidDegree, SingularMatrix, SingularSlabSystem
from .linalg import kron, lu_factor
from .spatial import FeSpace, SpatialOperators, assemble, l2_project_space, ritz_project_space
from .temporal import TimeMesh, gauss_legendre, legendre_values
from .timeops import TimePolyField

SCHEMES = ("HeatJamet", "HeatAzizMonk", "WaveVanilla", "WaveFrenchPeterson",
           "WaveJohnson", "WaveWalkington")
HEAT_SCHEMES = SCHEMES[:2]
WAVE_SCHEMES = SCHEMES[2:]
MIN_Q = {"HeatJamet": 0, "HeatAzizMonk": 1, "WaveVanilla": 2, "WaveFrenchPeterson": 1,
         "WaveJohnson": 1, "WaveWalkington": 2}
CONTINUOUS = {"HeatJamet": False, "HeatAzizMonk": True, "WaveVanilla": False,
              "WaveFrenchPeterson": True, "WaveJohnson": False, "WaveWalkington": True}
HAS_VELOCITY = ("WaveFrenchPeterson", "WaveJohnson")
DEFAULT_TIME_POINTS_EXTRA = 10


def default_c_cfl(p: int, q: int) -> float:
    """Conservative default for the step-size restriction of the plain DG wave scheme."""
    return 0.25 / ((q + 1) ** 1.5 * (p + 1))


@dataclass(frozen=True)
class MethodSpec:
    scheme: str
    q: int
    p: int
    nu: float = 1.0
    c: float = 1.0
    delta: float = 0.0
    c_cfl: Optional[float] = None
    cfl_override: bool = False
    time_points: Optional[int] = None
    space_points: Optional[int] = None

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.q < MIN_Q[self.scheme]:
            raise InvalidDegree(f"{self.scheme} needs q >= {MIN_Q[self.scheme]}")
        if self.scheme in HEAT_SCHEMES and not self.nu > 0:
            raise ValueError("diffusivity nu must be positive")
        if self.scheme in WAVE_SCHEMES and not self.c > 0:
            raise ValueError("wave speed c must be positive")
        if self.delta < 0:
            raise ValueError("damping delta must be >= 0")
        if self.delta > 0 and self.scheme != "WaveVanilla":
            raise ValueError("damping is only available for WaveVanilla")

    @property
    def cfl_constant(self) -> float:
        return self.c_cfl if self.c_cfl is not None else default_c_cfl(self.p, self.q)


@dataclass(frozen=True)
class ProblemData:
    """Source f(x, t), initial position u0(x) with derivative du0(x), initial velocity v0(x).

    All callables must broadcast over numpy arrays. ``f=None`` means zero.
    """

    T: float
    u0: Callable
    f: Optional[Callable] = None
    v0: Optional[Callable] = None
    du0: Optional[Callable] = None


@dataclass
class Solution:
    spec: MethodSpec
    space: FeSpace
    mesh: TimeMesh
    u: TimePolyField
    v: Optional[TimePolyField] = None
    residuals: np.ndarray = field(default_factory=lambda: np.zeros(0))
    cfl_ratio: Optional[float] = None

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals, initial=0.0))


# time matrices on the reference slab -----------------------------------------

def _basis_derivs(q: int, k: int, s: np.ndarray) -> np.ndarray:
    """``P_j^{(k)}(s)`` for j <= q, shape (q+1, len(s))."""
    if k == 0:
        return legendre_values(q, s)
    out = np.zeros((q + 1, np.size(s)))
    for j in range(k, q + 1):
        out[j] = npleg.legval(s, npleg.legder(np.eye(q + 1)[j], k))
    return out


@lru_cache(maxsize=None)
def ref_time_matrix(q_trial: int, k: int, q_test: int, l: int) -> np.ndarray:
    """``R[i, j] = int_{-1}^{1} P_j^{(k)} P_i^{(l)} ds``."""
    rule = gauss_legendre((q_trial + q_test) // 2 + 2)
    trial = _basis_derivs(q_trial, k, rule.nodes)
    test = _basis_derivs(q_test, l, rule.nodes)
    out = (test * rule.weights) @ trial.T
    out.setflags(write=False)
    return out


def time_matrix(q_trial: int, k: int, q_test: int, l: int, tau: float) -> np.ndarray:
    """``int_{I_n} d^k L_j d^l L_i dt`` for a slab of width tau."""
    return 0.5 * tau * (2.0 / tau) ** (k + l) * ref_time_matrix(q_trial, k, q_test, l)


def left_values(q: int, k: int, tau: float) -> np.ndarray:
    """``d^k L_j (t_{n-1}^+)`` for j <= q."""
    return (2.0 / tau) ** k * _basis_derivs(q, k, np.array([-1.0]))[:, 0]


def right_values(q: int, k: int, tau: float) -> np.ndarray:
    return (2.0 / tau) ** k * _basis_derivs(q, k, np.array([1.0]))[:, 0]


def trace_elimination(q: int) -> np.ndarray:
    """Z with coeffs = Z @ free + e_0 * left_value, free = coeffs[1:]."""
    Z = np.zeros((q + 1, q))
    Z[0] = -((-1.0) ** np.arange(1, q + 1))
    Z[1:] = np.eye(q)
    return Z


# loads ----------------------------------------------------------------------

class _Loader:
    """Space-time loads ``int_{I_n} (f, d^l L_i phi_k) dt`` on each slab."""

    def __init__(self, f, space: FeSpace, mesh: TimeMesh, q_test: int, l: int,
                 time_points: int, space_points: int):
        self.f, self.space, self.mesh = f, space, mesh
        self.q_test, self.l = q_test, l
        self.rule = gauss_legendre(time_points)
        self.x, self.w, self.B, _ = space.quadrature(space_points)
        self.test = _basis_derivs(q_test, l, self.rule.nodes)

    def __call__(self, n: int) -> np.ndarray:
        nd = self.space.n_dofs
        if self.f is None:
            return np.zeros((self.q_test + 1) * nd)
        tau = self.mesh.tau(n)
        t = self.mesh.to_physical(n, self.rule.nodes)
        vals = np.asarray(self.f(self.x[..., None], t[None, None, :]), dtype=float)
        vals = np.broadcast_to(vals, self.x.shape + t.shape)
        tw = (2.0 / tau) ** self.l * 0.5 * tau * self.rule.weights
        time_part = np.einsum("exm,m,im->exi", vals, tw, self.test)
        local = np.einsum("kx,ex,exi->eki", self.B, self.w, time_part)
        return self.space.scatter(local).T.ravel()


# scheme drivers ---------------------------------------------------------------

class _Scheme:
    """Slab-by-slab driver. ``initial_state`` plus ``solve_slab`` make restarts reproducible."""

    continuous = False

    def __init__(self, spec: MethodSpec, space: FeSpace, mesh: TimeMesh, data: ProblemData,
                 ops: SpatialOperators | None = None):
        self.spec, self.space, self.mesh, self.data = spec, space, mesh, data
        self.ops = ops or assemble(space)
        self.q = spec.q
        self.nd = space.n_dofs
        self.tp = spec.time_points or 2 * spec.q + DEFAULT_TIME_POINTS_EXTRA
        self.sp = spec.space_points or spec.p + 8
        self._lu_cache: dict = {}

    def _loader(self, q_test: int, l: int) -> _Loader:
        return _Loader(self.data.f, self.space, self.mesh, q_test, l, self.tp, self.sp)

    def _load(self, g):
        return self.space.load(g, self.sp) if g is not None else np.zeros(self.nd)

    def _stiff_load(self, dg):
        return self.space.stiffness_load(dg, self.sp) if dg is not None else np.zeros(self.nd)

    def _l2(self, g):
        return l2_project_space(self.space, g, self.ops, self.sp) if g is not None else np.zeros(self.nd)

    def _ritz(self, g, dg):
        if g is None:
            return np.zeros(self.nd)
        if dg is None:
            raise ValueError("the elliptic projection of u0 needs du0")
        return ritz_project_space(self.space, g, dg, self.ops, self.sp)

    def _factor(self, tau: float):
        # step sizes equal up to rounding share one factorization, built from
        # the rounded value so that it does not depend on the slab order
        key = float(f"{tau:.12e}")
        if key not in self._lu_cache:
            A = self.matrix(key)
            try:
                self._lu_cache[key] = (A, lu_factor(A))
            except SingularMatrix as exc:
                raise SingularSlabSystem(f"{self.spec.scheme} slab matrix (tau={tau:g}): {exc}") from exc
        return self._lu_cache[key]

    def _split(self, x: np.ndarray, nfields: int) -> list[np.ndarray]:
        return [blk.reshape(-1, self.nd) for blk in np.split(x, nfields)]

    def _full(self, free: np.ndarray, left: np.ndarray) -> np.ndarray:
        """Coefficients of a continuous field from its free part and left trace."""
        return trace_elimination(self.q) @ free + np.outer(np.eye(self.q + 1)[0], left)

    def solve_slab(self, n: int, state):
        tau = self.mesh.tau(n)
        A, lu = self._factor(tau)
        b = self.rhs(n, tau, state)
        x = lu.solve(b)
        res = float(np.max(np.abs(A @ x - b)) / max(np.max(np.abs(b)), 1e-300))
        coeffs, new_state = self.unpack(n, tau, x, state)
        return coeffs, new_state, res

    def run(self) -> Solution:
        state = self.initial_state()
        us, vs, res = [], [], []
        for n in range(1, self.mesh.N + 1):
            coeffs, state, r = self.solve_slab(n, state)
            us.append(coeffs[0])
            if len(coeffs) > 1:
                vs.append(coeffs[1])
            res.append(r)
        u = TimePolyField(self.mesh, np.array(us).transpose(0, 1, 2), continuous=self.continuous)
        v = TimePolyField(self.mesh, np.array(vs), continuous=self.continuous) if vs else None
        return Solution(self.spec, self.space, self.mesh, u, v, np.array(res), self.cfl_ratio())

    def cfl_ratio(self):
        return None


class HeatJamet(_Scheme):
    """DG in time: upwind jump coupling, weak initial datum."""

    def matrix(self, tau):
        q, M, K = self.q, self.ops.mass, self.ops.stiffness
        e = left_values(q, 0, tau)
        C = time_matrix(q, 1, q, 0, tau) + np.outer(e, e)
        G = time_matrix(q, 0, q, 0, tau)
        return kron(C, M) + self.spec.nu * kron(G, K)

    def initial_state(self):
        self.load = self._loader(self.q, 0)
        return self._load(self.data.u0)

    def rhs(self, n, tau, prev_mass_trace):
        return self.load(n) + np.kron(left_values(self.q, 0, tau), prev_mass_trace)

    def unpack(self, n, tau, x, state):
        u = x.reshape(self.q + 1, self.nd)
        return [u], self.ops.mass @ u.sum(axis=0)


class HeatAzizMonk(_Scheme):
    """Continuous trial, degree q-1 tests, u(0) = L2 projection of u0."""

    continuous = True

    def _blocks(self, tau):
        q = self.q
        D = time_matrix(q, 1, q - 1, 0, tau)
        G = time_matrix(q, 0, q - 1, 0, tau)
        return D, G

    def matrix(self, tau):
        D, G = self._blocks(tau)
        Z = trace_elimination(self.q)
        return kron(D @ Z, self.ops.mass) + self.spec.nu * kron(G @ Z, self.ops.stiffness)

    def initial_state(self):
        self.load = self._loader(self.q - 1, 0)
        return self._l2(self.data.u0)

    def rhs(self, n, tau, left):
        D, G = self._blocks(tau)
        return (self.load(n) - np.kron(D[:, 0], self.ops.mass @ left)
                - self.spec.nu * np.kron(G[:, 0], self.ops.stiffness @ left))

    def unpack(self, n, tau, x, left):
        u = self._full(x.reshape(self.q, self.nd), left)
        return [u], u.sum(axis=0)


class WaveVanilla(_Scheme):
    """Single-field DG for the second-order wave equation, optional damping."""

    def matrix(self, tau):
        q, M, K, c2 = self.q, self.ops.mass, self.ops.stiffness, self.spec.c ** 2
        d = left_values(q, 1, tau)
        e = left_values(q, 0, tau)
        Tm = time_matrix(q, 2, q, 1, tau) + np.outer(d, d)
        if self.spec.delta:
            Tm = Tm + self.spec.delta * time_matrix(q, 1, q, 1, tau)
        Tk = c2 * (time_matrix(q, 0, q, 1, tau) + np.outer(e, e))
        return kron(Tm, M) + kron(Tk, K)

    def cfl_ratio(self):
        return float(self.mesh.taus.max() * self.spec.c / (self.spec.cfl_constant * self.space.h_min))

    def initial_state(self):
        ratio = self.cfl_ratio()
        if ratio > 1.0 and not self.spec.cfl_override:
            raise CflViolation(
                f"tau_max={self.mesh.taus.max():.4g} exceeds C_CFL*h_min/c="
                f"{self.spec.cfl_constant * self.space.h_min / self.spec.c:.4g} (ratio {ratio:.3g})")
        self.load = self._loader(self.q, 1)
        return self._load(self.data.v0), self._stiff_load(self.data.du0)

    def rhs(self, n, tau, state):
        mdu, ku = state
        return (self.load(n) + np.kron(left_values(self.q, 1, tau), mdu)
                + self.spec.c ** 2 * np.kron(left_values(self.q, 0, tau), ku))

    def unpack(self, n, tau, x, state):
        u = x.reshape(self.q + 1, self.nd)
        du_end = right_values(self.q, 1, tau) @ u
        return [u], (self.ops.mass @ du_end, self.ops.stiffness @ u.sum(axis=0))


class WaveFrenchPeterson(_Scheme):
    """Two continuous fields (u, v), degree q-1 tests, monolithic slab solve."""

    continuous = True

    def _blocks(self, tau):
        q = self.q
        return time_matrix(q, 1, q - 1, 0, tau), time_matrix(q, 0, q - 1, 0, tau)

    def matrix(self, tau):
        D, G = self._blocks(tau)
        Z = trace_elimination(self.q)
        M, K, c2 = self.ops.mass, self.ops.stiffness, self.spec.c ** 2
        return np.block([[-c2 * kron(D @ Z, K), c2 * kron(G @ Z, K)],
                         [c2 * kron(G @ Z, K), kron(D @ Z, M)]])

    def initial_state(self):
        self.load = self._loader(self.q - 1, 0)
        return self._ritz(self.data.u0, self.data.du0), self._l2(self.data.v0)

    def rhs(self, n, tau, state):
        ua, va = state
        D, G = self._blocks(tau)
        M, K, c2 = self.ops.mass, self.ops.stiffness, self.spec.c ** 2
        r1 = -c2 * (np.kron(G[:, 0], K @ va) - np.kron(D[:, 0], K @ ua))
        r2 = self.load(n) - np.kron(D[:, 0], M @ va) - c2 * np.kron(G[:, 0], K @ ua)
        return np.concatenate([r1, r2])

    def unpack(self, n, tau, x, state):
        uf, vf = self._split(x, 2)
        u, v = self._full(uf, state[0]), self._full(vf, state[1])
        return [u, v], (u.sum(axis=0), v.sum(axis=0))


class WaveJohnson(_Scheme):
    """Two broken fields (u, v) with jump terms in both equations."""

    def matrix(self, tau):
        q, M, K, c2 = self.q, self.ops.mass, self.ops.stiffness, self.spec.c ** 2
        e = left_values(q, 0, tau)
        DE = time_matrix(q, 1, q, 0, tau) + np.outer(e, e)
        G = time_matrix(q, 0, q, 0, tau)
        return np.block([[-c2 * kron(DE, K), c2 * kron(G, K)],
                         [c2 * kron(G, K), kron(DE, M)]])

    def initial_state(self):
        self.load = self._loader(self.q, 0)
        return self._stiff_load(self.data.du0), self._load(self.data.v0)

    def rhs(self, n, tau, state):
        ku, mv = state
        e = left_values(self.q, 0, tau)
        return np.concatenate([-self.spec.c ** 2 * np.kron(e, ku), self.load(n) + np.kron(e, mv)])

    def unpack(self, n, tau, x, state):
        u, v = self._split(x, 2)
        return [u, v], (self.ops.stiffness @ u.sum(axis=0), self.ops.mass @ v.sum(axis=0))


class WaveWalkington(_Scheme):
    """Continuous trial of degree q, broken degree q-1 tests, derivative jumps."""

    continuous = True

    def _blocks(self, tau):
        q = self.q
        Tm = time_matrix(q, 2, q - 1, 0, tau) + np.outer(left_values(q - 1, 0, tau),
                                                        left_values(q, 1, tau))
        return Tm, self.spec.c ** 2 * time_matrix(q, 0, q - 1, 0, tau)

    def matrix(self, tau):
        Tm, Tk = self._blocks(tau)
        Z = trace_elimination(self.q)
        return kron(Tm @ Z, self.ops.mass) + kron(Tk @ Z, self.ops.stiffness)

    def initial_state(self):
        self.load = self._loader(self.q - 1, 0)
        return self._ritz(self.data.u0, self.data.du0), self._load(self.data.v0)

    def rhs(self, n, tau, state):
        ua, mdu = state
        Tm, Tk = self._blocks(tau)
        return (self.load(n) + np.kron(left_values(self.q - 1, 0, tau), mdu)
                - np.kron(Tm[:, 0], self.ops.mass @ ua) - np.kron(Tk[:, 0], self.ops.stiffness @ ua))

    def unpack(self, n, tau, x, state):
        u = self._full(x.reshape(self.q, self.nd), state[0])
        du_end = right_values(self.q, 1, tau) @ u
        return [u], (u.sum(axis=0), self.ops.mass @ du_end)


SCHEME_CLASSES = {cls.__name__: cls for cls in
                  (HeatJamet, HeatAzizMonk, WaveVanilla, WaveFrenchPeterson, WaveJohnson, WaveWalkington)}


def make_scheme(spec, space, mesh, data, ops=None) -> _Scheme:
    return SCHEME_CLASSES[spec.scheme](spec, space, mesh, data, ops)


def _checked(name):
    def solver(spec: MethodSpec, space: FeSpace, mesh: TimeMesh, data: ProblemData,
               ops: SpatialOperators | None = None) -> Solution:
        if spec.scheme != name:
            raise ValueError(f"spec selects {spec.scheme}, not {name}")
        return make_scheme(spec, space, mesh, data, ops).run()
    solver.__name__ = "solve_" + name
    solver.__doc__ = f"Run the {name} scheme over every slab of ``mesh``."
    return solver


solve_heat_jamet = _checked("HeatJamet")
solve_heat_aziz_monk = _checked("HeatAzizMonk")
solve_wave_vanilla = _checked("WaveVanilla")
solve_wave_french_peterson = _checked("WaveFrenchPeterson")
solve_wave_johnson = _checked("WaveJohnson")
solve_wave_walkington = _checked("WaveWalkington")


def solve(spec: MethodSpec, space: FeSpace, mesh: TimeMesh, data: ProblemData,
          ops: SpatialOperators | None = None) -> Solution:
    """Dispatch on ``spec.scheme``."""
    return make_scheme(spec, space, mesh, data, ops).run()
