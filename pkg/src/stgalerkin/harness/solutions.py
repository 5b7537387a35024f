"""Registry of manufactured solutions on the unit interval.

Each entry supplies hand-derived partial derivatives; the forcing is the
corresponding combination (heat: u_t - nu u_xx, wave: u_tt + delta u_t -
c^2 u_xx). Every derivative is checked against a central difference of the
next-lower one when the solution is built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import UnknownSolutionId
from ..methods import ProblemData

FD_STEP = 1e-5
FD_TOL = 1e-6
PI = np.pi


@dataclass(frozen=True)
class ManufacturedSolution:
    id: str
    equation: str  # "heat" or "wave"
    description: str
    u: Callable
    u_t: Callable
    u_tt: Callable
    u_x: Callable
    u_xx: Callable
    u_xt: Callable
    params: dict = field(default_factory=dict)

    @property
    def nu(self) -> float:
        return self.params.get("nu", 1.0)

    @property
    def c(self) -> float:
        return self.params.get("c", 1.0)

    @property
    def delta(self) -> float:
        return self.params.get("delta", 0.0)

    def f(self, x, t):
        if self.equation == "heat":
            return self.u_t(x, t) - self.nu * self.u_xx(x, t)
        return self.u_tt(x, t) + self.delta * self.u_t(x, t) - self.c ** 2 * self.u_xx(x, t)

    def problem(self, T: float) -> ProblemData:
        zero = 0.0
        return ProblemData(
            T=T,
            u0=lambda x: self.u(x, zero),
            f=self.f,
            v0=lambda x: self.u_t(x, zero),
            du0=lambda x: self.u_x(x, zero),
        )

    def self_check(self, rng=None, points: int = 20) -> float:
        """Largest scaled mismatch between each derivative and a central difference."""
        rng = rng or np.random.default_rng(1234)
        x = rng.uniform(0.0, 1.0, points)
        t = rng.uniform(0.1, 1.0, points)
        h = FD_STEP
        pairs = [
            (self.u_t, lambda x, t: (self.u(x, t + h) - self.u(x, t - h)) / (2 * h)),
            (self.u_tt, lambda x, t: (self.u_t(x, t + h) - self.u_t(x, t - h)) / (2 * h)),
            (self.u_x, lambda x, t: (self.u(x + h, t) - self.u(x - h, t)) / (2 * h)),
            (self.u_xx, lambda x, t: (self.u_x(x + h, t) - self.u_x(x - h, t)) / (2 * h)),
            (self.u_xt, lambda x, t: (self.u_x(x, t + h) - self.u_x(x, t - h)) / (2 * h)),
        ]
        worst = 0.0
        for exact, fd in pairs:
            a = np.broadcast_to(exact(x, t), x.shape)
            b = np.broadcast_to(fd(x, t), x.shape)
            worst = max(worst, float(np.max(np.abs(a - b) / (1.0 + np.abs(a)))))
        return worst


def _zeros(x, t):
    return np.zeros(np.broadcast(x, t).shape)


def _heat_sine(**_):
    s, c = lambda x: np.sin(PI * x), lambda x: np.cos(PI * x)
    e = lambda t: np.exp(-t)
    return dict(
        equation="heat", description="sin(pi x) exp(-t)",
        u=lambda x, t: s(x) * e(t),
        u_t=lambda x, t: -s(x) * e(t),
        u_tt=lambda x, t: s(x) * e(t),
        u_x=lambda x, t: PI * c(x) * e(t),
        u_xx=lambda x, t: -PI ** 2 * s(x) * e(t),
        u_xt=lambda x, t: -PI * c(x) * e(t),
    )


def _poly_time(q: int, shift: float):
    """Callables for x(1-x) (t^q + shift)."""
    g, gx = (lambda x: x * (1 - x)), (lambda x: 1 - 2 * x)
    T0 = lambda t: t ** q + shift
    T1 = lambda t: q * t ** (q - 1) if q >= 1 else 0.0 * t
    T2 = lambda t: q * (q - 1) * t ** (q - 2) if q >= 2 else 0.0 * t
    return dict(
        u=lambda x, t: g(x) * T0(t),
        u_t=lambda x, t: g(x) * T1(t),
        u_tt=lambda x, t: g(x) * T2(t),
        u_x=lambda x, t: gx(x) * T0(t),
        u_xx=lambda x, t: -2.0 * T0(t) + 0.0 * x,
        u_xt=lambda x, t: gx(x) * T1(t),
    )


def _heat_poly_exact(q: int = 1, **_):
    return dict(equation="heat", description=f"x(1-x) t^{q}", **_poly_time(q, 0.0))


def _wave_poly_exact(q: int = 2, **_):
    return dict(equation="wave", description=f"x(1-x) (t^{q} + 1)", **_poly_time(q, 1.0))


def _wave_standing(c: float = 1.0, **_):
    w = PI * c
    s, cx = lambda x: np.sin(PI * x), lambda x: np.cos(PI * x)
    return dict(
        equation="wave", description="sin(pi x) cos(pi c t)",
        u=lambda x, t: s(x) * np.cos(w * t),
        u_t=lambda x, t: -w * s(x) * np.sin(w * t),
        u_tt=lambda x, t: -w ** 2 * s(x) * np.cos(w * t),
        u_x=lambda x, t: PI * cx(x) * np.cos(w * t),
        u_xx=lambda x, t: -PI ** 2 * s(x) * np.cos(w * t),
        u_xt=lambda x, t: -PI * w * cx(x) * np.sin(w * t),
    )


def _wave_damped_standing(c: float = 1.0, delta: float = 1.0, **_):
    a = 0.5 * delta
    if PI * c <= a:
        raise ValueError("wave_damped_standing needs pi*c > delta/2 (underdamped mode)")
    w = np.sqrt((PI * c) ** 2 - a ** 2)
    s, cx = lambda x: np.sin(PI * x), lambda x: np.cos(PI * x)
    T0 = lambda t: np.exp(-a * t) * np.cos(w * t)
    T1 = lambda t: np.exp(-a * t) * (-a * np.cos(w * t) - w * np.sin(w * t))
    T2 = lambda t: np.exp(-a * t) * ((a * a - w * w) * np.cos(w * t) + 2 * a * w * np.sin(w * t))
    return dict(
        equation="wave", description="exp(-delta t/2) sin(pi x) cos(omega t), homogeneous damped mode",
        u=lambda x, t: s(x) * T0(t),
        u_t=lambda x, t: s(x) * T1(t),
        u_tt=lambda x, t: s(x) * T2(t),
        u_x=lambda x, t: PI * cx(x) * T0(t),
        u_xx=lambda x, t: -PI ** 2 * s(x) * T0(t),
        u_xt=lambda x, t: PI * cx(x) * T1(t),
    )


def _wave_poly_space(**_):
    g, gx = (lambda x: x * (1 - x)), (lambda x: 1 - 2 * x)
    return dict(
        equation="wave", description="x(1-x) cos(pi t); exact in space for p >= 2",
        u=lambda x, t: g(x) * np.cos(PI * t),
        u_t=lambda x, t: -PI * g(x) * np.sin(PI * t),
        u_tt=lambda x, t: -PI ** 2 * g(x) * np.cos(PI * t),
        u_x=lambda x, t: gx(x) * np.cos(PI * t),
        u_xx=lambda x, t: -2.0 * np.cos(PI * t) + 0.0 * x,
        u_xt=lambda x, t: -PI * gx(x) * np.sin(PI * t),
    )


def _zero(equation: str = "heat", **_):
    return dict(equation=equation, description="identically zero",
                u=_zeros, u_t=_zeros, u_tt=_zeros, u_x=_zeros, u_xx=_zeros, u_xt=_zeros)


_REGISTRY = {
    "heat_sine": _heat_sine,
    "heat_poly_exact": _heat_poly_exact,
    "wave_standing": _wave_standing,
    "wave_poly_exact": _wave_poly_exact,
    "wave_damped_standing": _wave_damped_standing,
    "wave_poly_space": _wave_poly_space,
    "zero": _zero,
}


def list_solutions() -> list[tuple[str, str]]:
    """(id, description) for every registered solution."""
    return [(k, _REGISTRY[k]()["description"]) for k in _REGISTRY]


def get_solution(sid: str, *, q: int = 1, nu: float = 1.0, c: float = 1.0, delta: float = 0.0,
                 equation: str | None = None, check: bool = True) -> ManufacturedSolution:
    """Instantiate a registered solution for the given physical parameters.

    ``q`` selects the time degree of the polynomial entries. The forcing uses
    ``nu`` (heat) or ``c`` and ``delta`` (wave).
    """
    if sid not in _REGISTRY:
        raise UnknownSolutionId(f"unknown solution id {sid!r}; known: {sorted(_REGISTRY)}")
    kwargs = dict(q=q, c=c, delta=delta)
    if sid == "zero" and equation is not None:
        kwargs["equation"] = equation
    parts = _REGISTRY[sid](**kwargs)
    sol = ManufacturedSolution(id=sid, params=dict(q=q, nu=nu, c=c, delta=delta), **parts)
    if check:
        worst = sol.self_check()
        if worst > FD_TOL:
            raise AssertionError(f"{sid}: derivative check failed ({worst:.2e})")
    return sol
