"""Refinement studies: configuration, orchestration and reports."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

from .. import __version__
from ..analysis import compute_eoc, error_norms
from ..errors import ConfigInvalid, NonPositiveError
from ..methods import HEAT_SCHEMES, SCHEMES, MethodSpec, solve
from ..spatial import build_space
from ..temporal import TimeMesh
from .solutions import get_solution

REFINE_AXES = ("tau", "h", "none")
PREFLIGHT_SHARE = 0.10


@dataclass(frozen=True)
class StudyConfig:
    scheme: str = "HeatJamet"
    q: int = 1
    p: int = 1
    nu: float = 1.0
    c: float = 1.0
    delta: float = 0.0
    c_cfl: Optional[float] = None
    cfl_override: bool = False
    a: float = 0.0
    b: float = 1.0
    M: int = 16
    T: float = 1.0
    N: int = 8
    refine: str = "none"
    levels: int = 1
    solution: str = "heat_sine"
    norms: tuple = ("LinfL2",)
    tau_h_ratio: Optional[float] = None
    preflight: bool = True
    out: Optional[str] = None
    format: str = "json"

    def __post_init__(self):
        object.__setattr__(self, "norms", tuple(self.norms))
        if self.scheme not in SCHEMES:
            raise ConfigInvalid(f"unknown scheme {self.scheme!r}")
        if self.refine not in REFINE_AXES:
            raise ConfigInvalid(f"refine must be one of {REFINE_AXES}")
        if self.levels < 1:
            raise ConfigInvalid("levels must be >= 1")
        if self.format not in ("csv", "json"):
            raise ConfigInvalid("format must be csv or json")
        if self.M < 2 or self.N < 1 or not self.T > 0 or not self.b > self.a:
            raise ConfigInvalid("need M >= 2, N >= 1, T > 0 and b > a")
        if not self.norms:
            raise ConfigInvalid("at least one norm is required")
        if self.tau_h_ratio is not None and self.refine != "tau":
            raise ConfigInvalid("tau_h_ratio couples h to tau and needs refine = tau")

    def method_spec(self) -> MethodSpec:
        try:
            return MethodSpec(self.scheme, self.q, self.p, nu=self.nu, c=self.c, delta=self.delta,
                              c_cfl=self.c_cfl, cfl_override=self.cfl_override)
        except ValueError as exc:
            raise ConfigInvalid(str(exc)) from exc

    def resolution(self, level: int) -> tuple[int, int]:
        """(M, N) used at a refinement level."""
        N = self.N * 2 ** level if self.refine == "tau" else self.N
        M = self.M * 2 ** level if self.refine == "h" else self.M
        if self.tau_h_ratio is not None:
            tau = self.T / N
            M = max(2, int(round((self.b - self.a) * self.tau_h_ratio / tau)))
        return M, N

    def to_dict(self) -> dict:
        d = asdict(self)
        d["norms"] = list(self.norms)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "StudyConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class LevelResult:
    level: int
    M: int
    N: int
    param: float
    errors: dict
    seconds: float
    max_residual: float
    cfl_ratio: Optional[float] = None


@dataclass
class StudyReport:
    config: dict
    levels: list = field(default_factory=list)
    eoc: dict = field(default_factory=dict)
    version: str = __version__

    def to_dict(self) -> dict:
        return {"config": self.config, "levels": [asdict(lv) for lv in self.levels],
                "eoc": self.eoc, "version": self.version}

    @classmethod
    def from_dict(cls, d: dict) -> "StudyReport":
        return cls(config=d["config"], levels=[LevelResult(**lv) for lv in d["levels"]],
                   eoc=d["eoc"], version=d["version"])

    def norm_names(self) -> list[str]:
        return list(self.levels[0].errors) if self.levels else []

    def orders(self, norm: str) -> list:
        return self.eoc.get(norm, [])


class PreflightFailed(ConfigInvalid):
    """The fixed (non-refined) axis pollutes the finest-level error."""


def _solve_level(cfg: StudyConfig, spec: MethodSpec, exact, M: int, N: int, level: int) -> LevelResult:
    space = build_space(cfg.a, cfg.b, M, cfg.p)
    mesh = TimeMesh.uniform(cfg.T, N)
    start = time.perf_counter()
    sol = solve(spec, space, mesh, exact.problem(cfg.T))
    errs = error_norms(sol, exact, cfg.norms)
    seconds = time.perf_counter() - start
    param = cfg.T / N if cfg.refine == "tau" else space.h
    return LevelResult(level, M, N, param, errs, seconds, sol.max_residual, sol.cfl_ratio)


def _exact_for(cfg: StudyConfig):
    equation = "heat" if cfg.scheme in HEAT_SCHEMES else "wave"
    exact = get_solution(cfg.solution, q=cfg.q, nu=cfg.nu, c=cfg.c, delta=cfg.delta,
                         equation=equation)
    if exact.equation != equation:
        raise ConfigInvalid(f"solution {cfg.solution!r} is a {exact.equation} solution; "
                            f"{cfg.scheme} solves the {equation} equation")
    if (cfg.a, cfg.b) != (0.0, 1.0):
        raise ConfigInvalid("registered solutions live on the unit interval (a=0, b=1)")
    return exact


def _preflight(cfg, spec, exact, finest: LevelResult) -> None:
    """Double the fixed axis at the finest level; the error must barely move."""
    M, N = finest.M, finest.N
    if cfg.refine == "tau":
        axis, M2, N2 = "h (spatial mesh, fixed M=%d)" % M, 2 * M, N
    else:
        axis, M2, N2 = "tau (time step, fixed N=%d)" % N, M, 2 * N
    doubled = _solve_level(cfg, spec, exact, M2, N2, finest.level)
    for name, e in finest.errors.items():
        e2 = doubled.errors[name]
        if abs(e - e2) > PREFLIGHT_SHARE * e:
            raise PreflightFailed(
                f"pre-flight check failed for {name}: the non-refined axis {axis} contributes "
                f"{abs(e - e2):.3e} of the finest error {e:.3e} (limit {PREFLIGHT_SHARE:.0%}); "
                f"refine {axis.split()[0]} further")


def run_study(cfg: StudyConfig) -> StudyReport:
    """Solve every level, evaluate errors and fit orders from successive ratios."""
    spec = cfg.method_spec()
    exact = _exact_for(cfg)
    nlev = cfg.levels if cfg.refine != "none" else 1
    results: dict[int, LevelResult] = {}
    if cfg.preflight and cfg.refine != "none" and cfg.tau_h_ratio is None and nlev >= 2:
        top = nlev - 1
        results[top] = _solve_level(cfg, spec, exact, *cfg.resolution(top), top)
        _preflight(cfg, spec, exact, results[top])
    for k in range(nlev):
        if k not in results:
            results[k] = _solve_level(cfg, spec, exact, *cfg.resolution(k), k)
    levels = [results[k] for k in range(nlev)]
    report = StudyReport(config=cfg.to_dict(), levels=levels)
    for name in levels[0].errors:
        errs = [lv.errors[name] for lv in levels]
        if len(levels) < 2:
            report.eoc[name] = []
            continue
        try:
            report.eoc[name] = list(compute_eoc([lv.param for lv in levels], errs).orders)
        except NonPositiveError:
            report.eoc[name] = [None] * (len(levels) - 1)
    return report

