"""Conforming P_p Lagrange elements on an interval with homogeneous Dirichlet conditions.

Element nodes are Gauss-Lobatto points; the two boundary vertices are
eliminated, leaving ``M*p - 1`` interior degrees of freedom numbered left to
right.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.polynomial import legendre as npleg

from .errors import InvalidCount, InvalidDegree, OutOfDomain
from .linalg import lu_factor
from .temporal import gauss_legendre, legendre_derivative_values, legendre_values

MAX_DEGREE = 6


def lobatto_nodes(p: int) -> np.ndarray:
    """The p+1 Gauss-Lobatto points on [-1, 1]."""
    inner = np.sort(npleg.Legendre.basis(p).deriv().roots().real) if p >= 2 else np.array([])
    return np.concatenate(([-1.0], inner, [1.0]))


@dataclass(frozen=True, eq=False)
class FeSpace:
    a: float
    b: float
    vertices: np.ndarray
    p: int
    ref_nodes: np.ndarray = field(repr=False)

    @property
    def M(self) -> int:
        return self.vertices.size - 1

    @property
    def n_dofs(self) -> int:
        return self.M * self.p - 1

    @property
    def element_sizes(self) -> np.ndarray:
        return np.diff(self.vertices)

    @property
    def h(self) -> float:
        return float(self.element_sizes.max())

    @property
    def h_min(self) -> float:
        return float(self.element_sizes.min())

    @cached_property
    def _ref_coeffs(self) -> np.ndarray:
        # Legendre coefficients of the reference Lagrange basis, column k <-> node k
        return np.linalg.inv(legendre_values(self.p, self.ref_nodes).T)

    def ref_basis(self, s) -> np.ndarray:
        """Reference shape functions at points s, shape (p+1, len(s))."""
        return self._ref_coeffs.T @ legendre_values(self.p, s)

    def ref_basis_deriv(self, s) -> np.ndarray:
        return self._ref_coeffs.T @ legendre_derivative_values(self.p, s)

    @cached_property
    def node_coordinates(self) -> np.ndarray:
        """All global Lagrange nodes including the two boundary vertices."""
        x = [self.vertices[0:1]]
        for e in range(self.M):
            xl, xr = self.vertices[e], self.vertices[e + 1]
            x.append(0.5 * (1 - self.ref_nodes[1:]) * xl + 0.5 * (1 + self.ref_nodes[1:]) * xr)
        return np.concatenate(x)

    @property
    def dof_coordinates(self) -> np.ndarray:
        return self.node_coordinates[1:-1]

    @cached_property
    def local_to_dof(self) -> np.ndarray:
        """Interior DOF index for each (element, local node); -1 on the boundary."""
        g = np.arange(self.M)[:, None] * self.p + np.arange(self.p + 1)[None, :]
        dof = g - 1
        dof[g == 0] = -1
        dof[g == self.M * self.p] = -1
        return dof

    def quadrature(self, npts: int):
        """Physical points (M, npts), weights (M, npts) and reference basis values (p+1, npts)."""
        rule = gauss_legendre(npts)
        xl, xr = self.vertices[:-1, None], self.vertices[1:, None]
        x = 0.5 * (1 - rule.nodes) * xl + 0.5 * (1 + rule.nodes) * xr
        w = 0.5 * (xr - xl) * rule.weights
        return x, w, self.ref_basis(rule.nodes), rule.nodes

    def scatter(self, local: np.ndarray) -> np.ndarray:
        """Sum element contributions ``local[e, k, ...]`` into the interior DOF vector."""
        out = np.zeros((self.n_dofs,) + local.shape[2:])
        dof = self.local_to_dof
        mask = dof >= 0
        np.add.at(out, dof[mask], local[mask])
        return out

    def gather(self, dofs: np.ndarray) -> np.ndarray:
        """Element-local coefficients, shape (M, p+1, ...), zeros on the boundary."""
        dofs = np.asarray(dofs, dtype=float)
        full = np.zeros((self.n_dofs + 2,) + dofs.shape[1:])
        full[1:-1] = dofs
        g = np.arange(self.M)[:, None] * self.p + np.arange(self.p + 1)[None, :]
        return full[g]

    def load(self, f, npts: int | None = None) -> np.ndarray:
        """``(f, phi_i)`` for a vectorized spatial function f."""
        npts = npts or self.p + 8
        x, w, B, _ = self.quadrature(npts)
        vals = np.asarray(f(x), dtype=float)
        local = np.einsum("kq,eq,eq...->ek...", B, w, vals)
        return self.scatter(local)

    def stiffness_load(self, du, npts: int | None = None) -> np.ndarray:
        """``(u', phi_i')`` given the derivative u' as a vectorized function."""
        npts = npts or self.p + 8
        x, w, _, s = self.quadrature(npts)
        dB = self.ref_basis_deriv(s)
        jac = (2.0 / self.element_sizes)[:, None]
        vals = np.asarray(du(x), dtype=float)
        local = np.einsum("kq,eq,eq...->ek...", dB, w * jac, vals)
        return self.scatter(local)


def build_space(a: float, b: float, M: int, p: int) -> FeSpace:
    """Uniform mesh of M elements of degree p on (a, b)."""
    if not b > a:
        raise ValueError("need b > a")
    if not isinstance(M, (int, np.integer)) or M < 2:
        raise InvalidCount("need at least two elements")
    if not isinstance(p, (int, np.integer)) or not 1 <= p <= MAX_DEGREE:
        raise InvalidDegree(f"degree must lie in 1..{MAX_DEGREE}")
    vertices = np.linspace(a, b, M + 1)
    vertices[-1] = b
    return FeSpace(float(a), float(b), vertices, int(p), lobatto_nodes(p))


def build_graded_space(vertices, p: int) -> FeSpace:
    """Space on an arbitrary strictly increasing vertex list."""
    vertices = np.array(vertices, dtype=float)
    if vertices.size < 3 or not np.all(np.diff(vertices) > 0):
        raise InvalidCount("need at least two elements with increasing vertices")
    if not 1 <= p <= MAX_DEGREE:
        raise InvalidDegree(f"degree must lie in 1..{MAX_DEGREE}")
    return FeSpace(float(vertices[0]), float(vertices[-1]), vertices, int(p), lobatto_nodes(p))


@dataclass(frozen=True, eq=False)
class SpatialOperators:
    mass: np.ndarray
    stiffness: np.ndarray

    @cached_property
    def mass_lu(self):
        return lu_factor(self.mass)

    @cached_property
    def stiffness_lu(self):
        return lu_factor(self.stiffness)


def assemble(space: FeSpace) -> SpatialOperators:
    """Mass and stiffness matrices on interior DOFs (exact element integrals)."""
    rule = gauss_legendre(space.p + 1)
    B = space.ref_basis(rule.nodes)
    dB = space.ref_basis_deriv(rule.nodes)
    me = (B * rule.weights) @ B.T
    ke = (dB * rule.weights) @ dB.T
    hs = space.element_sizes
    n = space.n_dofs
    mass = np.zeros((n + 2, n + 2))
    stiff = np.zeros((n + 2, n + 2))
    for e in range(space.M):
        g = e * space.p + np.arange(space.p + 1)
        mass[np.ix_(g, g)] += 0.5 * hs[e] * me
        stiff[np.ix_(g, g)] += (2.0 / hs[e]) * ke
    return SpatialOperators(mass[1:-1, 1:-1], stiff[1:-1, 1:-1])


def l2_project_space(space: FeSpace, f, ops: SpatialOperators | None = None,
                     npts: int | None = None) -> np.ndarray:
    """DOFs of the L2(a, b)-orthogonal projection of f."""
    ops = ops or assemble(space)
    return ops.mass_lu.solve(space.load(f, npts))


def ritz_project_space(space: FeSpace, u, du, ops: SpatialOperators | None = None,
                       npts: int | None = None) -> np.ndarray:
    """DOFs of the elliptic projection: ``(R u', v') = (u', v')`` for all v.

    Only the derivative ``du`` enters; ``u`` is accepted for symmetry with
    callers that hold both and is checked to vanish on the boundary.
    """
    if u is not None:
        ends = np.asarray(u(np.array([space.a, space.b])), dtype=float)
        if np.max(np.abs(ends)) > 1e-10 * max(1.0, float(np.max(np.abs(u(space.dof_coordinates))))):
            raise ValueError("Ritz projection expects homogeneous boundary values")
    ops = ops or assemble(space)
    return ops.stiffness_lu.solve(space.stiffness_load(du, npts))


def _locate(space: FeSpace, x) -> tuple[np.ndarray, np.ndarray]:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    span = space.b - space.a
    if np.any(x < space.a - 1e-12 * span) or np.any(x > space.b + 1e-12 * span):
        raise OutOfDomain(f"points outside [{space.a}, {space.b}]")
    e = np.clip(np.searchsorted(space.vertices, x, side="right") - 1, 0, space.M - 1)
    xl, xr = space.vertices[e], space.vertices[e + 1]
    s = np.clip((2 * x - xl - xr) / (xr - xl), -1.0, 1.0)
    return e, s


def evaluate_fe(space: FeSpace, dofs, x, derivative: bool = False):
    """Value (or x-derivative) of the FE function at point(s) x."""
    scalar = np.ndim(x) == 0
    e, s = _locate(space, x)
    local = space.gather(dofs)[e]
    B = space.ref_basis_deriv(s) if derivative else space.ref_basis(s)
    vals = np.einsum("mk...,km->m...", local, B)
    if derivative:
        jac = 2.0 / space.element_sizes[e]
        vals = vals * jac.reshape((-1,) + (1,) * (vals.ndim - 1))
    return vals[0] if scalar else vals


def interpolate_fe(space: FeSpace, f) -> np.ndarray:
    """Nodal interpolant DOFs of f."""
    return np.asarray(f(space.dof_coordinates), dtype=float)
