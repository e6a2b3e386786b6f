"""Geometry of the boundary ``N(j) = {(x, zbar) : |x| = 1}`` of the unit-ball domain.

N(j) is a torus bundle over the round sphere in v.  Its scalar curvature
depends only on the base point x; this module evaluates it two ways
(Ricci closed form, and second fundamental form from the Koszul
connection), locates its extremes, and follows horizontal lifts of great
circles to measure their displacement in the torus fibre.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .matcore import ShapeError, sym_eigen
from .nilalg import (
    GroupPoint,
    SkewPencil,
    bracket,
    connection_koszul,
    curvature_tensor,
    group_mul,
    ricci_form,
    ricci_from_curvature,
    scal_ambient,
)

if TYPE_CHECKING:
    from .equiv import LatticeBasis

UNIT_TOL = 1e-12


def _unit(x, m: int, name: str = "x") -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != m:
        raise ShapeError(f"{name} must have length {m}")
    if abs(np.linalg.norm(x) - 1.0) > UNIT_TOL:
        raise ShapeError(f"{name} must be a unit vector (norm {np.linalg.norm(x)!r})")
    return x


def reduce_mod_lattice(z, basis: np.ndarray) -> np.ndarray:
    """Representative of z in the half-open parallelepiped spanned by the columns of `basis`."""
    c = np.linalg.solve(basis, np.asarray(z, dtype=float))
    c = c - np.floor(c)
    c[c >= 1.0] = 0.0
    return basis @ c


@dataclass(frozen=True)
class BoundaryPoint:
    x: np.ndarray
    zbar: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float).reshape(-1)
        _unit(x, x.shape[0])
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "zbar", np.array(self.zbar, dtype=float).reshape(-1))

    @classmethod
    def from_lift(cls, x, z, lattice: "LatticeBasis | None" = None) -> "BoundaryPoint":
        z = np.asarray(z, dtype=float)
        if lattice is not None:
            z = reduce_mod_lattice(z, lattice.basis)
        return cls(x, z)


@dataclass(frozen=True)
class ScalReport:
    scal_prop6: float
    scal_shape: float
    ambient: float
    ric_xx: float
    trace_nabla_x: float
    trace_shape: float

    @property
    def discrepancy(self) -> float:
        return abs(self.scal_prop6 - self.scal_shape)


@dataclass(frozen=True)
class ScalExtremes:
    min: float
    max: float
    argmin_x: np.ndarray
    argmax_x: np.ndarray


def _check_point(p: SkewPencil, pt: BoundaryPoint) -> np.ndarray:
    if pt.zbar.shape[0] != p.k:
        raise ShapeError(f"zbar must have length {p.k}")
    return _unit(pt.x, p.m)


def boundary_frame(p: SkewPencil, pt: BoundaryPoint) -> tuple[np.ndarray, np.ndarray]:
    """Unit normal ``(x, 0)`` and an orthonormal basis (columns) of its complement in g.

    The basis consists of ``x^perp`` inside v followed by ``z_1 .. z_k``;
    for ``x = e_1`` it is exactly ``e_2 .. e_m, z_1 .. z_k``.
    """
    x = _check_point(p, pt)
    m, n = p.m, p.n
    w = x.copy()
    w[0] -= 1.0
    nw = np.linalg.norm(w)
    # Householder reflection swapping e_1 and x; its other columns span x^perp
    H = np.eye(m) if nw < UNIT_TOL else np.eye(m) - 2.0 * np.outer(w, w) / nw**2
    T = np.zeros((n, n - 1))
    T[:m, : m - 1] = H[:, 1:]
    T[m:, m - 1 :] = np.eye(p.k)
    normal = np.zeros(n)
    normal[:m] = x
    return normal, T


def scal_at(p: SkewPencil, pt: BoundaryPoint) -> float:
    """``scal_ambient + (m-1)(m-2) - Ric(x, x)``."""
    x = _check_point(p, pt)
    return scal_ambient(p) + (p.m - 1) * (p.m - 2) - ricci_form(p)(x)


def nabla_x_matrix(p: SkewPencil, x, conn=None) -> np.ndarray:
    """Matrix of ``u -> nabla_u X`` on g for the left-invariant field X = (x, 0)."""
    G = (conn or connection_koszul(p)).gamma
    X = np.zeros(p.n)
    X[: p.m] = x
    # column u holds nabla_{e_u} X = sum_b X_b Gamma[u, b, :]
    return np.einsum("ubc,b->cu", G, X)


def scal_via_shape(p: SkewPencil, pt: BoundaryPoint) -> ScalReport:
    """Scalar curvature of N(j) from the second fundamental form.

    ``scal = scal~ - 2 Ric~(nu, nu) + (tr S)^2 - |S|^2`` with shape operator
    ``S u = proj_v u + nabla_u x`` on the tangent space ``x^perp``.  The
    connection, ambient Ricci and ambient scalar curvature all come from
    the Koszul formula and the full curvature tensor, not from the closed
    forms used by `scal_at`.
    """
    x = _check_point(p, pt)
    m = p.m
    conn = connection_koszul(p)
    ric = ricci_from_curvature(curvature_tensor(p, conn))
    ambient = float(np.trace(ric))

    normal, T = boundary_frame(p, pt)
    D = nabla_x_matrix(p, x, conn)
    P = np.zeros((p.n, p.n))
    P[:m, :m] = np.eye(m)
    S = T.T @ (P + D) @ T
    tr_S = float(np.trace(S))
    ric_nn = float(normal @ ric @ normal)
    scal_shape = ambient - 2.0 * ric_nn + tr_S**2 - float(np.sum(S * S))
    return ScalReport(
        scal_prop6=scal_at(p, pt),
        scal_shape=scal_shape,
        ambient=ambient,
        ric_xx=ric_nn,
        trace_nabla_x=float(np.trace(D)),
        trace_shape=tr_S,
    )


def scal_extremes(p: SkewPencil) -> ScalExtremes:
    """Extremes of the scalar curvature over N(j).

    The maximum sits at the eigenvector of the smallest eigenvalue of the
    Ricci v-block, the minimum at the largest.
    """
    w, V = sym_eigen(ricci_form(p).v_block)
    base = scal_ambient(p) + (p.m - 1) * (p.m - 2)
    return ScalExtremes(
        min=base - float(w[-1]),
        max=base - float(w[0]),
        argmin_x=V[:, -1].copy(),
        argmax_x=V[:, 0].copy(),
    )


def _orthonormal_pair(p: SkewPencil, x, y) -> tuple[np.ndarray, np.ndarray]:
    x = _unit(x, p.m, "x")
    y = _unit(y, p.m, "y")
    if abs(x @ y) > UNIT_TOL:
        raise ShapeError("x and y must be orthogonal")
    return x, y


def horizontal_lift(
    p: SkewPencil, x, y, z0, t: float, lattice: "LatticeBasis | None" = None
) -> GroupPoint:
    """Horizontal geodesic over the great circle through x in direction y.

    ``sigma(t) = (cos t x + sin t y, z0 + t [x, y] / 2)``.  The fibre
    coordinate is returned raw unless a lattice is given, in which case it
    is reduced to the fundamental domain.
    """
    x, y = _orthonormal_pair(p, x, y)
    z0 = np.asarray(z0, dtype=float).reshape(-1)
    if z0.shape[0] != p.k:
        raise ShapeError(f"z0 must have length {p.k}")
    z = z0 + 0.5 * t * bracket(p, x, y)
    if lattice is not None:
        z = reduce_mod_lattice(z, lattice.basis)
    return GroupPoint(np.cos(t) * x + np.sin(t) * y, z)


def holonomy_displacement(p: SkewPencil, x, y) -> np.ndarray:
    """Fibre displacement ``pi [x, y]`` after one loop of the horizontal lift."""
    x, y = _orthonormal_pair(p, x, y)
    return np.pi * bracket(p, x, y)


@dataclass(frozen=True)
class FiberReport:
    fiber_violation: float
    submersion_violation: float

    @property
    def max_violation(self) -> float:
        return max(self.fiber_violation, self.submersion_violation)


def fiber_geometry_check(p: SkewPencil, point: GroupPoint | None = None) -> FiberReport:
    """Check that the torus fibres are flat and totally geodesic and that
    ``(x, z) -> x`` is a Riemannian submersion.

    The fibre part reads ``nabla_w w'`` for central w, w' off the Koszul
    table.  The submersion part pushes each left-invariant basis vector
    through left translation at `point` (by a group product, which is affine
    in the second factor) and compares its v-projection with ``[I 0]``.
    """
    m = p.m
    G = connection_koszul(p).gamma
    fiber = float(np.max(np.abs(G[m:, m:, :]), initial=0.0))

    if point is None:
        point = GroupPoint(np.linspace(0.3, -0.7, m), np.linspace(0.1, 0.5, p.k))
    base = group_mul(p, point, GroupPoint(np.zeros(m), np.zeros(p.k)))
    dpi = np.zeros((m, p.n))
    for a in range(p.n):
        e = np.zeros(p.n)
        e[a] = 1.0
        moved = group_mul(p, point, GroupPoint(e[:m], e[m:]))
        dpi[:, a] = moved.x - base.x
    target = np.zeros((m, p.n))
    target[:, :m] = np.eye(m)
    sub = float(np.max(np.abs(dpi - target)))
    return FiberReport(fiber, sub)

