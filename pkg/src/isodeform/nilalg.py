"""Two-step nilpotent metric Lie algebras built from a skew-symmetric pencil.

A pencil ``J_1, ..., J_k`` of skew-symmetric ``m x m`` matrices defines
``g = v + z`` with ``v = R^m``, ``z = R^k`` central and the bracket
``<[x, y], z_i> = <J_i x, y>``.  All tables use the orthonormal basis
``e_1 .. e_m`` of ``v`` followed by ``z_1 .. z_k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matcore import TOL, ShapeError, check_skew, matrix_from_json, matrix_to_json, nullspace, scale


@dataclass(frozen=True)
class SkewPencil:
    """``k`` skew-symmetric ``m x m`` matrices, stored as a ``(k, m, m)`` array."""

    J: np.ndarray

    def __post_init__(self):
        J = np.array(self.J, dtype=float)
        if J.ndim != 3 or J.shape[0] < 1 or J.shape[1] != J.shape[2] or J.shape[1] < 1:
            raise ShapeError(f"pencil must have shape (k, m, m), got {J.shape}")
        for Ji in J:
            check_skew(Ji)
        J.setflags(write=False)
        object.__setattr__(self, "J", J)

    @classmethod
    def from_matrices(cls, mats) -> "SkewPencil":
        return cls(np.stack([np.asarray(M, dtype=float) for M in mats]))

    @property
    def k(self) -> int:
        return self.J.shape[0]

    @property
    def m(self) -> int:
        return self.J.shape[1]

    @property
    def n(self) -> int:
        return self.m + self.k

    def to_json(self) -> dict:
        return {"m": self.m, "k": self.k, "J": [matrix_to_json(Ji) for Ji in self.J]}

    @classmethod
    def from_json(cls, obj: dict) -> "SkewPencil":
        try:
            mats = [matrix_from_json(M) for M in obj["J"]]
            m, k = int(obj["m"]), int(obj["k"])
        except (KeyError, TypeError) as exc:
            raise ShapeError(f"malformed pencil JSON: {exc}") from None
        p = cls.from_matrices(mats)
        if (p.m, p.k) != (m, k):
            raise ShapeError(f"pencil JSON declares (m, k)=({m}, {k}) but holds ({p.m}, {p.k})")
        return p


@dataclass(frozen=True)
class GroupPoint:
    """Point of G(j) in exponential coordinates ``exp(x + z) -> (x, z)``."""

    x: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.array(self.x, dtype=float).reshape(-1))
        object.__setattr__(self, "z", np.array(self.z, dtype=float).reshape(-1))


@dataclass(frozen=True)
class ConnectionTable:
    """``gamma[a, b, c] = <nabla_{e_a} e_b, e_c>`` for left-invariant fields."""

    gamma: np.ndarray
    m: int
    k: int

    def covariant(self, X, Y) -> np.ndarray:
        """``nabla_X Y`` for left-invariant fields given by coefficient vectors."""
        return np.einsum("a,b,abc->c", np.asarray(X, float), np.asarray(Y, float), self.gamma)

    def compatibility_defect(self) -> float:
        return float(np.max(np.abs(self.gamma + self.gamma.transpose(0, 2, 1)), initial=0.0))


@dataclass(frozen=True)
class RicciForm:
    """Ricci form of the ambient metric on ``g``, in the fixed basis order."""

    M: np.ndarray
    m: int
    k: int
    tol: float = field(default=TOL.spectral, repr=False)

    def __post_init__(self):
        M = np.array(self.M, dtype=float)
        n = self.m + self.k
        if M.shape != (n, n):
            raise ShapeError(f"Ricci form must be {n}x{n}")
        s = scale(M)
        if np.max(np.abs(M - M.T)) > self.tol * s:
            raise ShapeError("Ricci form is not symmetric")
        M = 0.5 * (M + M.T)
        M.setflags(write=False)
        object.__setattr__(self, "M", M)
        if np.linalg.eigvalsh(self.v_block).max(initial=0.0) > self.tol * s:
            raise ShapeError("Ricci v-block is not negative semidefinite")
        if np.linalg.eigvalsh(self.z_block).min(initial=0.0) < -self.tol * s:
            raise ShapeError("Ricci z-block is not positive semidefinite")
        if np.max(np.abs(self.cross_block), initial=0.0) > self.tol * s:
            raise ShapeError("Ricci cross block does not vanish")

    @property
    def v_block(self) -> np.ndarray:
        return self.M[: self.m, : self.m]

    @property
    def z_block(self) -> np.ndarray:
        return self.M[self.m :, self.m :]

    @property
    def cross_block(self) -> np.ndarray:
        return self.M[: self.m, self.m :]

    def __call__(self, x, y=None) -> float:
        """Evaluate on v-vectors (length m) or full g-vectors (length m+k)."""
        x = np.asarray(x, dtype=float)
        y = x if y is None else np.asarray(y, dtype=float)
        B = self.v_block if x.shape[0] == self.m else self.M
        return float(x @ B @ y)


def _vec(x, n: int, name: str) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape[0] != n:
        raise ShapeError(f"{name} must have length {n}, got {v.shape[0]}")
    return v


def pencil_eval(p: SkewPencil, z) -> np.ndarray:
    """``j(z) = sum_i z_i J_i``."""
    return np.tensordot(_vec(z, p.k, "z"), p.J, axes=1)


def bracket(p: SkewPencil, x, y) -> np.ndarray:
    """``[x, y]`` for x, y in v; component i is ``<J_i x, y>``."""
    x = _vec(x, p.m, "x")
    y = _vec(y, p.m, "y")
    return np.einsum("iab,b,a->i", p.J, x, y)


def center_reduced(p: SkewPencil, tol: float = TOL.spectral) -> bool:
    """True iff the J_i have no common kernel, i.e. v meets the center trivially."""
    rank, _ = nullspace(p.J.reshape(p.k * p.m, p.m), tol)
    return rank == p.m


def group_mul(p: SkewPencil, g: GroupPoint, h: GroupPoint) -> GroupPoint:
    # (x, z)(x', z') = (x + x', z + z' + [x, x']/2)
    for q in (g, h):
        _vec(q.x, p.m, "x")
        _vec(q.z, p.k, "z")
    return GroupPoint(g.x + h.x, g.z + h.z + 0.5 * bracket(p, g.x, h.x))


def group_inverse(g: GroupPoint) -> GroupPoint:
    return GroupPoint(-g.x, -g.z)


def exp_pushforward(p: SkewPencil, v) -> np.ndarray:
    """Matrix of ``Id - ad_v / 2`` on g (the left-trivialised differential of exp at v)."""
    v = _vec(v, p.n, "v")
    m = p.m
    T = np.eye(p.n)
    # ad_v e_b = [v_v, e_b] has i-th component <J_i v_v, e_b>
    T[m:, :m] -= 0.5 * (p.J @ v[:m])
    return T


def structure_constants(p: SkewPencil) -> np.ndarray:
    """``c[a, b, c] = <[e_a, e_b], e_c>`` on the full basis of g."""
    m, n = p.m, p.n
    c = np.zeros((n, n, n))
    # <[e_a, e_b], z_i> = <J_i e_a, e_b> = J_i[b, a]
    c[:m, :m, m:] = p.J.transpose(2, 1, 0)
    return c


def connection_closed_form(p: SkewPencil) -> ConnectionTable:
    """Levi-Civita connection from the standard two-step nilpotent formulas.

    ``nabla_x y = [x, y]/2``, ``nabla_x w = nabla_w x = -j(w)x/2`` and
    ``nabla_w w' = 0`` for x, y in v and w, w' in z.
    """
    m, n = p.m, p.n
    G = np.zeros((n, n, n))
    JT = p.J.transpose(2, 1, 0)  # JT[a, b, i] = J_i[b, a]
    G[:m, :m, m:] = 0.5 * JT
    # <nabla_{e_a} z_i, e_c> = -J_i[c, a]/2, and the same with e_a, z_i swapped
    G[:m, m:, :m] = -0.5 * p.J.transpose(2, 0, 1)
    G[m:, :m, :m] = -0.5 * p.J.transpose(0, 2, 1)
    return ConnectionTable(G, p.m, p.k)


def connection_koszul(p: SkewPencil) -> ConnectionTable:
    """Levi-Civita connection from structure constants alone.

    For left-invariant fields in an orthonormal frame,
    ``2<nabla_X Y, Z> = <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>``.
    """
    c = structure_constants(p)
    G = 0.5 * (c - np.einsum("bca->abc", c) + np.einsum("cab->abc", c))
    return ConnectionTable(G, p.m, p.k)


def curvature_tensor(p: SkewPencil, conn: ConnectionTable | None = None) -> np.ndarray:
    """``R[a, b, c, d] = <R(e_a, e_b) e_c, e_d>`` with
    ``R(X, Y) = [nabla_X, nabla_Y] - nabla_[X, Y]``.

    Uses the Koszul connection unless `conn` is given.
    """
    G = (conn or connection_koszul(p)).gamma
    c = structure_constants(p)
    return (
        np.einsum("bce,aed->abcd", G, G)
        - np.einsum("ace,bed->abcd", G, G)
        - np.einsum("abe,ecd->abcd", c, G)
    )


def ricci_from_curvature(R: np.ndarray) -> np.ndarray:
    """``Ric(Y, Z) = trace(X -> R(X, Y) Z)``."""
    return np.einsum("abca->bc", R)


def ricci_form(p: SkewPencil) -> RicciForm:
    """Ricci form: ``J_i^2 / 2`` summed on v, ``tr(J_i^T J_j) / 4`` on z, zero across."""
    m = p.m
    M = np.zeros((p.n, p.n))
    M[:m, :m] = 0.5 * np.einsum("iab,ibc->ac", p.J, p.J)
    M[m:, m:] = 0.25 * np.einsum("iab,jab->ij", p.J, p.J)
    return RicciForm(M, p.m, p.k)


def scal_ambient(p: SkewPencil) -> float:
    """Constant scalar curvature of the ambient nilmanifold, ``-sum ||J_i||_F^2 / 4``."""
    return -0.25 * float(np.sum(p.J * p.J))


def abelian_pencil(m: int, k: int) -> SkewPencil:
    return SkewPencil(np.zeros((k, m, m)))
