"""The explicit six-dimensional deformation family ``j_{a,b(u)}(s, t) = s a + t b(u)``.

``a`` is block diagonal with rotation blocks of speeds ``a1 < a2 < a3``;
``b`` couples the first coordinate of the three blocks through
``b12, b13, b23``.  Moving ``u`` through the admissible interval changes
``b(u)`` while keeping every ``s a + t b(u)`` isospectral to ``s a + t b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .nilalg import SkewPencil


class DomainError(ValueError):
    """Deformation parameter outside the admissible interval."""


@dataclass(frozen=True)
class Example8Params:
    a: tuple[float, float, float]
    b: tuple[float, float, float]

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        b = tuple(float(x) for x in self.b)
        if len(a) != 3 or len(b) != 3:
            raise ValueError("a and b must be triples")
        if not (0 < a[0] < a[1] < a[2]):
            raise ValueError(f"need 0 < a1 < a2 < a3, got {a}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def pencil(self) -> SkewPencil:
        return SkewPencil.from_matrices([build_a(self.a), build_b(self.b)])

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b)}

    @classmethod
    def from_json(cls, obj: dict) -> "Example8Params":
        return cls(tuple(obj["a"]), tuple(obj["b"]))


@dataclass(frozen=True)
class DeformationInterval:
    lo: float
    hi: float

    def __contains__(self, u: float) -> bool:
        return self.lo <= u <= self.hi

    @property
    def has_interior(self) -> bool:
        return self.lo < self.hi

    def grid(self, samples: int = 65) -> np.ndarray:
        """Equally spaced points including both endpoints."""
        if samples < 2:
            raise ValueError("need at least 2 samples")
        g = np.linspace(self.lo, self.hi, samples)
        g[-1] = self.hi
        return g


def build_a(a) -> np.ndarray:
    a1, a2, a3 = (float(x) for x in a)
    if not (0 < a1 < a2 < a3):
        raise ValueError(f"need 0 < a1 < a2 < a3, got {tuple(a)}")
    A = np.zeros((6, 6))
    for i, ai in enumerate((a1, a2, a3)):
        A[2 * i + 1, 2 * i] = ai
        A[2 * i, 2 * i + 1] = -ai
    return A


def build_b(b) -> np.ndarray:
    b12, b13, b23 = (float(x) for x in b)
    B = np.zeros((6, 6))
    B[0, 2], B[0, 4], B[2, 4] = b12, b13, b23
    return B - B.T


def _gaps(a):
    a1, a2, a3 = (x * x for x in a)
    # coefficient of u in (b12^2, b13^2, b23^2)
    return a2 - a1, a1 - a3, a3 - a2


def interval_I(p: Example8Params) -> DeformationInterval:
    g12, g13, g23 = _gaps(p.a)
    b12, b13, b23 = p.b
    lo = max(-b12 * b12 / g12, -b23 * b23 / g23)
    hi = b13 * b13 / -g13
    return DeformationInterval(lo + 0.0, hi + 0.0)


def deform(p: Example8Params, u: float) -> Example8Params:
    """``b(u)``: the square of each coupling moves linearly in u, signs kept.

    A zero coupling counts as positive.  Raises `DomainError` when u lies
    outside the admissible interval.
    """
    I = interval_I(p)
    if u not in I:
        raise DomainError(f"u={u!r} outside [{I.lo!r}, {I.hi!r}]")
    out = []
    for bij, g in zip(p.b, _gaps(p.a)):
        # endpoints can round to a tiny negative radicand
        r = max(bij * bij + u * g, 0.0)
        out.append(math.copysign(math.sqrt(r), 1.0 if bij == 0 else bij))
    return Example8Params(p.a, tuple(out))


def family_pencil(p: Example8Params, u: float) -> SkewPencil:
    return deform(p, u).pencil()


def ricci_u(p: Example8Params, u: float) -> np.ndarray:
    """v-block of the Ricci form along the family, ``(a^2 + b(u)^2) / 2``."""
    q = deform(p, u)
    a = build_a(q.a)
    b = build_b(q.b)
    R = 0.5 * (a @ a + b @ b)
    return 0.5 * (R + R.T)


def dimension_bound(m: int) -> int:
    """Lower bound ``m(m-1)/2 - h(h+2)``, ``h = floor(m/2)``, on the number of deformation parameters."""
    if m < 1:
        raise ValueError("m must be positive")
    h = m // 2
    return m * (m - 1) // 2 - h * (h + 2)


BASE_PARAMS = Example8Params((1.0, 2.0, 3.0), (0.0, 1.0, 0.0))
