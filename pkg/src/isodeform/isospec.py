"""Isospectrality of pencils: ``j(z)`` and ``j'(z)`` share a spectrum for every z.

Spectra are compared through characteristic-polynomial coefficients.  The
coefficient of ``lambda^(m-r)`` in ``det(lambda - j(z))`` is a homogeneous
polynomial of degree r <= m in z, so agreement on a finite, well chosen set
of directions certifies agreement everywhere.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .family import Example8Params, interval_I
from .matcore import TOL, ShapeError, char_poly, scale, to_fractions
from .nilalg import SkewPencil, pencil_eval


class Verdict(str, enum.Enum):
    ISOSPECTRAL = "Isospectral"
    NOT_ISOSPECTRAL = "NotIsospectral"


@dataclass(frozen=True)
class IsospecReport:
    verdict: Verdict
    max_residual: float
    witness_z: Optional[tuple] = None
    mode: str = "sampled"
    samples: int = 0

    @property
    def isospectral(self) -> bool:
        return self.verdict is Verdict.ISOSPECTRAL


def _same_shape(pA: SkewPencil, pB: SkewPencil) -> None:
    if (pA.m, pA.k) != (pB.m, pB.k):
        raise ShapeError(f"pencils differ in shape: (m, k)={pA.m, pA.k} vs {pB.m, pB.k}")


def coefficient_residual(cA, cB, s: float) -> float:
    """``max_r |cA_r - cB_r| / s^r``; coefficient r is homogeneous of degree r."""
    return max(abs(float(x) - float(y)) / s**r for r, (x, y) in enumerate(zip(cA, cB)))


def spectra_equal_at(pA: SkewPencil, pB: SkewPencil, z) -> float:
    """Scaled characteristic-polynomial distance between ``j(z)`` and ``j'(z)``.

    Zero means identical spectra; anything at or below a relative tolerance
    (default 1e-9) is read as agreement.
    """
    _same_shape(pA, pB)
    MA, MB = pencil_eval(pA, z), pencil_eval(pB, z)
    return coefficient_residual(char_poly(MA), char_poly(MB), scale(MA, MB))


def sample_directions(k: int, m: int, samples: int | None = None) -> np.ndarray:
    """Directions in z on which coefficient agreement is decisive.

    k = 1: the single point z = 1.  k = 2: ``2m + 1`` equally spaced angles on
    the half circle.  k = 3: those angles times ``m + 1`` heights symmetric
    about zero.  Larger k needs an explicit `samples` count and gets seeded
    random unit directions, which is a check rather than a certificate.
    """
    if samples is not None and samples < 1:
        raise ValueError("samples must be positive")
    if k == 1:
        return np.ones((1, 1))
    if k in (2, 3):
        if samples is not None and samples < 2 * m + 1:
            raise ValueError(f"need at least {2 * m + 1} circle samples for m={m}")
        n = samples or 2 * m + 1
        th = np.pi * np.arange(n) / n
        circle = np.column_stack([np.cos(th), np.sin(th)])
        if k == 2:
            return circle
        # heights symmetric about 0 so the antipodal half circle is covered by parity
        heights = np.linspace(-1.0, 1.0, m + 1)
        return np.array([[c[0], c[1], h] for c in circle for h in heights])
    if samples is None:
        raise ValueError(f"k={k} needs an explicit sample count")
    rng = np.random.default_rng(0)
    Z = rng.normal(size=(samples, k))
    return Z / np.linalg.norm(Z, axis=1, keepdims=True)


def _exact_eval(J: Sequence[list[list[Fraction]]], z: Sequence[int]) -> list[list[Fraction]]:
    m = len(J[0])
    return [[sum(zi * Ji[r][c] for zi, Ji in zip(z, J)) for c in range(m)] for r in range(m)]


def pencil_isospectral_exact(JA, JB) -> IsospecReport:
    """Exact comparison for rational pencils given as sequences of matrices.

    Entries may be ints, Fractions, ``"p/q"`` strings or floats (taken at
    their exact binary value).  Coefficients are compared over the integer
    grid ``{0..m}^k``, enough to pin polynomials of degree <= m per variable.
    """
    FA = [to_fractions(M) for M in JA]
    FB = [to_fractions(M) for M in JB]
    k, m = len(FA), len(FA[0])
    if len(FB) != k or len(FB[0]) != m:
        raise ShapeError("pencils differ in shape")
    worst, witness, count = 0.0, None, 0
    for z in itertools.product(range(m + 1), repeat=k):
        if not any(z):
            continue
        count += 1
        cA = char_poly(_exact_eval(FA, z), exact=True)
        cB = char_poly(_exact_eval(FB, z), exact=True)
        if cA != cB:
            MA = np.array(_exact_eval(FA, z), dtype=float)
            MB = np.array(_exact_eval(FB, z), dtype=float)
            r = coefficient_residual(cA, cB, scale(MA, MB))
            if witness is None or r > worst:
                worst, witness = r, tuple(float(x) for x in z)
    verdict = Verdict.ISOSPECTRAL if witness is None else Verdict.NOT_ISOSPECTRAL
    return IsospecReport(verdict, worst, witness, "exact", count)


def pencil_isospectral(
    pA: SkewPencil,
    pB: SkewPencil,
    tol: float = TOL.comparison,
    exact: bool = False,
    samples: int | None = None,
) -> IsospecReport:
    """Decide whether ``j(z)`` and ``j'(z)`` are isospectral for every z.

    Parameters
    ----------
    pA, pB : SkewPencil
        Pencils of equal shape ``(m, k)``.
    tol : float
        Largest scaled coefficient residual still counted as agreement
        (sampled mode only).
    exact : bool
        Compare in rational arithmetic on the integer grid instead; the
        float entries are used at their exact binary values.
    samples : int, optional
        Circle sample count (at least ``2m + 1``) or, for k > 3, the number
        of random directions.

    Returns
    -------
    IsospecReport
        Verdict, worst residual and, when not isospectral, the direction
        where the worst residual occurred.
    """
    _same_shape(pA, pB)
    if exact:
        return pencil_isospectral_exact(list(pA.J), list(pB.J))
    Z = sample_directions(pA.k, pA.m, samples)
    res = np.array([spectra_equal_at(pA, pB, z) for z in Z])
    i = int(np.argmax(res))
    worst = float(res[i])
    if worst <= tol:
        return IsospecReport(Verdict.ISOSPECTRAL, worst, None, "sampled", len(Z))
    return IsospecReport(Verdict.NOT_ISOSPECTRAL, worst, tuple(float(x) for x in Z[i]), "sampled", len(Z))


def gw3_criterion(A: Example8Params, B: Example8Params, tol: float = 1e-10) -> Optional[float]:
    """Deformation parameter u relating two members of the six-dimensional family.

    Each of the three couplings yields ``u = (b'_ij^2 - b_ij^2) / gap_ij``;
    the pencils are isospectral exactly when the three agree (within `tol`)
    and the common value lies in the admissible interval of `A`.  Returns
    None otherwise.
    """
    if A.a != B.a:
        raise ValueError(f"parameter records must share a, got {A.a} and {B.a}")
    a1, a2, a3 = (x * x for x in A.a)
    gaps = (a2 - a1, a1 - a3, a3 - a2)
    us = [(bp * bp - b * b) / g for b, bp, g in zip(A.b, B.b, gaps)]
    if max(us) - min(us) > tol * max(1.0, max(abs(u) for u in us)):
        return None
    u = math.fsum(us) / 3.0
    I = interval_I(A)
    if not (I.lo - tol <= u <= I.hi + tol):
        return None
    return u
