"""Small dense real linear algebra.

Everything downstream works with square matrices of size at most ~16, so the
routines here favour determinism and small orthogonality error over speed:
a cyclic Jacobi eigensolver for symmetric matrices, Faddeev-LeVerrier for
characteristic polynomials (optionally in exact rational arithmetic) and an
SVD-based nullspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class ShapeError(ValueError):
    """Input has the wrong shape or violates a structural invariant."""


class NumericalError(ArithmeticError):
    """An iterative routine failed to converge."""


@dataclass(frozen=True)
class Tolerances:
    structural: float = 1e-12
    spectral: float = 1e-10
    comparison: float = 1e-9
    orthogonal: float = 1e-10


TOL = Tolerances()


def scale(*mats) -> float:
    """``max(1, ||M||_F)`` over all arguments."""
    s = 1.0
    for m in mats:
        s = max(s, float(np.linalg.norm(np.asarray(m, dtype=float))))
    return s


# -- validators ---------------------------------------------------------------


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.size == 0:
        raise ShapeError(f"expected a non-empty 2-d matrix, got shape {A.shape}")
    return A


def as_square(M) -> np.ndarray:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {A.shape}")
    return A


def is_symmetric(M, tol: float = TOL.structural) -> bool:
    A = as_square(M)
    return bool(np.max(np.abs(A - A.T)) <= tol * scale(A))


def is_skew(M, tol: float = TOL.structural) -> bool:
    A = as_square(M)
    return bool(np.max(np.abs(A + A.T)) <= tol * scale(A))


def is_orthogonal(M, tol: float = TOL.orthogonal) -> bool:
    A = as_square(M)
    return bool(np.linalg.norm(A.T @ A - np.eye(A.shape[0])) <= tol)


def check_symmetric(M, tol: float = TOL.structural) -> np.ndarray:
    A = as_square(M)
    if not is_symmetric(A, tol):
        raise ShapeError("matrix is not symmetric")
    return A


def check_skew(M, tol: float = TOL.structural) -> np.ndarray:
    A = as_square(M)
    if not is_skew(A, tol):
        raise ShapeError("matrix is not skew-symmetric")
    return A


def check_orthogonal(M, tol: float = TOL.orthogonal) -> np.ndarray:
    A = as_square(M)
    if not is_orthogonal(A, tol):
        raise ShapeError("matrix is not orthogonal")
    return A


# -- symmetric eigenproblem -----------------------------------------------------


def _fix_signs(V: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    # first component with |v_i| > tol made positive, column by column
    V = V.copy()
    for j in range(V.shape[1]):
        col = V[:, j]
        idx = np.flatnonzero(np.abs(col) > tol)
        if idx.size and col[idx[0]] < 0:
            V[:, j] = -col
    return V


def sym_eigen(S, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    S : (n, n) array_like
        Symmetric matrix.
    max_sweeps : int
        Number of full cyclic sweeps before giving up.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues in ascending order (stable sort).
    V : (n, n) ndarray
        Orthogonal matrix whose columns are the eigenvectors, with the first
        clearly nonzero entry of each column positive.

    Raises
    ------
    ShapeError
        If `S` is not square and symmetric.
    NumericalError
        If the off-diagonal mass has not vanished after `max_sweeps` sweeps.
    """
    A = check_symmetric(S).copy()
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    V = np.eye(n)
    total = np.linalg.norm(A)
    if n == 1 or total == 0.0:
        return np.diag(A).copy(), V

    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                # below eps * ||S|| an entry no longer moves the spectrum
                if abs(apq) <= eps * total:
                    continue
                rotated = True
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the (p, q) rotation
                ap = A[:, p].copy()
                aq = A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap = A[p, :].copy()
                aq = A[q, :].copy()
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
        if not rotated:
            break
    else:
        raise NumericalError(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], _fix_signs(V[:, order])


# -- characteristic polynomial ------------------------------------------------


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        xf = float(x)
        if not math.isfinite(xf):
            raise ValueError(f"non-finite entry {x!r}")
        return Fraction(xf)
    raise TypeError(f"cannot use {type(x).__name__} entry in exact mode")


def to_fractions(M) -> list[list[Fraction]]:
    """Exact copy of `M` as nested lists of Fractions.

    Floats are converted exactly (binary value), strings like ``"3/5"`` are
    parsed.
    """
    rows = [list(r) for r in (M.tolist() if isinstance(M, np.ndarray) else M)]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ShapeError("ragged or empty matrix")
    return [[_to_fraction(x) for x in r] for r in rows]


def _char_poly_exact(M: list[list[Fraction]]) -> list[Fraction]:
    n = len(M)
    if any(len(r) != n for r in M):
        raise ShapeError("expected a square matrix")
    # clear denominators: char_poly(M)_r = char_poly(D M)_r / D^r, and the
    # recursion stays integral on integer matrices
    D = math.lcm(*(x.denominator for r in M for x in r))
    N = [[int(x * D) for x in r] for r in M]
    coeffs = [1]
    Mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Mk <- N Mk + c_{k-1} I ; c_k = -tr(N Mk) / k
        Mk = [[sum(N[i][l] * Mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            Mk[i][i] += coeffs[-1]
        tr = sum(N[i][l] * Mk[l][i] for i in range(n) for l in range(n))
        c, rem = divmod(-tr, k)
        if rem:
            raise ArithmeticError("Faddeev-LeVerrier lost integrality")
        coeffs.append(c)
    return [Fraction(c, D**r) for r, c in enumerate(coeffs)]


def char_poly(M, exact: bool = False) -> list:
    """Monic coefficients of ``det(lambda I - M)``, highest power first.

    With ``exact=True`` the Faddeev-LeVerrier recursion runs over Fractions
    and the result is a list of Fractions; entries may be ints, Fractions,
    strings ``"p/q"`` or floats (taken at their exact binary value).
    """
    if exact:
        F = to_fractions(M)
        if len(F) > 64:
            raise ShapeError("dimension above 64")
        return _char_poly_exact(F)

    A = as_square(M)
    n = A.shape[0]
    if n > 64:
        raise ShapeError("dimension above 64")
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    Mk = np.zeros_like(A)
    I = np.eye(n)
    for k in range(1, n + 1):
        Mk = A @ Mk + coeffs[k - 1] * I
        coeffs[k] = -np.trace(A @ Mk) / k
    return coeffs


# -- nullspace ----------------------------------------------------------------


def nullspace(M, tol: float = TOL.spectral) -> tuple[int, np.ndarray]:
    """Rank and orthonormal nullspace basis (as rows) of `M`.

    Singular values at or below ``tol * max(1, ||M||_F)`` count as zero.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    A = as_matrix(M)
    cols = A.shape[1]
    _, s, Vt = np.linalg.svd(A, full_matrices=True)
    rank = int(np.sum(s > tol * scale(A)))
    return rank, Vt[rank:cols].copy()


# -- JSON ---------------------------------------------------------------------


def matrix_to_json(M) -> dict:
    A = np.asarray(M)
    if A.dtype == object:
        entries = [str(x) for x in A.ravel()]
    else:
        entries = [float(x) for x in A.ravel()]
    return {"rows": int(A.shape[0]), "cols": int(A.shape[1]), "entries": entries}


def matrix_from_json(obj: dict, exact: bool = False):
    """Parse ``{"rows": R, "cols": C, "entries": [...]}``.

    Returns a float ndarray, or nested Fraction lists when `exact` is set
    (string entries ``"p/q"`` are only accepted then or when they parse as
    floats).
    """
    try:
        rows, cols, entries = int(obj["rows"]), int(obj["cols"]), list(obj["entries"])
    except (KeyError, TypeError) as exc:
        raise ShapeError(f"malformed matrix JSON: {exc}") from None
    if rows < 1 or cols < 1 or len(entries) != rows * cols:
        raise ShapeError(f"matrix JSON has {len(entries)} entries for {rows}x{cols}")
    if exact:
        F = [_to_fraction(x) for x in entries]
        return [F[i * cols:(i + 1) * cols] for i in range(rows)]
    vals = [float(_to_fraction(x)) if isinstance(x, str) else float(x) for x in entries]
    return np.array(vals).reshape(rows, cols)

