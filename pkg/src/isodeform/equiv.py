"""Lattice equivalence of pencils and invariants that rule it out.

Two pencils are L-equivalent when orthogonal A on v and lattice-preserving
orthogonal C on z satisfy ``A j(z) A^-1 = j'(C z)``.  Equivalence is
certified only by an explicit, verified pair (A, C); inequivalence only by
a similarity invariant that differs for every candidate C.  Everything in
between is reported as undecided.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .matcore import TOL, ShapeError, as_square, nullspace, scale, sym_eigen
from .nilalg import SkewPencil, ricci_form

CERT_TOL = 1e-8
SCREEN_WORD_LENGTH = 4
STALL_RATIO = 1e-6


@dataclass(frozen=True)
class LatticeBasis:
    """Full-rank lattice in z; columns of `basis` are the generators."""

    basis: np.ndarray

    def __post_init__(self):
        B = as_square(self.basis).copy()
        if abs(np.linalg.det(B)) < 1e-10 * scale(B) ** B.shape[0]:
            raise ShapeError("lattice basis is degenerate")
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @property
    def k(self) -> int:
        return self.basis.shape[0]

    @property
    def gram(self) -> np.ndarray:
        return self.basis.T @ self.basis

    @classmethod
    def standard(cls, k: int) -> "LatticeBasis":
        return cls(np.eye(k))

    def to_json(self) -> dict:
        # "basis" lists the generators, one per inner list
        return {"k": self.k, "basis": self.basis.T.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "LatticeBasis":
        try:
            gens = np.array(obj["basis"], dtype=float)
            k = int(obj["k"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ShapeError(f"malformed lattice JSON: {exc}") from None
        if gens.shape != (k, k):
            raise ShapeError(f"lattice JSON needs {k} generators of length {k}")
        return cls(gens.T)


class State(str, enum.Enum):
    EQUIVALENT = "Equivalent"
    INEQUIVALENT = "Inequivalent"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Witness:
    name: str
    value_a: tuple
    value_b: tuple
    gap: float


@dataclass(frozen=True)
class EquivalenceVerdict:
    state: State
    A: Optional[np.ndarray] = None
    C: Optional[np.ndarray] = None
    witness: Optional[Witness] = None
    restarts: int = 0
    best_residual: float = math.inf
    certificate_error: Optional[float] = None
    excluded: list = field(default_factory=list)


# -- lattice automorphisms ----------------------------------------------------


def _short_vectors(L: LatticeBasis, norm2: float, tol: float) -> list[np.ndarray]:
    """Integer coordinate vectors n with ``|B n|^2 = norm2`` (within tol)."""
    B = L.basis
    Binv = np.linalg.inv(B)
    # |n_i| = |(B^-1 v)_i| <= |row_i(B^-1)| |v|
    bounds = [int(math.floor(np.linalg.norm(Binv[i]) * math.sqrt(norm2) + 1e-9)) for i in range(L.k)]
    G = L.gram
    out = []
    for n in itertools.product(*(range(-b, b + 1) for b in bounds)):
        v = np.array(n, dtype=float)
        if abs(v @ G @ v - norm2) <= tol:
            out.append(v)
    return out


def lattice_automorphisms(L: LatticeBasis, tol: float = 1e-9) -> list[np.ndarray]:
    """All orthogonal maps of z that preserve the lattice.

    Each automorphism sends the basis to lattice vectors of the same norms
    and preserves the Gram matrix; candidates are enumerated per basis
    vector and combined.  The identity comes first, the rest follow in a
    fixed order.
    """
    if L.k > 4:
        raise ValueError("lattice automorphism enumeration is limited to k <= 4")
    G = L.gram
    s = tol * scale(G)
    cands = [_short_vectors(L, G[i, i], s) for i in range(L.k)]
    B, Binv = L.basis, np.linalg.inv(L.basis)
    autos = []
    for cols in itertools.product(*cands):
        U = np.column_stack(cols)
        if np.max(np.abs(U.T @ G @ U - G)) <= s:
            autos.append(B @ U @ Binv)
    autos.sort(key=lambda C: (np.max(np.abs(C - np.eye(L.k))) > s, tuple(np.round(-C.ravel(), 9))))
    return autos


# -- invariants ---------------------------------------------------------------


def twist(p: SkewPencil, C) -> SkewPencil:
    """Pencil ``z -> j(C^-1 z)``; its i-th matrix is ``sum_l C[i, l] J_l``."""
    C = as_square(C)
    return SkewPencil(np.einsum("il,lab->iab", C, p.J))


def conjugate(p: SkewPencil, A) -> SkewPencil:
    """Pencil with matrices ``A J_i A^T``."""
    A = as_square(A)
    return SkewPencil(np.einsum("ab,ibc,dc->iad", A, p.J, A))


def commutant_dimension(p: SkewPencil, tol: float = TOL.spectral) -> int:
    """Dimension of ``{X : X J_i = J_i X for all i}``.

    Value 1 means only multiples of the identity commute with the pencil,
    so the orthogonal maps fixing every J_i are just +-Id.
    """
    m = p.m
    I = np.eye(m)
    # row-major vec: vec(X J) = (I kron J^T) vec X, vec(J X) = (J kron I) vec X
    ops = [np.kron(I, Ji.T) - np.kron(Ji, I) for Ji in p.J]
    _, basis = nullspace(np.vstack(ops), tol)
    return basis.shape[0]


def word_trace_invariants(p: SkewPencil, maxlen: int = SCREEN_WORD_LENGTH) -> np.ndarray:
    """Traces of all words in ``J_1..J_k`` of length 1..maxlen, lexicographic per length."""
    if not 1 <= maxlen <= 6:
        raise ValueError("maxlen must be between 1 and 6")
    out = []
    for length in range(1, maxlen + 1):
        for word in itertools.product(range(p.k), repeat=length):
            M = p.J[word[0]]
            for i in word[1:]:
                M = M @ p.J[i]
            out.append(np.trace(M))
    return np.array(out)


def ric_spectrum_invariant(p: SkewPencil) -> np.ndarray:
    """Ascending eigenvalues of the Ricci v-block ``sum J_i^2 / 2``."""
    w, _ = sym_eigen(ricci_form(p).v_block)
    return w


# -- conjugacy search ---------------------------------------------------------


def _haar_orthogonal(rng: np.random.Generator, m: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.normal(size=(m, m)))
    return Q * np.sign(np.diag(R))


def _polar(M: np.ndarray) -> np.ndarray:
    U, _, Vt = np.linalg.svd(M)
    return U @ Vt


def _residuals(A, JA, JB) -> np.ndarray:
    return (A @ JA - JB @ A).ravel()


def _skew_basis(m: int) -> np.ndarray:
    E = []
    for p, q in itertools.combinations(range(m), 2):
        X = np.zeros((m, m))
        X[p, q], X[q, p] = 1.0, -1.0
        E.append(X)
    return np.array(E)


def _jacobian(A, JA, JB, E) -> np.ndarray:
    # d/dt of the residuals along A (I + t E_s): A E J~_i - J'_i A E
    AE = (A @ E)[:, None]
    D = AE @ JA[None] - JB[None] @ AE
    return D.reshape(len(E), -1).T


def conjugacy_search(
    pA: SkewPencil,
    pB: SkewPencil,
    C=None,
    seed: int = 42,
    restarts: int = 32,
    iters: int = 500,
    target: float = 1e-20,
) -> tuple[float, np.ndarray, int]:
    """Search for orthogonal A with ``A J~_i = J'_i A``, J~ the C-twisted pencil.

    Minimises ``f(A) = sum ||A J~_i - J'_i A||_F^2`` over O(m) by damped
    Gauss-Newton (Levenberg-Marquardt) steps in the tangent space
    ``A so(m)`` followed by polar retraction; a step is kept only if it
    lowers f.  Starts are the identity, then seeded Haar-random matrices
    alternating between the two components of O(m).  A start ends after
    `iters` steps, when the Riemannian gradient norm drops below 1e-12,
    when the model decrease falls below rounding level of f, or when the
    normalised residual reaches `target`.

    Returns
    -------
    residual : float
        Best ``f(A) / sum ||J_i||_F^2``.
    A : ndarray
        The minimiser found.
    used : int
        Number of starts consumed.
    """
    if (pA.m, pA.k) != (pB.m, pB.k):
        raise ShapeError("pencils differ in shape")
    m = pA.m
    JA = (twist(pA, C) if C is not None else pA).J
    JB = pB.J
    norm = max(float(np.sum(JA * JA) + np.sum(JB * JB)) / 2.0, 1e-300)
    E = _skew_basis(m)
    rng = np.random.default_rng(seed)

    best_f, best_A, used = math.inf, np.eye(m), 0
    for r in range(restarts):
        if r == 0:
            A = np.eye(m)
        else:
            A = _haar_orthogonal(rng, m)
            if (np.linalg.det(A) > 0) != (r % 2 == 0):
                A[:, 0] = -A[:, 0]
        used = r + 1
        res = _residuals(A, JA, JB)
        f = float(res @ res)
        mu = 1e-3 * norm
        for _ in range(iters):
            if f / norm <= target or not E.size:
                break
            Jac = _jacobian(A, JA, JB, E)
            g = Jac.T @ res
            if math.sqrt(float(g @ g)) <= 1e-12 * norm:
                break
            H = Jac.T @ Jac
            while True:
                delta = np.linalg.solve(H + mu * np.eye(len(E)), -g)
                # decrease promised by the quadratic model; below rounding level of f
                # no step can be accepted, so the start has converged
                pred = -float(g @ delta) - 0.5 * float(delta @ H @ delta)
                if pred <= 1e-13 * f:
                    f_new = f
                    break
                A_new = _polar(A @ (np.eye(m) + np.tensordot(delta, E, axes=1)))
                res_new = _residuals(A_new, JA, JB)
                f_new = float(res_new @ res_new)
                if f_new < f or mu > 1e12 * norm:
                    break
                mu *= 4.0
            if f_new >= f:
                break
            # a zero-residual minimum is approached superlinearly; crawling means
            # a spurious local minimum
            stalled = f_new > (1.0 - STALL_RATIO) * f
            A, res, f = A_new, res_new, f_new
            if stalled:
                break
            mu = max(mu / 3.0, 1e-15 * norm)
        if f < best_f:
            best_f, best_A = f, A
        if best_f / norm <= target:
            break
    return best_f / norm, best_A, used


def certificate_error(pA: SkewPencil, pB: SkewPencil, A, C) -> float:
    """``max_i ||A J~_i A^T - J'_i||_F`` relative to the pencil scale."""
    T = conjugate(twist(pA, C), A)
    err = max(float(np.linalg.norm(T.J[i] - pB.J[i])) for i in range(pB.k))
    return err / scale(pA.J.reshape(-1), pB.J.reshape(-1))


def _invariant_gap(name: str, a: np.ndarray, b: np.ndarray) -> Witness:
    s = scale(a, b)
    return Witness(name, tuple(map(float, a)), tuple(map(float, b)), float(np.max(np.abs(a - b))) / s)


def l_equivalence(
    pA: SkewPencil,
    pB: SkewPencil,
    L: LatticeBasis,
    seed: int = 42,
    tol: float = TOL.comparison,
    restarts: int = 32,
) -> EquivalenceVerdict:
    """Try to decide L-equivalence of two pencils.

    For every lattice automorphism C (identity first) the C-twisted `pA` is
    screened against `pB` with the Ricci spectrum and word traces up to
    length four.  A gap above ``10 * tol`` excludes C.  Surviving C go to
    the conjugacy search; a found A is accepted only after the identity
    ``A J~_i A^T = J'_i`` is checked directly.
    """
    if (pA.m, pA.k) != (pB.m, pB.k):
        raise ShapeError("pencils differ in shape")
    if L.k != pA.k:
        raise ShapeError("lattice rank differs from k")

    ric_b = ric_spectrum_invariant(pB)
    words_b = word_trace_invariants(pB)
    excluded: list[Witness] = []
    best, used_total = math.inf, 0
    for C in lattice_automorphisms(L):
        tA = twist(pA, C)
        w = _invariant_gap("ric_spectrum", ric_spectrum_invariant(tA), ric_b)
        if w.gap <= 10 * tol:
            w = _invariant_gap("word_traces", word_trace_invariants(tA), words_b)
        if w.gap > 10 * tol:
            excluded.append(w)
            continue
        res, A, used = conjugacy_search(pA, pB, C, seed=seed, restarts=restarts)
        used_total += used
        best = min(best, res)
        err = certificate_error(pA, pB, A, C)
        if res <= CERT_TOL and err <= 1e-7:
            return EquivalenceVerdict(
                State.EQUIVALENT, A=A, C=C, restarts=used_total, best_residual=res,
                certificate_error=err, excluded=excluded,
            )
    if used_total == 0:
        return EquivalenceVerdict(State.INEQUIVALENT, witness=excluded[0], excluded=excluded)
    return EquivalenceVerdict(State.UNDECIDED, restarts=used_total, best_residual=best, excluded=excluded)
