"""Independent reference computations shared by the unit and acceptance tests."""

import itertools
import math
from fractions import Fraction

import numpy as np


def brute_force_autos(B, bound=2):
    """Integer U with entries in [-bound, bound] and U^T G U = G, mapped to C = B U B^-1."""
    G = B.T @ B
    Binv = np.linalg.inv(B)
    out = []
    for entries in itertools.product(range(-bound, bound + 1), repeat=4):
        U = np.array(entries, dtype=float).reshape(2, 2)
        if np.max(np.abs(U.T @ G @ U - G)) < 1e-9:
            out.append(B @ U @ Binv)
    return out


def same_set(As, Bs, tol=1e-9):
    return len(As) == len(Bs) and all(any(np.max(np.abs(a - b)) < tol for b in Bs) for a in As)


def exact_rank(rows):
    """Rank of a Fraction matrix by Gaussian elimination."""
    M = [list(r) for r in rows]
    rank, cols = 0, len(M[0])
    for c in range(cols):
        piv = next((i for i in range(rank, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        for i in range(len(M)):
            if i != rank and M[i][c] != 0:
                f = M[i][c] / M[rank][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[rank])]
        rank += 1
    return rank


def commutant_operator(J):
    """Rows of X -> (X J_i - J_i X) applied to every matrix unit E_ab, as columns."""
    m = len(J[0])
    cols = []
    for a, b in itertools.product(range(m), repeat=2):
        col = []
        for Ji in J:
            for r, c in itertools.product(range(m), repeat=2):
                # (E_ab J)[r, c] = [r == a] J[b, c];  (J E_ab)[r, c] = J[r, a] [c == b]
                col.append((Ji[b][c] if r == a else 0) - (Ji[r][a] if c == b else 0))
        cols.append(col)
    return [list(row) for row in zip(*cols)]


def frac_matrix(M):
    return [[Fraction(int(round(x))) for x in row] for row in M]


def rk4_lift(p, X, Y, h_max=1e-3):
    """Integrate x' = v, v' = -x, z' = [x, v] / 2 over one turn, batched over rows of X, Y."""
    n = math.ceil(2 * math.pi / h_max)
    h = 2 * math.pi / n
    J = p.J

    def rhs(s):
        x, v = s[:, : p.m], s[:, p.m : 2 * p.m]
        # component i is <J_i x, v>
        dz = 0.5 * np.einsum("iab,nb,na->ni", J, x, v)
        return np.hstack([v, -x, dz])

    s = np.hstack([X, Y, np.zeros((len(X), p.k))])
    for _ in range(n):
        k1 = rhs(s)
        k2 = rhs(s + 0.5 * h * k1)
        k3 = rhs(s + 0.5 * h * k2)
        k4 = rhs(s + h * k3)
        s = s + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return s[:, : p.m], s[:, 2 * p.m :]
