from fractions import Fraction

import numpy as np
import pytest

from conftest import U_GRID, random_orthogonal, random_pencil
from isodeform.equiv import conjugate
from isodeform.family import Example8Params, deform, family_pencil, interval_I
from isodeform.isospec import (
    Verdict,
    gw3_criterion,
    pencil_isospectral,
    pencil_isospectral_exact,
    sample_directions,
    spectra_equal_at,
)
from isodeform.matcore import ShapeError
from isodeform.nilalg import SkewPencil


def frac_pencil(a, b):
    """Family pencil with integer parameters, as Fraction matrices."""
    A = [[Fraction(0)] * 6 for _ in range(6)]
    for i, ai in enumerate(a):
        A[2 * i + 1][2 * i] = Fraction(ai)
        A[2 * i][2 * i + 1] = Fraction(-ai)
    B = [[Fraction(0)] * 6 for _ in range(6)]
    for (r, c), bij in zip([(0, 2), (0, 4), (2, 4)], b):
        B[r][c] = Fraction(bij)
        B[c][r] = Fraction(-bij)
    return [A, B]


def frac_conj(Q, M):
    n = len(M)
    QM = [[sum(Q[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
    return [[sum(QM[i][t] * Q[j][t] for t in range(n)) for j in range(n)] for i in range(n)]


def test_identical(base_pencil):
    r = pencil_isospectral(base_pencil, base_pencil)
    assert r.verdict is Verdict.ISOSPECTRAL and r.max_residual == 0.0 and r.witness_z is None
    assert r.samples == 13


def test_family_isospectral(base_params, base_pencil):
    for u in U_GRID:
        r = pencil_isospectral(base_pencil, family_pencil(base_params, u))
        assert r.isospectral and r.max_residual <= 1e-9


def test_perturbed_coupling(base_params, base_pencil):
    q = Example8Params(base_params.a, (0.0, 1.01, 0.0))
    r = pencil_isospectral(base_pencil, q.pencil())
    assert r.verdict is Verdict.NOT_ISOSPECTRAL and r.witness_z is not None
    assert r.max_residual > 1e-4


def test_other_rotation_speeds(base_params, base_pencil):
    q = Example8Params((1, 2, 4), base_params.b)
    r = pencil_isospectral(base_pencil, q.pencil())
    assert not r.isospectral and r.max_residual > 0.1


def test_conjugate_any_k(rng):
    for k in (1, 2, 3):
        p = random_pencil(rng, 5, k)
        q = conjugate(p, random_orthogonal(rng, 5))
        assert pencil_isospectral(p, q).isospectral
        bumped = SkewPencil(q.J + 0.05 * random_pencil(rng, 5, k).J)
        assert not pencil_isospectral(p, bumped).isospectral


def test_large_k_needs_samples(rng):
    p = random_pencil(rng, 4, 4)
    with pytest.raises(ValueError):
        pencil_isospectral(p, p)
    assert pencil_isospectral(p, conjugate(p, random_orthogonal(rng, 4)), samples=50).isospectral


def test_shape_mismatch(rng):
    with pytest.raises(ShapeError):
        pencil_isospectral(random_pencil(rng, 4, 2), random_pencil(rng, 5, 2))


def test_sample_directions():
    Z = sample_directions(2, 6)
    assert Z.shape == (13, 2)
    np.testing.assert_allclose(np.linalg.norm(Z, axis=1), 1.0)
    assert sample_directions(3, 4).shape == (9 * 5, 3)
    with pytest.raises(ValueError):
        sample_directions(2, 6, samples=5)


def test_relation_properties(rng):
    p = random_pencil(rng, 6, 2)
    q = conjugate(p, random_orthogonal(rng, 6))
    w = conjugate(q, random_orthogonal(rng, 6))
    assert pencil_isospectral(p, p).isospectral
    z = rng.normal(size=2)
    assert spectra_equal_at(p, q, z) == pytest.approx(spectra_equal_at(q, p, z), abs=1e-15)
    assert pencil_isospectral(q, p).isospectral and pencil_isospectral(p, w).isospectral


def test_gw3_examples(base_params):
    assert gw3_criterion(base_params, deform(base_params, 1 / 16)) == pytest.approx(1 / 16, abs=1e-10)
    assert gw3_criterion(base_params, base_params) == 0.0
    assert gw3_criterion(base_params, Example8Params(base_params.a, (1, 1, 1))) is None
    with pytest.raises(ValueError):
        gw3_criterion(base_params, Example8Params((1, 2, 4), base_params.b))


def test_gw3_round_trip(base_params):
    for u in U_GRID:
        assert gw3_criterion(base_params, deform(base_params, u)) == pytest.approx(u, abs=1e-10)


def test_consistency_with_gw3(rng):
    """Sampled verdict agrees with the closed-form criterion on random family pairs."""
    agree = 0
    for t in range(200):
        a = np.sort(rng.uniform(0.5, 4.0, size=3))
        while np.min(np.diff(a)) < 0.2:
            a = np.sort(rng.uniform(0.5, 4.0, size=3))
        A = Example8Params(tuple(a), tuple(rng.uniform(-2, 2, size=3)))
        I = interval_I(A)
        if t % 3 == 0 and I.has_interior:
            B = deform(A, rng.uniform(I.lo, I.hi))
            # flip signs; only squares matter
            B = Example8Params(B.a, tuple(np.array(B.b) * rng.choice([-1, 1], size=3)))
        else:
            B = Example8Params(A.a, tuple(np.array(A.b) + rng.uniform(-0.5, 0.5, size=3)))
        expected = gw3_criterion(A, B, tol=1e-8) is not None
        got = pencil_isospectral(A.pencil(), B.pencil()).isospectral
        agree += expected == got
    assert agree == 200


class TestExact:
    def test_integer_pair(self):
        r = pencil_isospectral_exact(frac_pencil((1, 2, 3), (1, 3, 2)), frac_pencil((1, 2, 3), (2, 1, 3)))
        assert r.verdict is Verdict.ISOSPECTRAL and r.mode == "exact" and r.samples == 48

    def test_integer_pair_differs(self):
        r = pencil_isospectral_exact(frac_pencil((1, 2, 3), (1, 3, 2)), frac_pencil((1, 2, 3), (2, 1, 2)))
        assert r.verdict is Verdict.NOT_ISOSPECTRAL and r.witness_z is not None

    def test_rational_conjugate(self):
        c, s = Fraction(3, 5), Fraction(4, 5)
        Q = [[Fraction(0)] * 6 for _ in range(6)]
        # rotation in the (1, 3) plane, swap of 2 and 6, reflection on 4, identity on 5
        Q[0][0], Q[0][2], Q[2][0], Q[2][2] = c, -s, s, c
        Q[1][5] = Q[5][1] = Fraction(1)
        Q[3][3] = Fraction(-1)
        Q[4][4] = Fraction(1)
        J = frac_pencil((1, 2, 3), (1, 3, 2))
        r = pencil_isospectral_exact(J, [frac_conj(Q, M) for M in J])
        assert r.isospectral

    def test_string_entries(self):
        J = [[["0", "-1/2"], ["1/2", "0"]]]
        K = [[["0", "1/2"], ["-1/2", "0"]]]
        assert pencil_isospectral_exact(J, K).isospectral
        L = [[["0", "-1/3"], ["1/3", "0"]]]
        assert not pencil_isospectral_exact(J, L).isospectral

    def test_exact_flag(self):
        p = Example8Params((1, 2, 3), (1, 3, 2)).pencil()
        q = Example8Params((1, 2, 3), (2, 1, 3)).pencil()
        assert pencil_isospectral(p, q, exact=True).isospectral
