import math

import numpy as np
import pytest

from conftest import orthonormal_pair, random_pencil, unit
from oracles import rk4_lift
from isodeform.boundary import (
    BoundaryPoint,
    boundary_frame,
    fiber_geometry_check,
    holonomy_displacement,
    horizontal_lift,
    reduce_mod_lattice,
    scal_at,
    scal_extremes,
    scal_via_shape,
)
from isodeform.equiv import LatticeBasis
from isodeform.matcore import ShapeError
from isodeform.nilalg import GroupPoint, bracket, group_inverse, group_mul


def e(i, n=6):
    v = np.zeros(n)
    v[i] = 1.0
    return v


class TestPoint:
    def test_unit_required(self):
        with pytest.raises(ShapeError):
            BoundaryPoint([1.0, 1.0], [0.0])

    def test_from_lift(self):
        L = LatticeBasis(np.array([[1.0, 0.5], [0.0, 1.0]]))
        pt = BoundaryPoint.from_lift(e(0), [2.3, -0.4], L)
        c = np.linalg.solve(L.basis, pt.zbar)
        assert np.all((0 <= c) & (c < 1))
        np.testing.assert_allclose(np.linalg.solve(L.basis, pt.zbar - [2.3, -0.4]) % 1.0, 0.0, atol=1e-12)

    def test_reduce_identity_lattice(self):
        np.testing.assert_allclose(reduce_mod_lattice([1.25, -0.25], np.eye(2)), [0.25, 0.75])


class TestFrame:
    def test_e1(self, base_pencil):
        normal, T = boundary_frame(base_pencil, BoundaryPoint(e(0), [0, 0]))
        np.testing.assert_array_equal(normal, e(0, 8))
        np.testing.assert_array_equal(T, np.eye(8)[:, 1:])

    def test_orthonormal(self, rng, base_pencil):
        x = unit(rng, 6)
        normal, T = boundary_frame(base_pencil, BoundaryPoint(x, [0, 0]))
        F = np.column_stack([normal, T])
        np.testing.assert_allclose(F.T @ F, np.eye(8), atol=1e-14)


class TestScal:
    def test_examples(self, base_pencil):
        assert scal_at(base_pencil, BoundaryPoint(e(4), [0, 0])) == pytest.approx(17.5, abs=1e-12)
        assert scal_at(base_pencil, BoundaryPoint(e(1), [0, 0])) == pytest.approx(13.0, abs=1e-12)

    def test_independent_of_fibre(self, rng, base_pencil):
        x = unit(rng, 6)
        a = scal_at(base_pencil, BoundaryPoint(x, [0, 0]))
        b = scal_at(base_pencil, BoundaryPoint(x, [0.3, 0.9]))
        assert a == b

    def test_round_sphere(self):
        from isodeform.nilalg import abelian_pencil

        # flat ambient: S^{m-1} x T^k has scal (m-1)(m-2)
        p = abelian_pencil(4, 1)
        r = scal_via_shape(p, BoundaryPoint(e(2, 4), [0.0]))
        assert r.scal_shape == pytest.approx(6.0, abs=1e-13) and r.scal_prop6 == 6.0

    def test_two_routes(self, rng):
        worst = 0.0
        for _ in range(20):
            m, k = int(rng.integers(2, 7)), int(rng.integers(1, 4))
            p = random_pencil(rng, m, k)
            s = max(1.0, float(np.sum(p.J * p.J)))
            for _ in range(25):
                r = scal_via_shape(p, BoundaryPoint(unit(rng, m), rng.normal(size=k)))
                worst = max(worst, r.discrepancy / s)
                assert abs(r.trace_nabla_x) <= 1e-12 * s
                assert r.trace_shape == pytest.approx(m - 1, abs=1e-12 * s)
        assert worst <= 1e-10

    def test_extremes(self, base_pencil, rng):
        ext = scal_extremes(base_pencil)
        assert ext.max == pytest.approx(17.5, abs=1e-12) and ext.min == pytest.approx(13.0, abs=1e-12)
        np.testing.assert_allclose(np.abs(ext.argmax_x), e(4), atol=1e-12)
        p = random_pencil(rng, 5, 2)
        ext = scal_extremes(p)
        assert scal_at(p, BoundaryPoint(ext.argmax_x, [0, 0])) == pytest.approx(ext.max, abs=1e-10)
        assert scal_at(p, BoundaryPoint(ext.argmin_x, [0, 0])) == pytest.approx(ext.min, abs=1e-10)
        X = rng.normal(size=(2000, 5))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        vals = [scal_at(p, BoundaryPoint(x, [0, 0])) for x in X]
        assert ext.min - 1e-10 <= min(vals) and max(vals) <= ext.max + 1e-10


class TestHolonomy:
    def test_example(self, base_pencil):
        np.testing.assert_allclose(holonomy_displacement(base_pencil, e(0), e(4)), [0.0, -math.pi])

    def test_matches_lift_and_rk4(self, rng):
        p = random_pencil(rng, 5, 2)
        pairs = [orthonormal_pair(rng, 5) for _ in range(20)]
        X = np.array([x for x, _ in pairs])
        Y = np.array([y for _, y in pairs])
        xs, zs = rk4_lift(p, X, Y)
        for (x, y), xe, ze in zip(pairs, xs, zs):
            d = holonomy_displacement(p, x, y)
            end = horizontal_lift(p, x, y, np.zeros(2), 2 * math.pi)
            np.testing.assert_allclose(end.z, d, atol=1e-10)
            np.testing.assert_allclose(d, math.pi * bracket(p, x, y), atol=1e-10)
            np.testing.assert_allclose(end.x, x, atol=1e-10)
            np.testing.assert_allclose(ze, d, atol=1e-6)
            np.testing.assert_allclose(xe, x, atol=1e-6)

    def test_horizontal(self, rng):
        p = random_pencil(rng, 4, 2)
        x, y = orthonormal_pair(rng, 4)
        h = 1e-6
        for t in (0.0, 0.7, 2.9):
            g = horizontal_lift(p, x, y, [0.2, -0.1], t)
            fwd = horizontal_lift(p, x, y, [0.2, -0.1], t + h)
            bwd = horizontal_lift(p, x, y, [0.2, -0.1], t - h)
            a = group_mul(p, group_inverse(g), fwd)
            b = group_mul(p, group_inverse(g), bwd)
            vel = (np.concatenate([a.x, a.z]) - np.concatenate([b.x, b.z])) / (2 * h)
            # left-trivialised velocity has no central part and unit length
            np.testing.assert_allclose(vel[4:], 0.0, atol=1e-8)
            assert np.linalg.norm(vel[:4]) == pytest.approx(1.0, abs=1e-8)

    def test_closed_when_bracket_vanishes(self, base_pencil):
        x, y = e(0), e(3)
        assert np.all(holonomy_displacement(base_pencil, x, y) == 0.0)
        end = horizontal_lift(base_pencil, x, y, [0.4, 0.1], 2 * math.pi)
        np.testing.assert_allclose(end.x, x, atol=1e-12)
        np.testing.assert_array_equal(end.z, [0.4, 0.1])

    def test_lattice_reduction(self, base_pencil):
        g = horizontal_lift(base_pencil, e(0), e(4), [0, 0], 2 * math.pi, LatticeBasis.standard(2))
        np.testing.assert_allclose(g.z, [0.0, 4 - math.pi], atol=1e-12)

    def test_rejects_non_orthogonal(self, base_pencil):
        with pytest.raises(ShapeError):
            holonomy_displacement(base_pencil, e(0), e(0))


def test_fibre_geometry(rng, base_pencil):
    assert fiber_geometry_check(base_pencil).max_violation <= 1e-12
    p = random_pencil(rng, 5, 3)
    pt = GroupPoint(rng.normal(size=5), rng.normal(size=3))
    rep = fiber_geometry_check(p, pt)
    assert rep.fiber_violation <= 1e-12 and rep.submersion_violation <= 1e-12
