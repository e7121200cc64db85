"""Generalized polar coordinates, rank transforms, and concomitant tables."""
from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from hrvlab.core import DomainError, RngStream
from hrvlab.transforms import (
    ConcomitantTable,
    concomitant_table,
    gpolar_axes,
    gpolar_axes_batch,
    gpolar_origin,
    pareto_standardize,
    rank_transform,
)


class TestGpolarOrigin:
    def test_interior_point(self):
        p = gpolar_origin((2.0, 6.0))
        assert p.radius == 8.0
        assert p.angle_w == 0.25

    def test_point_on_axis(self):
        p = gpolar_origin((5.0, 0.0))
        assert p.radius == 5.0
        assert p.angle_w == 1.0

    def test_origin_rejected(self):
        with pytest.raises(DomainError):
            gpolar_origin((0.0, 0.0))

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            gpolar_origin((-1.0, 2.0))

    def test_reconstruct_exact_when_radius_is_power_of_two(self):
        # The quotient z1/(z1+z2) is exactly representable whenever the
        # L1 radius is a power of two, so those points round-trip exactly.
        rng = np.random.default_rng(1)
        for _ in range(500):
            total = 2 ** int(rng.integers(1, 20))
            z1 = int(rng.integers(0, total + 1))
            z2 = total - z1
            p = gpolar_origin((float(z1), float(z2)))
            assert p.reconstruct() == (float(z1), float(z2))

    def test_reconstruct_error_bounded_by_radius_spacing(self):
        # General integer points cannot round-trip exactly (the quotient
        # z1/(z1+z2) usually has no float64 representation); the error per
        # coordinate is below one ulp of the radius, and the larger
        # coordinate lands within 2 ulp of itself.
        rng = np.random.default_rng(2)
        for _ in range(2000):
            z1 = float(rng.integers(0, 10**6))
            z2 = float(rng.integers(0, 10**6))
            if z1 + z2 == 0.0:
                continue
            p = gpolar_origin((z1, z2))
            r1, r2 = p.reconstruct()
            tol = np.spacing(p.radius)
            assert abs(r1 - z1) <= tol
            assert abs(r2 - z2) <= tol
            big, rbig = (z1, r1) if z1 >= z2 else (z2, r2)
            if big > 0:
                assert abs(rbig - big) <= 2 * np.spacing(big)


class TestGpolarAxes:
    def test_first_larger(self):
        p = gpolar_axes((3.0, 1.0))
        assert (p.radius, p.theta, p.which_larger) == (1.0, 3.0, "first")

    def test_tie(self):
        p = gpolar_axes((4.0, 4.0))
        assert (p.radius, p.theta, p.which_larger) == (4.0, 1.0, "tie")

    def test_second_larger(self):
        p = gpolar_axes((1.0, 7.0))
        assert (p.radius, p.theta, p.which_larger) == (1.0, 7.0, "second")

    @pytest.mark.parametrize("pair", [(0.0, 1.0), (1.0, 0.0), (0.0, 0.0), (-2.0, 3.0)])
    def test_off_interior_rejected(self, pair):
        with pytest.raises(DomainError):
            gpolar_axes(pair)

    def test_reconstruct_exact_when_min_divides_max(self):
        # theta = max/min is exact whenever min divides max, so integer
        # points with a divisible coordinate pair round-trip exactly;
        # this covers every tie and every pair with a unit coordinate.
        rng = np.random.default_rng(3)
        for _ in range(500):
            lo = int(rng.integers(1, 1000))
            theta = int(rng.integers(1, 1000))
            hi = lo * theta
            for pair in ((float(hi), float(lo)), (float(lo), float(hi))):
                p = gpolar_axes(pair)
                assert p.reconstruct() == pair

    def test_reconstruct_error_within_one_ulp_per_coordinate(self):
        # The min coordinate is carried through exactly; the larger one
        # is fl(fl(hi/lo)*lo), which is within 1 ulp of hi.
        rng = np.random.default_rng(4)
        for _ in range(2000):
            z1 = float(rng.integers(1, 10**6))
            z2 = float(rng.integers(1, 10**6))
            p = gpolar_axes((z1, z2))
            r1, r2 = p.reconstruct()
            lo_recon = r1 if z1 <= z2 else r2
            lo = min(z1, z2)
            assert lo_recon == lo
            for orig, recon in ((z1, r1), (z2, r2)):
                assert abs(recon - orig) <= np.spacing(orig)

    def test_batch_matches_scalar(self):
        z1 = np.array([3.0, 4.0, 1.0, 2.5, 7.0])
        z2 = np.array([1.0, 4.0, 7.0, 2.5, 0.5])
        radius, theta, which = gpolar_axes_batch(z1, z2)
        code = {"first": 1, "tie": 0, "second": -1}
        for i in range(z1.size):
            p = gpolar_axes((z1[i], z2[i]))
            assert radius[i] == p.radius
            assert theta[i] == p.theta
            assert which[i] == code[p.which_larger]

    def test_batch_rejects_zero_coordinate(self):
        with pytest.raises(DomainError):
            gpolar_axes_batch(np.array([1.0, 0.0]), np.array([1.0, 2.0]))


class TestRankTransform:
    def test_sorted_data(self):
        assert_array_equal(rank_transform(np.array([10.0, 20.0, 30.0])), [1, 2, 3])

    def test_unsorted_data(self):
        assert_array_equal(rank_transform(np.array([30.0, 10.0, 20.0])), [3, 1, 2])

    def test_ties_take_max_rank(self):
        assert_array_equal(rank_transform(np.array([5.0, 5.0, 1.0])), [3, 3, 1])

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(5)
        x = rng.uniform(size=200)
        perm = rng.permutation(200)
        assert_array_equal(rank_transform(x[perm]), rank_transform(x)[perm])

    def test_strictly_increasing_transform_invariance(self):
        rng = np.random.default_rng(6)
        x = rng.uniform(0.1, 5.0, size=200)
        for f in (np.exp, np.log, lambda v: v**3, lambda v: 2.0 * v + 1.0):
            assert_array_equal(rank_transform(f(x)), rank_transform(x))

    def test_pareto_standardize_formula(self):
        # rank r out of n maps to (n+1)/(n+1-r), a unit-Pareto quantile.
        x = np.array([10.0, 20.0, 30.0])
        assert_allclose(pareto_standardize(x), [4 / 3, 2.0, 4.0], rtol=1e-15)

    def test_pareto_standardize_with_ties(self):
        x = np.array([5.0, 5.0, 1.0])
        assert_allclose(pareto_standardize(x), [4.0, 4.0, 4 / 3], rtol=1e-15)


class TestConcomitantTable:
    def test_basic_example(self):
        t = concomitant_table(np.array([3.0, 1.0, 2.0]), np.array([30.0, 10.0, 20.0]))
        assert_array_equal(t.xi_desc, [3.0, 2.0, 1.0])
        assert_array_equal(t.eta_star, [30.0, 20.0, 10.0])
        assert_array_equal(t.ranks_for_k(3), [3, 2, 1])

    def test_tied_concomitants_share_max_rank(self):
        t = concomitant_table(np.array([1.0, 2.0]), np.array([7.0, 7.0]))
        assert_array_equal(t.ranks_for_k(2), [2, 2])

    def test_single_point(self):
        t = concomitant_table(np.array([4.0]), np.array([9.0]))
        assert_array_equal(t.ranks_for_k(1), [1])

    def test_tied_xi_break_by_position(self):
        t = concomitant_table(np.array([2.0, 2.0, 1.0]), np.array([5.0, 6.0, 7.0]))
        assert_array_equal(t.eta_star, [5.0, 6.0, 7.0])

    def test_ranks_without_ties_form_a_permutation(self):
        rng = np.random.default_rng(7)
        for _ in range(50):
            n = int(rng.integers(2, 40))
            xi = rng.uniform(size=n)
            eta = rng.uniform(size=n)
            t = concomitant_table(xi, eta)
            k = int(rng.integers(1, n + 1))
            assert sorted(t.ranks_for_k(k)) == list(range(1, k + 1))

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(Exception):
            concomitant_table(np.array([1.0, 2.0]), np.array([1.0]))
