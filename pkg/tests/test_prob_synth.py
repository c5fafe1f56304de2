import math

import numpy as np
import pytest

from qsynth.approx import best_at_level, gcount_approx
from qsynth.gates import V5_SET
from qsynth.prob_synth import (
    MixedChannel,
    diamond_mixed,
    optimize_mixture,
    prob_gcount,
)
from qsynth.su2 import UnitaryChannel, diamond_distance, haar_sample, rz


class TestMixedChannel:
    def test_weights_must_sum_to_one(self):
        u = rz(0.1)
        with pytest.raises(ValueError):
            MixedChannel(((0.5, u),))

    def test_nonempty(self):
        with pytest.raises(ValueError):
            MixedChannel(())


class TestDiamondMixed:
    def test_singleton_matches_closed_form(self, rng):
        for _ in range(25):
            u, v = haar_sample(rng), haar_sample(rng)
            val = diamond_mixed(u, MixedChannel.point_mass(v))
            assert abs(val - diamond_distance(u, v)) <= 1e-7

    def test_self_mixture_zero(self, rng):
        u = haar_sample(rng)
        assert diamond_mixed(u, MixedChannel.point_mass(u)) <= 1e-7

    def test_two_component_stability(self):
        theta = 0.2
        u = rz(theta / 2)
        mix = MixedChannel(((0.5, rz(0.0)), (0.5, rz(theta))))
        a = diamond_mixed(u, mix)
        b = diamond_mixed(u, mix, starts=16)
        assert abs(a - b) <= 1e-8
        # mixing beats both endpoints (quadratic error suppression)
        assert a < diamond_distance(u, rz(0.0)) ** 2 * 1.5 + 1e-7

    def test_tol_floor(self):
        with pytest.raises(ValueError):
            diamond_mixed(rz(0.1), MixedChannel.point_mass(rz(0.2)), tol=1e-12)


class TestOptimizeMixture:
    def test_single_candidate_point_mass(self, rng):
        u = haar_sample(rng)
        w, val = optimize_mixture(u, [u])
        assert w[0] == pytest.approx(1.0, abs=1e-9)
        assert val <= 1e-7

    def test_far_candidates_lower_bound(self, rng):
        # all candidates farther than ε ⟹ value > ε² − tol (Lemma lower bound)
        u = rz(0.0)
        eps = 0.3
        cands = [rz(1.2), rz(-1.4), rz(2.0)]
        assert all(diamond_distance(u, c) > eps for c in cands)
        _, val = optimize_mixture(u, cands)
        assert val > eps**2 - 1e-6

    def test_rz_pair_against_grid_oracle(self):
        u = rz(0.1)
        cands = [rz(0.0), rz(0.25)]
        w, val = optimize_mixture(u, cands)
        d1 = diamond_distance(u, cands[0])
        d2 = diamond_distance(u, cands[1])
        assert val < min(d1, d2)  # mixing strictly beats every point mass
        assert val >= min(d1, d2) ** 2 - 1e-6
        # for colinear rotations the optimum is the product of the distances
        assert val == pytest.approx(d1 * d2, abs=1e-5)
        # dense grid over the 1-simplex as the independent oracle
        grid = np.linspace(0.0, 1.0, 161)
        best = min(
            diamond_mixed(u, MixedChannel(((float(l), cands[0]), (1 - float(l), cands[1]))))
            for l in grid
        )
        assert val <= best + 1e-6
        assert best <= val + 1e-4  # grid resolution slack

    def test_sandwich_on_random_instances(self, rng):
        for _ in range(5):
            u = haar_sample(rng)
            cands = [haar_sample(rng) for _ in range(4)]
            _, val = optimize_mixture(u, cands)
            dmin = min(diamond_distance(u, c) for c in cands)
            assert dmin**2 - 1e-6 <= val <= dmin + 1e-6

    def test_convexity_along_segments(self, rng):
        # second difference of the value along a random simplex segment ≥ −tol
        u = haar_sample(rng)
        cands = [haar_sample(rng) for _ in range(3)]
        p = np.array([0.6, 0.3, 0.1])
        q = np.array([0.1, 0.2, 0.7])

        def value(lam):
            w = (1 - lam) * p + lam * q
            mix = MixedChannel(tuple(zip(w.tolist(), cands)))
            return diamond_mixed(u, mix)

        vals = [value(l) for l in (0.25, 0.5, 0.75)]
        assert vals[0] + vals[2] - 2 * vals[1] >= -1e-6


class TestSupportRestriction:
    def test_far_candidates_do_not_help(self, rng):
        # adding candidates outside the 2ε-ball leaves the optimum unchanged
        u = haar_sample(rng)
        near = [haar_sample(rng) for _ in range(12)]
        near = [c for c in near if diamond_distance(u, c) <= 0.9]
        if len(near) < 2:
            near = [rz(0.3), rz(-0.3)]
        # build a covering-ish near set around u by composing small rotations
        from qsynth.su2 import compose

        near = [compose(u, rz(a)) for a in (-0.15, -0.05, 0.05, 0.15)] + [
            compose(u, UnitaryChannel([math.cos(0.06), 0, math.sin(0.06), 0]))
        ]
        far = [c for c in (haar_sample(rng) for _ in range(6))
               if diamond_distance(u, c) > 0.5]
        _, v_near = optimize_mixture(u, near)
        _, v_all = optimize_mixture(u, near + list(far))
        assert abs(v_near - v_all) <= 1e-6


class TestProbGcount:
    def test_prob_not_worse_than_det(self, rng):
        for _ in range(3):
            u = haar_sample(rng)
            det, _ = gcount_approx(u, V5_SET, 0.15, 8)
            prob = prob_gcount(u, V5_SET, 0.15, 8)
            assert prob <= det

    def test_transfer_lower_bound(self, rng):
        # if best_at_level(u, t−1) > ε then prob_gcount(u, ε²) ≥ t
        u = haar_sample(rng)
        eps = 0.2
        t_prob = prob_gcount(u, V5_SET, eps * eps, 8)
        if t_prob >= 1:
            d_below, _ = best_at_level(u, V5_SET, t_prob - 1)
            # mixtures of strictly-farther channels cannot beat (min d)²;
            # if the level below had a channel within ε the mixture would
            # already reach ε² there
            assert d_below > eps - 1e-9 or d_below**2 <= eps * eps + 1e-6

    def test_exact_hit_returns_zero(self):
        from qsynth.gates import clifford_channels

        ch = clifford_channels()[5]
        assert prob_gcount(ch, V5_SET, 0.01, 4) == 0
