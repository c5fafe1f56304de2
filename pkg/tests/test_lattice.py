import math

import numpy as np
import pytest

from conftest import four_square_oracle, root2_sphere_oracle

from qsynth import exact_synth as xs
from qsynth.gates import CLIFFORD_T_SET, V5_SET
from qsynth.lattice import (
    build_db,
    covering_radius,
    enumerate_sz,
    enumerate_szroot2,
    query_nearest,
    uncovered_fraction,
)
from qsynth.rings import ZRoot2
from qsynth.su2 import channel_from_point, haar_sample


class TestEnumerateSZ:
    @pytest.mark.parametrize("n,count", [(1, 8), (5, 48), (25, 248)])
    def test_known_counts(self, n, count):
        assert len(enumerate_sz(n)) == count

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 10, 24, 25, 30, 125])
    def test_oracle_equality(self, n):
        got = {tuple(c.a for c in p.coords) for p in enumerate_sz(n)}
        assert got == set(four_square_oracle(n))

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            enumerate_sz(0)


class TestEnumerateSZRoot2:
    def test_k0_eight_points(self):
        pts = enumerate_szroot2(0)
        assert len(pts) == 8
        for p in pts:
            assert all(c in (ZRoot2(0), ZRoot2(1), ZRoot2(-1)) for c in p.coords)

    def test_k1_contains_named_orbits(self):
        pts = {tuple((c.a, c.b) for c in p.coords) for p in enumerate_szroot2(1)}
        assert ((0, 1), (0, 0), (0, 0), (0, 0)) in pts  # (√2,0,0,0)
        assert ((1, 0), (1, 0), (0, 0), (0, 0)) in pts  # (1,1,0,0)

    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    def test_oracle_equality(self, k):
        got = {tuple((c.a, c.b) for c in p.coords) for p in enumerate_szroot2(k)}
        oracle = {
            tuple((c.a, c.b) for c in sol) for sol in root2_sphere_oracle(k)
        }
        assert got == oracle

    def test_sphere_equation_recheck(self):
        for p in enumerate_szroot2(2):
            total = ZRoot2(0)
            for c in p.coords:
                total = total + c * c
            assert total == ZRoot2(4)


class TestDatabase:
    def test_exact_member_query(self):
        db = build_db(V5_SET, 3)
        for p in db.level_points(2)[:20]:
            hit, d = query_nearest(db, channel_from_point(p), 3)
            assert d < 1e-12

    def test_query_matches_linear_scan(self, rng):
        db = build_db(V5_SET, 3)
        quats = db.quats_up_to(3)
        for _ in range(100):
            u = haar_sample(rng)
            _, d = query_nearest(db, u, 3)
            ips = np.abs(quats @ u.q)
            ip = min(1.0, float(np.max(ips)))
            assert d == pytest.approx(math.sqrt(max(0.0, 1 - ip * ip)), abs=1e-12)

    def test_t_db_sizes_increase(self):
        db = build_db(CLIFFORD_T_SET, 5)
        sizes = [len(l.points) for l in db.levels]
        assert all(sizes[i] < sizes[i + 1] for i in range(len(sizes) - 1))

    def test_channels_synthesizable_with_level_bound(self):
        db = build_db(V5_SET, 3)
        for k, lvl in enumerate(db.levels):
            assert lvl.g_bound == k
            for p in lvl.points[:10]:
                u = xs.recognize_v(tuple(c.a for c in p.coords))
                assert u is not None and xs.v_count(u) <= k
        tdb = build_db(CLIFFORD_T_SET, 3)
        for k, lvl in enumerate(tdb.levels):
            assert lvl.g_bound == 2 * k + 1
            for p in lvl.points[:10]:
                u = xs.recognize_t_ratio(list(p.coords))
                assert u is not None and xs.t_count(u) <= 2 * k + 1

    def test_budget_guard(self):
        with pytest.raises(MemoryError):
            build_db(CLIFFORD_T_SET, 40)


class TestCovering:
    def test_radius_vs_dense_oracle_k0(self):
        # level-0 V db = the four Pauli-frame channels; compare the MC
        # covering radius against a dense 10⁶-sample independent oracle
        db = build_db(V5_SET, 0)
        mc = covering_radius(db, 0, 4000, np.random.default_rng(123))
        quats = db.quats_up_to(0)
        dense_rng = np.random.default_rng(999)
        g = dense_rng.normal(size=(10**6, 4))
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        ips = np.clip(np.max(np.abs(g @ quats.T), axis=1), 0.0, 1.0)
        worst = float(np.max(np.sqrt(1.0 - ips * ips)))
        assert abs(mc - worst) < 0.02
        # the exact radius of the Pauli frame is attained at (1,1,1,1)/2
        assert worst == pytest.approx(math.sqrt(0.75), abs=0.005)

    def test_radius_decreases(self):
        db = build_db(V5_SET, 4)
        rng = np.random.default_rng(5)
        radii = [covering_radius(db, k, 3000, np.random.default_rng(5)) for k in range(1, 5)]
        assert all(radii[i] > radii[i + 1] for i in range(len(radii) - 1))

    def test_uncovered_fraction_bounds(self):
        db = build_db(V5_SET, 2)
        rng = np.random.default_rng(17)
        rad = covering_radius(db, 2, 2000, np.random.default_rng(17))
        frac_at_rad = uncovered_fraction(db, 2, rad, 2000, np.random.default_rng(17))
        assert frac_at_rad == 0.0
        frac_small = uncovered_fraction(db, 2, 0.01, 500, np.random.default_rng(17))
        assert 0.0 <= frac_small <= 1.0

    def test_per_seed_determinism(self):
        db = build_db(V5_SET, 2)
        a = covering_radius(db, 2, 500, np.random.default_rng(4))
        b = covering_radius(db, 2, 500, np.random.default_rng(4))
        assert a == b
