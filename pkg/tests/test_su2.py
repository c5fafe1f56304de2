import math

import numpy as np
import pytest

from qsynth.rings import ZRoot2
from qsynth.su2 import (
    IDENTITY,
    QuaternionPoint,
    UnitaryChannel,
    channel_from_point,
    compose,
    diamond_distance,
    format_channel,
    haar_sample,
    inverse,
    parse_channel,
    rz,
)

X_CHANNEL = UnitaryChannel([0, 0, 0, 1])
Y_CHANNEL = UnitaryChannel([0, 0, 1, 0])
Z_CHANNEL = UnitaryChannel([0, 1, 0, 0])


class TestDiamondDistance:
    def test_self_distance_zero(self, rng):
        for _ in range(20):
            u = haar_sample(rng)
            assert diamond_distance(u, u) == 0.0

    def test_identity_to_x_is_one(self):
        assert diamond_distance(IDENTITY, X_CHANNEL) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("theta", [0.1, 0.5, 2.0])
    def test_rz_closed_form(self, theta):
        # tr(Rz(θ)) = 2cos(θ/2), so d = √(1 − cos²) = |sin(θ/2)|
        assert diamond_distance(IDENTITY, rz(theta)) == pytest.approx(
            abs(math.sin(theta / 2)), abs=1e-12
        )

    def test_metric_axioms(self, rng):
        for _ in range(500):
            u, v, w = (haar_sample(rng) for _ in range(3))
            duv, dvu = diamond_distance(u, v), diamond_distance(v, u)
            assert duv == dvu
            assert duv <= diamond_distance(u, w) + diamond_distance(w, v) + 1e-12
            assert 0.0 <= duv <= 1.0

    def test_trace_quaternion_equivalence(self, rng):
        for _ in range(100):
            u, v = haar_sample(rng), haar_sample(rng)
            tr = np.trace(u.matrix().conj().T @ v.matrix())
            assert abs(abs(tr) / 2 - abs(float(np.dot(u.q, v.q)))) < 1e-12

    def test_bi_invariance(self, rng):
        for _ in range(100):
            u, v, w = (haar_sample(rng) for _ in range(3))
            d = diamond_distance(u, v)
            assert diamond_distance(compose(w, u), compose(w, v)) == pytest.approx(d, abs=1e-12)
            assert diamond_distance(compose(u, w), compose(v, w)) == pytest.approx(d, abs=1e-12)


class TestGroupOps:
    def test_inverse_composes_to_identity(self, rng):
        for _ in range(50):
            u = haar_sample(rng)
            assert np.allclose(compose(u, inverse(u)).q, IDENTITY.q, atol=1e-12)

    def test_compose_matches_matrix_product(self, rng):
        for _ in range(50):
            u, v = haar_sample(rng), haar_sample(rng)
            prod = u.matrix() @ v.matrix()
            w = compose(u, v)
            # compare projectively via the trace overlap
            tr = np.trace(prod.conj().T @ w.matrix())
            assert abs(abs(tr) / 2 - 1.0) < 1e-12

    def test_x_times_z_is_y(self):
        assert compose(X_CHANNEL, Z_CHANNEL) == Y_CHANNEL


class TestHaar:
    def test_reproducible(self):
        a = haar_sample(np.random.default_rng(42))
        b = haar_sample(np.random.default_rng(42))
        assert a == b

    def test_first_moment(self):
        rng = np.random.default_rng(7)
        total = 0.0
        n = 10**5
        for _ in range(n):
            total += haar_sample(rng).q[0] ** 2
        assert abs(total / n - 0.25) < 0.01

    def test_canonical(self, rng):
        for _ in range(100):
            assert haar_sample(rng).is_canonical()


class TestQuaternionPoints:
    def test_identity_point(self):
        p = QuaternionPoint((1, 0, 0, 0), 1)
        assert channel_from_point(p) == IDENTITY

    def test_all_ones(self):
        p = QuaternionPoint((1, 1, 1, 1), 4)
        assert np.allclose(channel_from_point(p).q, [0.5, 0.5, 0.5, 0.5])

    def test_one_two(self):
        p = QuaternionPoint((1, 2, 0, 0), 5)
        q = channel_from_point(p).q
        assert abs(float(np.dot(q, q)) - 1.0) < 1e-15
        assert np.allclose(q, [1 / math.sqrt(5), 2 / math.sqrt(5), 0, 0])

    def test_sphere_equation_enforced(self):
        with pytest.raises(ValueError):
            QuaternionPoint((1, 2, 0, 0), 6)

    def test_conjugate_embedding_checked(self):
        # Σc² = 2+2√2 is not totally positive-defined sphere for these coords
        with pytest.raises(ValueError):
            QuaternionPoint(
                (ZRoot2(1, 1), ZRoot2(0), ZRoot2(0), ZRoot2(0)), ZRoot2(1, 1)
            )

    def test_zroot2_point(self):
        p = QuaternionPoint((ZRoot2(0, 1), 0, 0, 0), 2)
        assert diamond_distance(channel_from_point(p), IDENTITY) < 1e-15


class TestRz:
    def test_rz_zero_is_identity(self):
        assert rz(0) == IDENTITY

    def test_rz_pi_is_z(self):
        assert diamond_distance(rz(math.pi), Z_CHANNEL) < 1e-15

    @pytest.mark.parametrize("theta", [0.3, 1.0, 2.5])
    def test_distance_to_identity(self, theta):
        assert diamond_distance(rz(theta), IDENTITY) == pytest.approx(
            abs(math.sin(theta / 2)), abs=1e-12
        )


class TestCodec:
    def test_roundtrip(self, rng):
        for _ in range(50):
            u = haar_sample(rng)
            assert parse_channel(format_channel(u)) == u

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            parse_channel("q:(1,0,0)")
        with pytest.raises(ValueError):
            parse_channel("1,0,0,0")
