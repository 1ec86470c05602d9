import math

import numpy as np
import pytest

import gme

from conftest import (
    apply_local_unitaries,
    partial_trace,
    random_pure_state,
    random_unitary_2x2,
    rng_for,
)


class TestOracleConfig:
    def test_defaults(self):
        cfg = gme.OracleConfig()
        assert cfg.restarts == 32 and cfg.max_iters == 500
        assert cfg.tol == 1e-12 and cfg.seed == 42

    @pytest.mark.parametrize(
        "kwargs", [{"restarts": 0}, {"max_iters": 0}, {"tol": 0.0}, {"tol": -1.0}]
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(gme.ValidationError):
            gme.OracleConfig(**kwargs)


class TestPureOracle:
    def test_basis_product_state(self):
        amps = np.zeros(8)
        amps[0] = 1.0
        result = gme.gm_pure_oracle(gme.PureState(3, amps))
        assert result.G == pytest.approx(1.0, abs=1e-12)
        assert result.warning is None

    def test_random_product_state(self):
        rng = rng_for(4000)
        spinors = []
        for _ in range(4):
            z = rng.normal(size=2) + 1j * rng.normal(size=2)
            spinors.append(z / np.linalg.norm(z))
        amps = spinors[0]
        for s in spinors[1:]:
            amps = np.kron(amps, s)
        result = gme.gm_pure_oracle(gme.PureState(4, amps))
        assert result.G == pytest.approx(1.0, abs=1e-10)

    def test_w_state(self, w_dicke):
        result = gme.gm_pure_oracle(gme.dicke_to_dense(w_dicke))
        assert result.G_squared == pytest.approx(4.0 / 9.0, abs=1e-9)

    def test_ghz_state(self, ghz_dicke):
        result = gme.gm_pure_oracle(gme.dicke_to_dense(ghz_dicke))
        assert result.G_squared == pytest.approx(0.5, abs=1e-9)

    def test_closest_product_is_consistent(self, w_dicke):
        psi = gme.dicke_to_dense(w_dicke)
        result = gme.gm_pure_oracle(psi)
        # rebuild the product state from the reported Bloch vectors
        amps = np.array([1.0], dtype=complex)
        for bloch in result.closest_product:
            a, b, c = bloch.s
            polar = math.acos(np.clip(c, -1, 1))
            azimuth = math.atan2(b, a)
            amps = np.kron(
                amps,
                np.array(
                    [
                        math.cos(polar / 2),
                        np.exp(1j * azimuth) * math.sin(polar / 2),
                    ]
                ),
            )
        assert abs(np.vdot(amps, psi.amplitudes)) == pytest.approx(
            result.G, abs=1e-9
        )

    def test_deterministic(self):
        psi = random_pure_state(rng_for(4100), 3)
        cfg = gme.OracleConfig(seed=7)
        a = gme.gm_pure_oracle(psi, cfg)
        b = gme.gm_pure_oracle(psi, cfg)
        assert a.G == b.G
        assert all(
            np.array_equal(x.s, y.s)
            for x, y in zip(a.closest_product, b.closest_product)
        )

    @pytest.mark.parametrize("seed", range(4))
    def test_restart_monotonicity(self, seed):
        psi = random_pure_state(rng_for(4200 + seed), 3)
        few = gme.gm_pure_oracle(psi, gme.OracleConfig(restarts=4, seed=3))
        many = gme.gm_pure_oracle(psi, gme.OracleConfig(restarts=32, seed=3))
        assert many.G >= few.G - 1e-15

    @pytest.mark.parametrize("seed", range(6))
    def test_local_unitary_invariance(self, seed):
        rng = rng_for(4300 + seed)
        psi = random_pure_state(rng, 3)
        us = [random_unitary_2x2(rng) for _ in range(3)]
        rotated = gme.PureState(3, apply_local_unitaries(psi.amplitudes, us))
        a = gme.gm_pure_oracle(psi)
        b = gme.gm_pure_oracle(rotated)
        assert abs(a.G - b.G) <= 1e-8

    def test_non_convergence_warning(self):
        psi = random_pure_state(rng_for(4400), 3)
        result = gme.gm_pure_oracle(
            psi, gme.OracleConfig(restarts=2, max_iters=1, tol=1e-15)
        )
        assert result.warning is not None


class TestSymmetricOracle:
    def test_w_state(self, w_dicke):
        assert gme.gm_symmetric_oracle(w_dicke).G_squared == pytest.approx(
            4.0 / 9.0, abs=1e-10
        )

    @pytest.mark.parametrize("seed", range(5))
    def test_zero_phase_is_optimal_for_nonneg(self, seed):
        rng = rng_for(4500 + seed)
        n = int(rng.integers(2, 8))
        amps = np.abs(rng.normal(size=n + 1))
        st = gme.SymmetricDickeState(n, amps / np.linalg.norm(amps))
        brute = gme.gm_symmetric_oracle(st).G
        zero_phase = gme.gm_dicke_nonneg(st).G
        assert abs(brute - zero_phase) <= 1e-8

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_matches_pure_oracle(self, n):
        rng = rng_for(4600 + n)
        amps = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        st = gme.SymmetricDickeState(n, amps / np.linalg.norm(amps))
        sym = gme.gm_symmetric_oracle(st).G
        full = gme.gm_pure_oracle(gme.dicke_to_dense(st)).G
        assert abs(sym - full) <= 1e-7


class TestMixedOracle:
    def test_w_marginal(self):
        q = math.pi / 4
        rho = gme.rank2_to_matrix(gme.RankTwoCanonical(q, q, [0, 0, -1 / 3]))
        assert gme.g_mixed_oracle(rho) == pytest.approx(4.0 / 9.0, abs=1e-8)

    def test_maximally_mixed(self):
        assert gme.g_mixed_oracle(np.eye(4) / 4) == pytest.approx(0.25, abs=1e-10)

    def test_bell_state(self):
        psi = np.array([0, 1, 1, 0], dtype=complex) / math.sqrt(2)
        assert gme.g_mixed_oracle(np.outer(psi, psi.conj())) == pytest.approx(
            0.5, abs=1e-10
        )

    def test_rejects_bad_inputs(self):
        with pytest.raises(gme.ValidationError):
            gme.g_mixed_oracle(np.eye(4))  # trace 4
        with pytest.raises(gme.ValidationError):
            gme.g_mixed_oracle(np.diag([1.5, -0.5, 0.0, 0.0]))  # not PSD
        bad = np.eye(4, dtype=complex) / 4
        bad[0, 1] = 0.3
        with pytest.raises(gme.ValidationError):
            gme.g_mixed_oracle(bad)  # not Hermitian

    @pytest.mark.parametrize("seed", range(6))
    def test_consistency_triangle(self, seed):
        """Squared pure-state overlap equals the marginal overlap, every pair."""
        psi = random_pure_state(rng_for(4700 + seed), 3)
        squared = gme.gm_pure_oracle(psi).G_squared
        for traced in range(3):
            keep = tuple(i for i in range(3) if i != traced)
            rho = partial_trace(psi.amplitudes, 3, keep)
            assert abs(gme.g_mixed_oracle(rho) - squared) <= 1e-7
