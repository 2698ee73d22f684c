import math

import numpy as np
import pytest

from _oracles import geometric_theta
from triflow.bath_oracle import (
    DEFAULT_CONFIG_CAP,
    TruncatedBath,
    evolve_exact,
    exact_report,
    truncated_theta,
)
from triflow.correlations import bell_diagonal
from triflow.benchmarks import werner_like
from triflow.dephasing import BathSpec, coupling_profile, theta_complex
from triflow.linalg import DensityOperator

LN2 = math.log(2.0)


def pair_bath(n_modes=2, beta=1.0, delta_width=20.0, **kwargs):
    return BathSpec(
        n_modes=n_modes, beta=beta, g0=0.1, delta_width=delta_width,
        g_a=1.0, g_b=2.0, **kwargs,
    )


def lopsided_pair():
    # diagonal marginals but unequal populations and a partial coherence
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = 0.9
    mat[3, 3] = 0.1
    mat[0, 3] = mat[3, 0] = 0.25
    return DensityOperator(matrix=mat, dims=(2, 2))


class TestTruncation:
    def test_level_count_tracks_temperature(self):
        assert TruncatedBath(bath=pair_bath(beta=1.0)).n_max == 27
        assert TruncatedBath(bath=pair_bath(beta=0.1)).n_max == 276

    def test_level_count_from_loose_tolerance(self):
        tb = TruncatedBath(bath=pair_bath(beta=1.0), eps_trunc=2e-5)
        assert tb.n_max == 10

    def test_tail_equal_to_tolerance_adds_a_level(self):
        # the tail must fall strictly below eps_trunc, so exact equality bumps
        tb = TruncatedBath(bath=pair_bath(beta=1.0), eps_trunc=math.exp(-11.0))
        assert tb.n_max == 11

    def test_minimum_levels(self):
        # very cold bath still keeps a handful of levels
        tb = TruncatedBath(bath=pair_bath(beta=50.0))
        assert tb.n_max == 3

    def test_tail_weight_is_below_tolerance(self):
        tb = TruncatedBath(bath=pair_bath(beta=0.7), eps_trunc=1e-9)
        assert math.exp(-0.7 * (tb.n_max + 1)) < 1e-9

    def test_rejects_bad_tolerance(self):
        for eps in (0.0, 1.0, -1e-3):
            with pytest.raises(ValueError, match="eps_trunc"):
                TruncatedBath(bath=pair_bath(), eps_trunc=eps)

    def test_mode_weights_are_normalized_geometric(self):
        tb = TruncatedBath(bath=pair_bath(beta=1.0))
        w = tb.mode_weights
        assert math.isclose(float(w.sum()), 1.0, rel_tol=0, abs_tol=1e-15)
        ratios = w[1:] / w[:-1]
        assert np.allclose(ratios, math.exp(-1.0), rtol=1e-12)

    def test_configuration_count(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=3, beta=1.0))
        assert tb.n_configs == 28**3


class TestTruncatedTheta:
    def test_matches_closed_form_reference_point(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=2, beta=1.0, delta_width=20.0))
        for sign in (-1, +1):
            exact = theta_complex(tb.bath, 5.0, sign)
            assert abs(truncated_theta(tb, 5.0, sign) - exact) < 1e-10

    def test_matches_geometric_series_oracle(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=2, beta=1.0), eps_trunc=math.exp(-11.0))
        for t in (0.7, 5.0, 31.0):
            for sign in (-1, +1):
                expected = geometric_theta(
                    tb.bath.beta_energy,
                    coupling_profile(tb.bath),
                    tb.bath.g_a + sign * tb.bath.g_b,
                    t,
                    tb.n_max,
                )
                assert abs(truncated_theta(tb, t, sign) - expected) < 1e-12

    def test_random_draws_stay_within_tolerance(self, rng):
        for _ in range(15):
            bath = BathSpec(
                n_modes=int(rng.integers(1, 11)),
                beta=float(rng.uniform(0.5, 5.0)),
                g0=float(rng.uniform(0.02, 0.2)),
                delta_width=float(rng.uniform(1.0, 20.0)),
                g_a=float(rng.uniform(0.2, 2.0)),
                g_b=float(rng.uniform(0.2, 2.0)),
            )
            tb = TruncatedBath(bath=bath)
            t = float(rng.uniform(0.0, 10.0))
            sign = int(rng.choice([-1, 1]))
            assert abs(truncated_theta(tb, t, sign) - theta_complex(bath, t, sign)) < 1e-10


class TestEvolveExact:
    def test_rejects_non_pair_input(self):
        tb = TruncatedBath(bath=pair_bath())
        single = DensityOperator(matrix=np.eye(2) / 2, dims=(2,))
        with pytest.raises(ValueError, match="qubit pair"):
            evolve_exact(tb, single, 1.0)

    def test_rejects_oversized_configuration_space(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=10, beta=1.0))
        assert tb.n_configs > DEFAULT_CONFIG_CAP
        with pytest.raises(ValueError, match="exceed cap"):
            evolve_exact(tb, bell_diagonal(werner_like(-0.8)), 1.0)

    def test_time_zero_reproduces_input(self):
        tb = TruncatedBath(bath=pair_bath())
        rho0 = bell_diagonal(werner_like(-0.8))
        state = evolve_exact(tb, rho0, 0.0)
        assert np.allclose(state.reduced_pair().matrix, rho0.matrix, atol=1e-12)
        assert math.isclose(float(state.weights.sum()), 1.0, rel_tol=0, abs_tol=1e-12)

    def test_thermal_weights_factorize(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=2), eps_trunc=1e-4)
        state = evolve_exact(tb, bell_diagonal(werner_like(-0.8)), 0.3)
        expected = np.multiply.outer(tb.mode_weights, tb.mode_weights).ravel()
        assert np.allclose(state.weights, expected, atol=1e-15)

    def test_maximally_mixed_pair_is_stationary(self):
        tb = TruncatedBath(bath=pair_bath())
        rho0 = DensityOperator(matrix=np.eye(4) / 4, dims=(2, 2))
        state = evolve_exact(tb, rho0, 7.3)
        assert np.allclose(state.reduced_pair().matrix, np.eye(4) / 4, atol=1e-14)

    def test_reduced_pair_matches_coherence_damping(self):
        # the surviving pair state is the input with its antidiagonal
        # coherences multiplied by the truncated thermal averages
        tb = TruncatedBath(bath=pair_bath(n_modes=2, beta=1.0), eps_trunc=math.exp(-11.0))
        rho0 = bell_diagonal(werner_like(-0.8))
        t = 5.0
        expected = rho0.matrix.copy()
        expected[0, 3] *= truncated_theta(tb, t, +1)
        expected[3, 0] = np.conj(expected[0, 3])
        expected[1, 2] *= truncated_theta(tb, t, -1)
        expected[2, 1] = np.conj(expected[1, 2])
        reduced = evolve_exact(tb, rho0, t).reduced_pair()
        assert np.max(np.abs(reduced.matrix - expected)) < 1e-10

    def test_reduced_pair_matches_exact_theta_when_truncation_is_tight(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=2, beta=1.0))
        rho0 = bell_diagonal(werner_like(-0.8))
        t = 5.0
        expected = rho0.matrix.copy()
        expected[0, 3] *= theta_complex(tb.bath, t, +1)
        expected[3, 0] = np.conj(expected[0, 3])
        expected[1, 2] *= theta_complex(tb.bath, t, -1)
        expected[2, 1] = np.conj(expected[1, 2])
        reduced = evolve_exact(tb, rho0, t).reduced_pair()
        assert np.max(np.abs(reduced.matrix - expected)) < 1e-10


class TestExactReport:
    def test_werner_flow_identities(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=2, beta=1.0))
        rho0 = bell_diagonal(werner_like(-0.8))
        rep0 = exact_report(tb, rho0, 0.0)
        for t in (0.5, 3.0, 12.0):
            rep = exact_report(tb, rho0, t)
            assert abs(rep.I_AC) < 1e-9
            assert abs(rep.I_BC) < 1e-9
            assert abs(rep.I3 - (rep0.I_AB - rep.I_AB)) < 1e-9
            assert abs(rep.I_ABc - rep.I3) < 1e-9
            assert abs(rep.info_total - rep0.info_total) < 1e-9
            assert rep.interaction >= -1e-9
            assert rep.monogamous

    def test_bath_entropy_is_static(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=2, beta=1.0))
        rho0 = bell_diagonal(werner_like(-0.8))
        expected = exact_report(tb, rho0, 0.0).S_C
        for t in (1.0, 8.0):
            assert abs(exact_report(tb, rho0, t).S_C - expected) < 1e-12

    def test_lopsided_input_keeps_pair_bath_splits_clean(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=2, beta=1.0))
        rho0 = lopsided_pair()
        rep0 = exact_report(tb, rho0, 0.0)
        for t in (0.8, 4.0):
            rep = exact_report(tb, rho0, t)
            # diagonal single-qubit marginals mean no pairwise leak to the bath
            assert abs(rep.I_AC) < 1e-9
            assert abs(rep.I_BC) < 1e-9
            assert abs(rep.interaction - (rep0.I_AB - rep.I_AB)) < 1e-9
            assert rep.I_AB <= rep0.I_AB + 1e-9

    def test_coherent_marginal_leaks_into_the_bath(self):
        # a qubit with coherence in the coupling basis does correlate with
        # the bath, so the pairwise split identities need diagonal marginals
        tb = TruncatedBath(bath=pair_bath(n_modes=2, beta=1.0))
        plus = np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex)
        ground = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
        rho0 = DensityOperator(matrix=np.kron(plus, ground), dims=(2, 2))
        rep = exact_report(tb, rho0, 5.0)
        assert rep.I_AC > 1e-3

    def test_purity_information_uses_full_dimension(self):
        tb = TruncatedBath(bath=pair_bath(n_modes=2, beta=1.0), eps_trunc=1e-4)
        rho0 = bell_diagonal(werner_like(-0.8))
        rep = exact_report(tb, rho0, 0.0)
        dim = 4 * tb.n_configs
        assert math.isclose(rep.info_total, math.log(dim) - rep.S, rel_tol=1e-12)
