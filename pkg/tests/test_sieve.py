"""Large-sieve layer: the smoothed test function family f_sigma, its
Fourier data, the admissible frequency window, and the mean-value
inequality on random Dirichlet polynomials."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from reslab import sieve


class TestDirichletPolynomial:
    def test_from_pairs_sorts_and_merges(self):
        P = sieve.DirichletPolynomial.from_pairs([(5, 1.0), (2, 2.0 + 1j)])
        assert [n for n, _ in P.terms] == [2, 5]

    def test_rejects_duplicates_and_bad_n(self):
        with pytest.raises(ValueError):
            sieve.DirichletPolynomial(((2, 1.0), (2, 1.0)))
        with pytest.raises(ValueError):
            sieve.DirichletPolynomial(((0, 1.0),))

    def test_evaluation(self):
        P = sieve.DirichletPolynomial.from_pairs([(2, 1.0), (3, 2.0)])
        t = 0.7
        expect = math.cos(t * math.log(2)) + 2 * math.cos(t * math.log(3)) \
            - 1j * (math.sin(t * math.log(2)) + 2 * math.sin(t * math.log(3)))
        assert P(t) == pytest.approx(expect, rel=1e-13)


class TestLhsIntegral:
    def test_single_term_is_diagonal(self):
        P = sieve.DirichletPolynomial.from_pairs([(7, 3.0 - 4.0j)])
        assert sieve.lhs_integral(P, 0.02) == pytest.approx(
            2 * 0.02 * 25.0, rel=1e-12)

    def test_closed_form_vs_quadrature(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            P = sieve.random_polynomial(rng, max_len=12)
            closed = sieve.lhs_integral(P, 0.02296120471316426)
            direct, _ = quad(lambda t: abs(P(t)) ** 2,
                             -0.02296120471316426, 0.02296120471316426,
                             epsabs=1e-12, limit=200)
            assert closed == pytest.approx(direct, rel=1e-9)

    def test_rejects_nonpositive_alpha(self):
        P = sieve.DirichletPolynomial.from_pairs([(2, 1.0)])
        with pytest.raises(ValueError):
            sieve.lhs_integral(P, 0.0)


class TestRhsIntegral:
    def test_single_term_oracle(self):
        # one term: int |psi_sigma(n/y)|^2 dy/y = int_1^4 psi(u)^2 u^{2 sigma} du/u
        for sigma in sieve.SIGMA_GRID:
            P = sieve.DirichletPolynomial.from_pairs([(11, 2.0)])
            got = sieve.rhs_integral(P, sigma)
            want, _ = quad(
                lambda u: float(sieve.smoothing.psi(u)) ** 2
                * u ** (2 * sigma) / u, 1.0, 4.0, epsabs=1e-13, limit=200)
            assert got == pytest.approx(4.0 * want, rel=1e-9)

    def test_scale_invariance_at_sigma_zero(self):
        # at sigma = 0 a single term's mass is independent of n
        a = sieve.rhs_integral(
            sieve.DirichletPolynomial.from_pairs([(3, 1.0)]), 0.0)
        b = sieve.rhs_integral(
            sieve.DirichletPolynomial.from_pairs([(3000, 1.0)]), 0.0)
        assert a == pytest.approx(b, rel=1e-9)

    def test_rejects_sigma_out_of_range(self):
        P = sieve.DirichletPolynomial.from_pairs([(2, 1.0)])
        with pytest.raises(ValueError):
            sieve.rhs_integral(P, 0.5)


class TestTestFunctionFamily:
    def test_support(self):
        for sigma in (0.0, 0.25, -0.45):
            assert sieve.f_sigma(-sieve.SUPPORT_C - 0.01, sigma) == 0.0
            assert sieve.f_sigma(0.01, sigma) == 0.0
            # psi <= 0, so f_sigma is strictly negative inside the support
            assert sieve.f_sigma(-0.5 * sieve.SUPPORT_C, sigma) < 0.0

    def test_matches_weight_on_dyadic_window(self):
        # f_sigma(u) = psi_sigma(e^{-u}): spot-check against the scaled psi
        for sigma in (0.0, 0.25):
            for u in (-0.3, -0.9, -1.2):
                x = math.exp(-u)
                assert sieve.f_sigma(u, sigma) == pytest.approx(
                    float(sieve.smoothing.psi(x)) * x**sigma, rel=1e-13)

    def test_fhat_vs_quadrature_oracle(self):
        for sigma in (0.0, 0.25, -0.45):
            for xi in (0.0, 0.05, 0.3, 1.7):
                re, _ = quad(lambda u: sieve.f_sigma(u, sigma)
                             * math.cos(2 * math.pi * xi * u),
                             -sieve.SUPPORT_C, 0.0, epsabs=1e-13, limit=200)
                im, _ = quad(lambda u: -sieve.f_sigma(u, sigma)
                             * math.sin(2 * math.pi * xi * u),
                             -sieve.SUPPORT_C, 0.0, epsabs=1e-13, limit=200)
                got = complex(sieve.fhat_sigma(xi, sigma))
                assert got == pytest.approx(complex(re, im), abs=1e-12)

    def test_fhat_vectorized_matches_scalar(self):
        xi = np.array([-0.4, 0.0, 0.9])
        vec = sieve.fhat_sigma(xi, 0.25)
        for x, v in zip(xi, vec):
            assert complex(v) == pytest.approx(
                complex(sieve.fhat_sigma(float(x), 0.25)), rel=1e-13)


class TestAdmissibleAlpha:
    def test_frozen_values(self):
        rep = sieve.admissible_alpha()
        assert rep.alpha == pytest.approx(
            1.0 / (10 * math.pi * math.log(4.0)), rel=1e-15)
        assert rep.alpha == pytest.approx(0.02296120471316426, rel=1e-15)
        assert rep.inf_fhat_sq == pytest.approx(0.23768637506838, rel=1e-10)
        assert rep.constant == pytest.approx(
            2 * math.pi / rep.inf_fhat_sq, rel=1e-14)
        assert rep.support_C == sieve.SUPPORT_C
        assert rep.sigma_grid == sieve.SIGMA_GRID

    def test_window_times_support_below_threshold(self):
        rep = sieve.admissible_alpha()
        # the admissibility condition: 2 pi alpha C < 1/5 keeps the
        # frequency window well inside the first zero of f_hat
        assert 2 * math.pi * rep.alpha * rep.support_C == pytest.approx(
            0.2, rel=1e-14)
        assert rep.inf_fhat_sq > 0.0


class TestAutocorrelation:
    def test_h_is_even(self):
        for x in (0.1, 0.5, 1.0):
            assert sieve.autocorrelation_sigma(x, 0.25) == pytest.approx(
                sieve.autocorrelation_sigma(-x, 0.25), rel=1e-10)

    def test_h_vanishes_off_support(self):
        assert sieve.autocorrelation_sigma(sieve.SUPPORT_C + 0.01, 0.0) == 0.0
        assert sieve.autocorrelation_sigma(-sieve.SUPPORT_C - 0.01, 0.0) == 0.0

    @pytest.mark.parametrize("sigma", (0.0, 0.25, -0.45))
    def test_transform_identity(self, sigma):
        rep = sieve.autocorrelation_identity_check(sigma)
        assert rep.max_gap < 1e-10
        assert rep.parseval_gap < 1e-12
        assert rep.h_at_zero > 0.0


class TestInequality:
    def test_random_polynomial_shape(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            P = sieve.random_polynomial(rng)
            ns = [n for n, _ in P.terms]
            assert all(2 <= n <= 10_000 for n in ns)
            assert len(ns) == len(set(ns)) <= 50
            assert all(abs(c) <= 1.0 + 1e-12 for _, c in P.terms)

    def test_seeded_trials_frozen(self):
        rep = sieve.sieve_inequality_check(20, 12345, sigma=0.25)
        assert rep.worst_ratio <= 1.0
        assert rep.worst_ratio == pytest.approx(
            0.005014467628820947, rel=1e-10)
        assert rep.to_dict()["seed"] == 12345

    @pytest.mark.parametrize("sigma", sieve.SIGMA_GRID)
    def test_holds_on_every_sigma(self, sigma):
        rep = sieve.sieve_inequality_check(5, 99, sigma=sigma)
        assert rep.worst_ratio <= 1.0
