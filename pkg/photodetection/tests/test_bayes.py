import math

import numpy as np
from django.test import SimpleTestCase

from detectors.services import OUTCOMES, build_params, ideal_photon_counter, random_params
from photodetection.bayes import (
    HypothesisGrid, analytic_posterior, analytic_posterior_on_grid, likelihood,
    likelihood_sum_residual, posterior_density_at, posterior_update, pure_state,
    sequential_update,
)
from photodetection.channel import FieldChannel
from photodetection.exceptions import DegenerateDetector, ImpossibleOutcome, InvalidDimension
from photodetection.jaynes_cummings import JCParams, excitation_probabilities

HALF_PI = math.pi / 2


def channel(eps_g=0.9, eps_e=0.8, p1g=0.85, p1e=0.1, omega_tau=HALF_PI, field_dim=2):
    return FieldChannel(build_params(eps_g, eps_e, p1g, p1e), JCParams(omega_tau, field_dim))


class HypothesisGridTests(SimpleTestCase):

    def test_uniform_grid(self):
        grid = HypothesisGrid.uniform(181)
        self.assertAlmostEqual(grid.mass(), 1.0, places=12)
        self.assertAlmostEqual(grid.thetas[0], math.pi / 362, places=15)
        self.assertAlmostEqual(grid.thetas[-1], math.pi - math.pi / 362, places=14)
        self.assertAlmostEqual(grid.cell_width, math.pi / 181, places=15)

    def test_from_weights_normalises(self):
        grid = HypothesisGrid.from_weights(np.arange(1, 11))
        self.assertAlmostEqual(grid.mass(), 1.0, places=12)

    def test_rejects_unnormalised_density(self):
        with self.assertRaises(ValueError):
            HypothesisGrid(np.ones(10))

    def test_rejects_negative_density(self):
        density = np.full(4, 1 / math.pi)
        density[0], density[1] = -0.1, 1 / math.pi + 0.1
        with self.assertRaises(ValueError):
            HypothesisGrid(density)

    def test_rejects_empty_grid(self):
        with self.assertRaises(InvalidDimension):
            HypothesisGrid.uniform(0)


class LikelihoodTests(SimpleTestCase):

    def test_pure_state_endpoints(self):
        np.testing.assert_allclose(pure_state(0.0), [[1, 0], [0, 0]], atol=1e-15)
        np.testing.assert_allclose(pure_state(math.pi), [[0, 0], [0, 1]], atol=1e-15)
        np.testing.assert_allclose(pure_state(HALF_PI, field_dim=3)[:2, :2],
                                   np.full((2, 2), 0.5), atol=1e-15)

    def test_pure_state_range(self):
        with self.assertRaises(ValueError):
            pure_state(-0.1)
        with self.assertRaises(ValueError):
            pure_state(3.2)

    def test_likelihood_at_endpoints(self):
        ch = channel()
        for xi in OUTCOMES:
            self.assertAlmostEqual(likelihood(0.0, xi, ch), ch.params.p_xig(xi), places=14)
            self.assertAlmostEqual(likelihood(math.pi, xi, ch), ch.params.p_xie(xi), places=14)

    def test_equal_superposition_likelihood(self):
        ch = channel(p1g=0.8, p1e=0.1)
        self.assertAlmostEqual(likelihood(HALF_PI, 1, ch), 0.45, places=12)

    def test_likelihood_closed_form(self):
        for seed in range(10):
            d = random_params(seed)
            omega_tau = 0.3 * (seed + 1)
            ch = FieldChannel(d, JCParams(omega_tau, field_dim=3))
            s2 = math.sin(omega_tau) ** 2
            for theta in (0.2, 1.4, 2.9):
                for xi in OUTCOMES:
                    expected = d.p_xig(xi) + (d.p_xie(xi) - d.p_xig(xi)) * s2 * math.sin(theta / 2) ** 2
                    self.assertAlmostEqual(likelihood(theta, xi, ch), expected, places=12)

    def test_likelihood_decomposes_over_exit_level(self):
        ch = channel(omega_tau=1.1, field_dim=4)
        rho = pure_state(2.2, field_dim=4)
        p_g, p_e = excitation_probabilities(ch.jc, rho)
        for xi in OUTCOMES:
            self.assertAlmostEqual(likelihood(2.2, xi, ch),
                                   ch.params.p_xig(xi) * p_g + ch.params.p_xie(xi) * p_e, places=12)

    def test_likelihoods_sum_to_one(self):
        for seed in range(10):
            ch = FieldChannel(random_params(seed), JCParams(1.0 + 0.1 * seed))
            self.assertLessEqual(likelihood_sum_residual(HypothesisGrid.uniform(), ch), 1e-12)


    def test_likelihoods_are_probabilities(self):
        grid = HypothesisGrid.uniform(61)
        for seed in range(20):
            ch = FieldChannel(random_params(seed), JCParams(0.35 * seed, field_dim=2 + seed % 3))
            for theta in grid.thetas:
                for xi in OUTCOMES:
                    value = likelihood(theta, xi, ch)
                    self.assertGreaterEqual(value, -1e-12)
                    self.assertLessEqual(value, 1.0 + 1e-12)


class AnalyticPosteriorTests(SimpleTestCase):

    def test_uninformative_detector(self):
        self.assertAlmostEqual(analytic_posterior(0.4, 1, 0.3, 0.3, HALF_PI), 1 / math.pi, places=15)

    def test_single_outcome_example(self):
        self.assertAlmostEqual(analytic_posterior(0.0, 1, 0.8, 0.1, HALF_PI),
                               16 / (9 * math.pi), places=12)

    def test_no_click_at_vacuum(self):
        self.assertAlmostEqual(analytic_posterior(0.0, 0, 0.1, 0.2, HALF_PI),
                               2 / (3 * math.pi), places=12)

    def test_degenerate_normaliser(self):
        with self.assertRaises(DegenerateDetector):
            analytic_posterior(1.0, 2, 0.0, 0.0, HALF_PI)


class PosteriorUpdateTests(SimpleTestCase):

    def test_matches_closed_form(self):
        rng = np.random.default_rng(31)
        grid = HypothesisGrid.uniform()
        for seed in range(20):
            d = random_params(seed)
            omega_tau = float(rng.uniform(0, math.pi))
            ch = FieldChannel(d, JCParams(omega_tau))
            s2 = math.sin(omega_tau) ** 2
            for xi in OUTCOMES:
                p_g, p_e = d.p_xig(xi), d.p_xie(xi)
                if 2 * p_g + (p_e - p_g) * s2 < 1e-6:
                    continue
                np.testing.assert_allclose(
                    posterior_update(grid, xi, ch).density,
                    analytic_posterior_on_grid(grid, xi, ch),
                    atol=1e-9, err_msg=f"seed={seed} xi={xi}",
                )

    def test_posterior_is_normalised(self):
        grid = HypothesisGrid.uniform()
        for xi in OUTCOMES:
            self.assertAlmostEqual(posterior_update(grid, xi, channel()).mass(), 1.0, places=12)

    def test_uninformative_detector_keeps_prior(self):
        ch = channel(eps_g=0.7, eps_e=0.7, p1g=0.4, p1e=0.4)
        prior = HypothesisGrid.from_weights(1 + HypothesisGrid.uniform(91).thetas)
        for xi in OUTCOMES:
            np.testing.assert_allclose(posterior_update(prior, xi, ch).density, prior.density,
                                       atol=1e-12)

    def test_full_rabi_cycle_keeps_prior(self):
        grid = HypothesisGrid.uniform()
        for xi in OUTCOMES:
            np.testing.assert_allclose(posterior_update(grid, xi, channel(omega_tau=math.pi)).density,
                                       grid.density, atol=1e-12)

    def test_ground_click_favours_vacuum(self):
        density = posterior_update(HypothesisGrid.uniform(), 1, channel(p1g=0.8, p1e=0.1)).density
        self.assertTrue(np.all(np.diff(density) < 0))

    def test_no_click_favours_photon(self):
        density = posterior_update(HypothesisGrid.uniform(), 0, channel()).density
        self.assertTrue(np.all(np.diff(density) > 0))

    def test_density_at_vacuum(self):
        density = posterior_density_at(HypothesisGrid.uniform(), 0.0, 0, channel())
        self.assertAlmostEqual(density, 2 / (3 * math.pi), places=9)
        self.assertAlmostEqual(posterior_update(HypothesisGrid.uniform(), 0, channel()).density[0],
                               2 / (3 * math.pi), places=4)

    def test_impossible_outcome(self):
        ch = FieldChannel(ideal_photon_counter(), JCParams(0.0))
        with self.assertRaises(ImpossibleOutcome):
            posterior_update(HypothesisGrid.uniform(), 2, ch)
        with self.assertRaises(ImpossibleOutcome):
            posterior_density_at(HypothesisGrid.uniform(), 1.0, 2, ch)


class SequentialUpdateTests(SimpleTestCase):

    def test_single_outcome_matches_one_update(self):
        grid, ch = HypothesisGrid.uniform(), channel()
        for xi in OUTCOMES:
            np.testing.assert_allclose(sequential_update(grid, [xi], ch).density,
                                       posterior_update(grid, xi, ch).density, atol=1e-14)

    def test_ideal_counter_photon_click(self):
        grid = HypothesisGrid.uniform()
        ch = FieldChannel(ideal_photon_counter(), JCParams(HALF_PI))
        density = sequential_update(grid, [2], ch).density
        np.testing.assert_allclose(density, 2 / math.pi * np.sin(grid.thetas / 2) ** 2, atol=1e-12)

    def test_repeated_vacuum_clicks(self):
        grid = HypothesisGrid.uniform()
        ch = FieldChannel(ideal_photon_counter(), JCParams(HALF_PI))
        density = sequential_update(grid, [1, 1, 1, 1], ch).density
        np.testing.assert_allclose(density, 2 / math.pi * np.cos(grid.thetas / 2) ** 2, atol=1e-12)

    def test_photon_cannot_be_detected_twice(self):
        ch = FieldChannel(ideal_photon_counter(), JCParams(HALF_PI))
        with self.assertRaises(ImpossibleOutcome):
            sequential_update(HypothesisGrid.uniform(), [2, 2], ch)

    def test_empty_record(self):
        with self.assertRaises(ValueError):
            sequential_update(HypothesisGrid.uniform(), [], channel())
