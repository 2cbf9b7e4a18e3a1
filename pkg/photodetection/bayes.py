"""
Grid Bayesian inference over the initial field state
|ψ(θ)> = cos(θ/2)|0> + sin(θ/2)|1>, θ in [0, π].

The numeric path (pure state → Ξ_ξ → Bayes on midpoints) and the closed-form
posterior for a uniform prior are kept on separate code paths so each can
check the other.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from detectors.services import OUTCOMES, as_outcome

from .channel import FieldChannel, apply_xi, outcome_prob_field
from .exceptions import DegenerateDetector, ImpossibleOutcome, InvalidDimension
from .fock_linalg import DensityOperator, real_trace

logger = logging.getLogger(__name__)

ZERO_EVIDENCE = 1e-14
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class HypothesisGrid:
    """Density values on the composite-midpoint grid θ_k = (k + ½)π/n."""

    density: np.ndarray

    def __post_init__(self):
        density = np.array(self.density, dtype=float)
        if density.ndim != 1 or density.size < 1:
            raise InvalidDimension("A hypothesis grid needs at least one point.")
        if np.any(density < 0) or not np.all(np.isfinite(density)):
            raise ValueError("Grid densities must be finite and non-negative.")
        mass = float(density.sum()) * math.pi / density.size
        if abs(mass - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"Grid density integrates to {mass!r}, not 1.")
        density.flags.writeable = False
        object.__setattr__(self, 'density', density)

    @classmethod
    def uniform(cls, n_points: int = 181) -> 'HypothesisGrid':
        if n_points < 1:
            raise InvalidDimension(f"n_points must be >= 1, got {n_points!r}.")
        return cls(np.full(n_points, 1.0 / math.pi))

    @classmethod
    def from_weights(cls, weights) -> 'HypothesisGrid':
        """Normalise arbitrary non-negative prior weights into a density."""
        weights = np.asarray(weights, dtype=float)
        return cls(weights / (weights.sum() * math.pi / weights.size))

    @property
    def n_points(self) -> int:
        return self.density.size

    @property
    def cell_width(self) -> float:
        return math.pi / self.n_points

    @property
    def thetas(self) -> np.ndarray:
        return (np.arange(self.n_points) + 0.5) * self.cell_width

    def mass(self) -> float:
        return float(self.density.sum()) * self.cell_width


def pure_state(theta: float, field_dim: int = 2) -> DensityOperator:
    """|ψ(θ)><ψ(θ)| embedded in a ``field_dim``-dimensional Fock space."""
    if not 0.0 <= theta <= math.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta!r}.")
    if field_dim < 2:
        raise InvalidDimension(f"field_dim must be >= 2 to hold |1>, got {field_dim!r}.")
    psi = np.zeros(field_dim, dtype=np.complex128)
    psi[0], psi[1] = math.cos(theta / 2), math.sin(theta / 2)
    return np.outer(psi, psi.conj())


def likelihood(theta: float, xi, ch: FieldChannel) -> float:
    """P(ξ|θ) = Tr_F[Ξ_ξ ρ_F(θ)]."""
    return outcome_prob_field(ch, xi, pure_state(theta, ch.field_dim))


def _grid_likelihoods(grid: HypothesisGrid, xi, ch: FieldChannel) -> np.ndarray:
    values = np.array([likelihood(theta, xi, ch) for theta in grid.thetas])
    return np.clip(values, 0.0, None)


def _normalise(unnormalised: np.ndarray, cell_width: float, xi) -> np.ndarray:
    evidence = float(unnormalised.sum()) * cell_width
    if evidence < ZERO_EVIDENCE:
        logger.warning("Outcome %d has zero evidence over the prior support", int(xi))
        raise ImpossibleOutcome(int(xi), evidence, 'over the entire prior support')
    logger.debug("Posterior normaliser for xi=%d: %.17g", int(xi), evidence)
    return unnormalised / evidence


def posterior_update(grid: HypothesisGrid, xi, ch: FieldChannel) -> HypothesisGrid:
    """P(θ|ξ) ∝ P(ξ|θ) P(θ), normalised with the grid's own quadrature."""
    xi = as_outcome(xi)
    weighted = _grid_likelihoods(grid, xi, ch) * grid.density
    return HypothesisGrid(_normalise(weighted, grid.cell_width, xi))


def posterior_density_at(grid: HypothesisGrid, theta: float, xi,
                         ch: FieldChannel) -> float:
    """
    Numeric posterior density at an arbitrary θ in [0, π].

    The prior is interpolated linearly between midpoints (held flat past the
    outermost ones); the normaliser is the same grid sum posterior_update uses.
    """
    xi = as_outcome(xi)
    weighted = _grid_likelihoods(grid, xi, ch) * grid.density
    evidence = float(weighted.sum()) * grid.cell_width
    if evidence < ZERO_EVIDENCE:
        raise ImpossibleOutcome(int(xi), evidence, 'over the entire prior support')
    prior = float(np.interp(theta, grid.thetas, grid.density))
    return likelihood(theta, xi, ch) * prior / evidence


def analytic_posterior(theta: float, xi, p_xig: float, p_xie: float,
                       omega_tau: float) -> float:
    """
    Closed-form posterior density for a uniform prior on [0, π]:

        (1/π) [1 + (p_g - p_e) sin²(Ωτ) cos θ / (2 p_g + (p_e - p_g) sin²(Ωτ))]

    ``xi`` only labels the outcome whose marginals are passed in.
    """
    as_outcome(xi)
    s2 = math.sin(omega_tau) ** 2
    denominator = 2.0 * p_xig + (p_xie - p_xig) * s2
    if abs(denominator) < ZERO_EVIDENCE:
        raise DegenerateDetector(
            f"Closed-form posterior for xi={int(xi)} has a vanishing normaliser "
            f"(p_g={p_xig!r}, p_e={p_xie!r}, omega_tau={omega_tau!r})."
        )
    return (1.0 + (p_xig - p_xie) * s2 * math.cos(theta) / denominator) / math.pi


def analytic_posterior_on_grid(grid: HypothesisGrid, xi, ch: FieldChannel) -> np.ndarray:
    """Closed-form posterior at the grid midpoints, renormalised on the same grid."""
    xi = as_outcome(xi)
    p = ch.params
    values = np.array([
        analytic_posterior(theta, xi, p.p_xig(xi), p.p_xie(xi), ch.jc.omega_tau)
        for theta in grid.thetas
    ])
    return values / (values.sum() * grid.cell_width)


def sequential_update(grid: HypothesisGrid, outcomes, ch: FieldChannel) -> HypothesisGrid:
    """
    Fold Bayes updates along a measured outcome sequence.

    Each hypothesis θ_k carries its own field state, replaced after every
    round by the conditional state for the observed outcome, so the round-m
    likelihood is P(ξ_m | θ_k, ξ_1 … ξ_{m-1}). Hypotheses that cannot have
    produced an observed outcome drop to zero density.
    """
    outcomes = [as_outcome(xi) for xi in outcomes]
    if not outcomes:
        raise ValueError("sequential_update needs at least one outcome.")

    states = [pure_state(theta, ch.field_dim) for theta in grid.thetas]
    density = np.array(grid.density)
    for xi in outcomes:
        unnormalised = [apply_xi(ch, xi, rho) for rho in states]
        likelihoods = np.clip([real_trace(s) for s in unnormalised], 0.0, None)
        density = _normalise(likelihoods * density, grid.cell_width, xi)
        states = [
            s / p if p >= ZERO_EVIDENCE else rho
            for s, p, rho in zip(unnormalised, likelihoods, states)
        ]
    return HypothesisGrid(density)


def likelihood_sum_residual(grid: HypothesisGrid, ch: FieldChannel) -> float:
    """max_k |Σ_ξ P(ξ|θ_k) - 1|."""
    totals = sum(_grid_likelihoods(grid, xi, ch) for xi in OUTCOMES)
    return float(np.max(np.abs(totals - 1.0)))
