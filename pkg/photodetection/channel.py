"""
Field-space measurement channel of the atom-pointer photodetector.

Kraus operators K_{ξ,μν} = α_{ξ,μν} U_{μg} act on the cavity field alone;
the superoperator of outcome ξ is

    Ξ_ξ ρ = p_ξg U_gg ρ U_gg† + p_ξe U_eg ρ U_eg†.

Whether the chamber flips the atom (ν != μ) never shows up in Ξ_ξ: only
the entry level μ selects the U block.
"""

import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from detectors.services import (
    KRAUS_INDICES, OUTCOMES, DetectorParams, Outcome, as_outcome, transformers_atom,
)

from .exceptions import DimensionMismatch, ImpossibleOutcome
from .fock_linalg import (
    DensityOperator, Operator, ensure_density, identity, kron, partial_trace_atom, real_trace,
    sandwich,
)
from .jaynes_cummings import JCParams, ground_column, joint_state_after_interaction

logger = logging.getLogger(__name__)

__all__ = [
    'Outcome', 'FieldChannel', 'TrajectoryStep', 'TrajectorySampler',
    'kraus_ops', 'apply_xi', 'outcome_prob_field', 'outcome_probabilities',
    'conditional_state', 'unconditional_state', 'field_povm',
    'subensemble_state_via_joint', 'sample_trajectory', 'sample_outcome_counts',
]

ZERO_PROBABILITY = 1e-14


def kraus_ops(params: DetectorParams, jc: JCParams, xi) -> list:
    """[K_{ξ,gg}, K_{ξ,ge}, K_{ξ,eg}, K_{ξ,ee}]; μ picks U_{μg}, ν is summed out."""
    xi = as_outcome(xi)
    column = ground_column(jc)
    return [np.sqrt(params.table[xi, mu, nu]) * column[mu] for mu, nu in KRAUS_INDICES]


@dataclass(frozen=True, eq=False)
class FieldChannel:
    """Detector and interaction settings plus the per-outcome Kraus operators."""

    params: DetectorParams
    jc: JCParams
    kraus: dict = field(init=False, repr=False)

    def __post_init__(self):
        ops = {}
        for xi in OUTCOMES:
            ops[xi] = tuple(kraus_ops(self.params, self.jc, xi))
            for k in ops[xi]:
                k.flags.writeable = False
        object.__setattr__(self, 'kraus', ops)
        logger.debug("Field channel ready: omega_tau=%s field_dim=%s",
                     self.jc.omega_tau, self.jc.field_dim)

    @property
    def field_dim(self) -> int:
        return self.jc.field_dim

    def completeness_residual(self) -> float:
        """max |Σ_ξ Σ_k K†K - I|."""
        total = sum(field_povm(self, xi) for xi in OUTCOMES)
        return float(np.max(np.abs(total - identity(self.field_dim))))


def _check_field_state(ch: FieldChannel, rho_f: Operator):
    n = ch.field_dim
    if rho_f.shape != (n, n):
        raise DimensionMismatch(
            f"Field state of shape {rho_f.shape} does not match field_dim={n}."
        )


def _field_state(ch: FieldChannel, rho_f) -> DensityOperator:
    """A caller-supplied field state, checked to be a density operator of the right size."""
    rho_f = ensure_density(rho_f)
    _check_field_state(ch, rho_f)
    return rho_f


# ==================================================================
# SUPEROPERATORS
# ==================================================================

def field_povm(ch: FieldChannel, xi) -> Operator:
    """Π_ξ^F = Σ_k K_{ξ,k}† K_{ξ,k}."""
    return sum(k.conj().T @ k for k in ch.kraus[as_outcome(xi)])


def apply_xi(ch: FieldChannel, xi, rho_f: DensityOperator) -> Operator:
    """Unnormalised subensemble state Ξ_ξ ρ_F."""
    _check_field_state(ch, rho_f)
    return sum(sandwich(k, rho_f) for k in ch.kraus[as_outcome(xi)])


def outcome_prob_field(ch: FieldChannel, xi, rho_f: DensityOperator) -> float:
    """P(ξ) = Tr_F[Ξ_ξ ρ_F]."""
    return real_trace(apply_xi(ch, xi, rho_f))


def outcome_probabilities(ch: FieldChannel, rho_f: DensityOperator) -> np.ndarray:
    return np.array([outcome_prob_field(ch, xi, rho_f) for xi in OUTCOMES])


def conditional_state(ch: FieldChannel, xi, rho_f: DensityOperator) -> tuple:
    """
    Normalised post-measurement field state and its probability.

    Raises InvalidDensityOperator for a malformed ``rho_f`` and
    ImpossibleOutcome instead of dividing when P(ξ) < 1e-14.
    """
    xi = as_outcome(xi)
    rho_f = _field_state(ch, rho_f)
    unnormalised = apply_xi(ch, xi, rho_f)
    probability = real_trace(unnormalised)
    if probability < ZERO_PROBABILITY:
        logger.warning("Conditioning on outcome %d with P=%.3e", xi, probability)
        raise ImpossibleOutcome(int(xi), probability)
    state = unnormalised / probability
    return (state + state.conj().T) / 2, probability


def unconditional_state(ch: FieldChannel, rho_f: DensityOperator) -> DensityOperator:
    """Outcome-averaged field state Σ_ξ Ξ_ξ ρ_F."""
    rho_f = _field_state(ch, rho_f)
    return sum(apply_xi(ch, xi, rho_f) for xi in OUTCOMES)


def subensemble_state_via_joint(params: DetectorParams, jc: JCParams, xi,
                                rho_f: DensityOperator) -> Operator:
    """
    Ξ_ξ ρ_F computed the long way: evolve |g><g| ⊗ ρ_F, apply the atomic
    transformers as M ⊗ I_F sandwiches, then trace the atom out.
    """
    rho_af = joint_state_after_interaction(rho_f, jc)
    eye_f = identity(jc.field_dim)
    reduced = sum(sandwich(kron(m, eye_f), rho_af) for m in transformers_atom(params, xi))
    return partial_trace_atom(reduced, jc.field_dim)


# ==================================================================
# MONTE CARLO
# ==================================================================

class TrajectoryStep(NamedTuple):
    xi: Outcome
    state: DensityOperator
    probabilities: np.ndarray


def _as_distribution(probabilities: np.ndarray) -> np.ndarray:
    p = np.clip(probabilities, 0.0, None)
    return p / p.sum()


class TrajectorySampler:
    """
    Repeated probing of one cavity by fresh ground-state atoms.

    Owns its RNG; concurrent trajectories need separate instances.
    """

    def __init__(self, channel: FieldChannel, seed: int):
        self.channel = channel
        self.rng = np.random.default_rng(seed)

    def step(self, rho_f: DensityOperator) -> TrajectoryStep:
        rho_f = _field_state(self.channel, rho_f)
        probabilities = outcome_probabilities(self.channel, rho_f)
        xi = Outcome(int(self.rng.choice(len(OUTCOMES), p=_as_distribution(probabilities))))
        state, _ = conditional_state(self.channel, xi, rho_f)
        logger.debug("Drew xi=%d from p=%s", xi, probabilities)
        return TrajectoryStep(xi, state, probabilities)

    def run(self, rho_f0: DensityOperator, rounds: int) -> list:
        if rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {rounds!r}.")
        steps, state = [], rho_f0
        for _ in range(rounds):
            step = self.step(state)
            steps.append(step)
            state = step.state
        return steps


def sample_trajectory(ch: FieldChannel, rho_f0: DensityOperator, rounds: int,
                      seed: int) -> list:
    return TrajectorySampler(ch, seed).run(rho_f0, rounds)


def sample_outcome_counts(ch: FieldChannel, rho_f: DensityOperator, shots: int,
                          seed: int) -> np.ndarray:
    """Counts of ξ = 0, 1, 2 over ``shots`` independent single-round measurements."""
    rho_f = _field_state(ch, rho_f)
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(OUTCOMES), size=shots,
                       p=_as_distribution(outcome_probabilities(ch, rho_f)))
    return np.bincount(draws, minlength=len(OUTCOMES))
