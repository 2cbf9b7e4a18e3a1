"""
Imperfect ionization-chamber detector: parameters, atomic POVMs, state
transformers and the conditional superoperators Λ_ξ.

All detector logic lives here; serializers only check input shape.

Table convention: ``table[xi, mu, nu] = |α_{ξ,μν}|²`` where ``mu`` is the
atomic level on entering the chamber and ``nu`` the level after the
chamber's internal pulses. The transformer is M_{ξ,μν} = α_{ξ,μν}|ν><μ|
with α = +sqrt(p); only |α|² is observable in this model.
"""

import logging
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from photodetection.exceptions import ConstraintViolation, DimensionMismatch
from photodetection.fock_linalg import (
    ATOM_DIM, E, G, DensityOperator, Operator, atom_transition, sandwich,
)

logger = logging.getLogger(__name__)

CONSTRAINT_TOL = 1e-12

# (mu, nu) pairs in transformer order: gg, ge, eg, ee
KRAUS_LABELS = ('gg', 'ge', 'eg', 'ee')
KRAUS_INDICES = ((G, G), (G, E), (E, G), (E, E))


class Outcome(IntEnum):
    """Chamber readout ξ."""
    NO_CLICK = 0
    GROUND_CLICK = 1
    EXCITED_CLICK = 2


OUTCOMES = tuple(Outcome)


def as_outcome(xi) -> Outcome:
    try:
        return Outcome(int(xi))
    except (TypeError, ValueError):
        raise ValueError(f"Outcome must be 0, 1 or 2, got {xi!r}.") from None


# ==================================================================
# PARAMETERS
# ==================================================================

@dataclass(frozen=True, eq=False)
class DetectorParams:
    """
    Efficiencies plus the full |α_{ξ,μν}|² table.

    ``marginals[xi, mu]`` is p_ξμ = P(ξ | atom in mu); ``table`` splits each
    marginal into its stay (mu == nu) and flip (mu != nu) parts.
    """

    eps_g: float
    eps_e: float
    marginals: np.ndarray
    table: np.ndarray

    def __post_init__(self):
        marginals = np.array(self.marginals, dtype=float)
        table = np.array(self.table, dtype=float)
        if marginals.shape != (3, ATOM_DIM) or table.shape != (3, ATOM_DIM, ATOM_DIM):
            raise DimensionMismatch(
                f"Expected marginals (3, 2) and table (3, 2, 2), "
                f"got {marginals.shape} and {table.shape}."
            )
        marginals.flags.writeable = False
        table.flags.writeable = False
        object.__setattr__(self, 'marginals', marginals)
        object.__setattr__(self, 'table', table)

        for constraint, residual in self.constraint_residuals().items():
            if residual > CONSTRAINT_TOL:
                raise ConstraintViolation(
                    constraint, f"residual {residual:.3e} exceeds {CONSTRAINT_TOL:g}", residual
                )

    def constraint_residuals(self) -> dict:
        """Largest violation of each model constraint, keyed by name."""
        m, t = self.marginals, self.table
        below = max(0.0, -float(t.min()), -float(m.min()))
        above = max(0.0, float(t.max()) - 1.0, float(m.max()) - 1.0)
        eps = np.array([self.eps_g, self.eps_e])
        return {
            'probability-range': max(below, above),
            'flip-split': float(np.max(np.abs(t.sum(axis=2) - m))),
            'click-sum': float(np.max(np.abs(m[1] + m[2] - eps))),
            'no-click': float(np.max(np.abs(m[0] - (1.0 - eps)))),
            'povm-completeness': float(np.max(np.abs(m.sum(axis=0) - 1.0))),
        }

    def p(self, xi, label: str) -> float:
        """|α_{ξ,μν}|² by label, e.g. ``d.p(1, 'ge')``."""
        mu, nu = KRAUS_INDICES[KRAUS_LABELS.index(label)]
        return float(self.table[as_outcome(xi), mu, nu])

    def p_xig(self, xi) -> float:
        return float(self.marginals[as_outcome(xi), G])

    def p_xie(self, xi) -> float:
        return float(self.marginals[as_outcome(xi), E])


def _check_unit(constraint: str, name: str, value: float, upper: float = 1.0):
    if not 0.0 <= value <= upper:
        excess = value - upper if value > upper else -value
        raise ConstraintViolation(
            constraint, f"{name}={value!r} must lie in [0, {upper!r}]", float(excess)
        )


def build_params(eps_g: float, eps_e: float, p1g: float, p1e: float,
                 split=None) -> DetectorParams:
    """
    Derive the full table from efficiencies, ξ=1 marginals and flip fractions.

    ``split[xi][mu]`` is the fraction of p_ξμ that leaves the atom flipped.
    Omitted ``split`` means no flips.
    """
    _check_unit('efficiency-range', 'eps_g', eps_g)
    _check_unit('efficiency-range', 'eps_e', eps_e)
    _check_unit('click-bound', 'p1g', p1g, upper=eps_g)
    _check_unit('click-bound', 'p1e', p1e, upper=eps_e)

    split = np.zeros((3, ATOM_DIM)) if split is None else np.asarray(split, dtype=float)
    if split.shape != (3, ATOM_DIM):
        raise ConstraintViolation('flip-range', f"flip fractions must be 3x2, got shape {split.shape}")
    for xi in OUTCOMES:
        for mu, level in ((G, 'g'), (E, 'e')):
            _check_unit('flip-range', f"flip_fractions[{int(xi)}][{level}]", float(split[xi, mu]))

    marginals = np.array([
        [1.0 - eps_g, 1.0 - eps_e],
        [p1g, p1e],
        [eps_g - p1g, eps_e - p1e],
    ])
    table = np.zeros((3, ATOM_DIM, ATOM_DIM))
    for mu in (G, E):
        flipped = E if mu == G else G
        table[:, mu, mu] = (1.0 - split[:, mu]) * marginals[:, mu]
        table[:, mu, flipped] = split[:, mu] * marginals[:, mu]

    logger.debug("Built detector table eps_g=%s eps_e=%s p1g=%s p1e=%s", eps_g, eps_e, p1g, p1e)
    return DetectorParams(eps_g=eps_g, eps_e=eps_e, marginals=marginals, table=table)


def describe_params(d: DetectorParams) -> dict:
    """Plain-data view of the derived table, one ``{label: p}`` dict per outcome."""
    return {
        'eps_g': d.eps_g,
        'eps_e': d.eps_e,
        'marginals': d.marginals.tolist(),
        'table': [{label: d.p(xi, label) for label in KRAUS_LABELS} for xi in OUTCOMES],
    }


def ideal_photon_counter() -> DetectorParams:
    """Perfect efficiency, no cross-talk: ξ=1 iff g, ξ=2 iff e."""
    return build_params(1.0, 1.0, 1.0, 0.0)


def random_params(seed: int) -> DetectorParams:
    """A seeded draw from the valid parameter space, flips included."""
    rng = np.random.default_rng(seed)
    eps_g, eps_e = (float(x) for x in rng.random(2))
    split = rng.random((3, ATOM_DIM))
    return build_params(eps_g, eps_e, rng.uniform(0, eps_g), rng.uniform(0, eps_e), split)


# ==================================================================
# ATOMIC MEASUREMENT
# ==================================================================

def _check_atom_state(rho_a: Operator):
    if rho_a.shape != (ATOM_DIM, ATOM_DIM):
        raise DimensionMismatch(f"Atom state must be 2x2, got shape {rho_a.shape}.")


def povm_atom(d: DetectorParams, xi) -> Operator:
    """Π_ξ^A = p_ξg |g><g| + p_ξe |e><e|."""
    xi = as_outcome(xi)
    return np.diag(d.marginals[xi]).astype(np.complex128)


def transformers_atom(d: DetectorParams, xi) -> list:
    """[M_{ξ,gg}, M_{ξ,ge}, M_{ξ,eg}, M_{ξ,ee}]."""
    xi = as_outcome(xi)
    return [
        np.sqrt(d.table[xi, mu, nu]) * atom_transition(nu, mu)
        for mu, nu in KRAUS_INDICES
    ]


def apply_lambda(d: DetectorParams, xi, rho_a: DensityOperator) -> Operator:
    """Unnormalised post-selection atom state Σ M ρ_A M†."""
    _check_atom_state(rho_a)
    return sum(sandwich(m, rho_a) for m in transformers_atom(d, xi))


def outcome_prob_atom(d: DetectorParams, xi, rho_a: DensityOperator) -> float:
    """P(ξ) = p_ξg P(g) + p_ξe P(e)."""
    _check_atom_state(rho_a)
    xi = as_outcome(xi)
    populations = np.real(np.diag(rho_a))
    return float(d.marginals[xi] @ populations)


def completeness_residual(d: DetectorParams) -> float:
    """max |Σ_ξ Π_ξ^A - I|."""
    total = sum(povm_atom(d, xi) for xi in OUTCOMES)
    return float(np.max(np.abs(total - np.eye(ATOM_DIM))))


def kraus_consistency_residual(d: DetectorParams) -> float:
    """max over ξ of |Σ_k M_k†M_k - Π_ξ^A|."""
    return max(
        float(np.max(np.abs(
            sum(m.conj().T @ m for m in transformers_atom(d, xi)) - povm_atom(d, xi)
        )))
        for xi in OUTCOMES
    )
