"""
Resonant atom-field evolution for an atom entering the cavity in |g>.

Only the ground-state column of the Jaynes-Cummings propagator is built:
U_gg = <g|U|g> = cos(Ωτ sqrt(a†a)) and U_eg = <e|U|g>, which maps |n>
to -i sin(Ωτ sqrt(n)) |n-1>. The argument of the removable singularity
sin(x)/x in U_eg is aa† with spectrum n+1 >= 1, so it is evaluated
directly.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DimensionMismatch, InvalidDimension, InvalidInteraction
from .fock_linalg import (
    ATOM_DIM, E, G, DensityOperator, Operator, annihilation, diag_fock_fn,
    real_trace, sandwich,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JCParams:
    """Interaction strength Ωτ (dimensionless) and Fock truncation."""

    omega_tau: float
    field_dim: int = 2

    def __post_init__(self):
        if not math.isfinite(self.omega_tau) or self.omega_tau < 0:
            raise InvalidInteraction(f"omega_tau must be finite and >= 0, got {self.omega_tau!r}.")
        if isinstance(self.field_dim, bool) or not isinstance(self.field_dim, int) \
                or self.field_dim < 1:
            raise InvalidDimension(f"field_dim must be a positive integer, got {self.field_dim!r}.")


def u_gg(p: JCParams) -> Operator:
    return diag_fock_fn(p.field_dim, lambda n: math.cos(p.omega_tau * math.sqrt(n)))


def u_eg(p: JCParams) -> Operator:
    # -i diag(sin(Ωτ sqrt(n+1)) / sqrt(n+1)) a
    scale = diag_fock_fn(
        p.field_dim,
        lambda n: math.sin(p.omega_tau * math.sqrt(n + 1)) / math.sqrt(n + 1),
    )
    return -1j * scale @ annihilation(p.field_dim)


def ground_column(p: JCParams) -> dict:
    """{G: U_gg, E: U_eg}, keyed by the atom level after the interaction."""
    return {G: u_gg(p), E: u_eg(p)}


def isometry_residual(p: JCParams) -> float:
    """max |U_gg†U_gg + U_eg†U_eg - I| entrywise."""
    gg, eg = u_gg(p), u_eg(p)
    gram = gg.conj().T @ gg + eg.conj().T @ eg
    return float(np.max(np.abs(gram - np.eye(p.field_dim))))


def joint_state_after_interaction(rho_f: DensityOperator, p: JCParams) -> Operator:
    """U (|g><g| ⊗ rho_F) U† as sum_{mu,nu} |mu><nu| ⊗ U_mu,g rho_F U_nu,g†."""
    n = p.field_dim
    if rho_f.shape != (n, n):
        raise DimensionMismatch(
            f"Field state of shape {rho_f.shape} does not match field_dim={n}."
        )
    column = ground_column(p)
    joint = np.zeros((ATOM_DIM * n, ATOM_DIM * n), dtype=np.complex128)
    for mu, u_mu in column.items():
        for nu, u_nu in column.items():
            joint[mu * n:(mu + 1) * n, nu * n:(nu + 1) * n] = u_mu @ rho_f @ u_nu.conj().T
    return joint


def excitation_probabilities(p: JCParams, rho_f: DensityOperator) -> tuple:
    """(P(g), P(e)) of the atom on leaving the cavity: Tr[U_mu,g rho_F U_mu,g†]."""
    return real_trace(sandwich(u_gg(p), rho_f)), real_trace(sandwich(u_eg(p), rho_f))
