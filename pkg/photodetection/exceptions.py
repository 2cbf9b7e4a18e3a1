"""
Domain exceptions for the photodetection simulator.

Services raise these; views and the management command translate them
into HTTP statuses and exit codes.
"""


class PhotodetectionError(Exception):
    """Base class for every error raised by the simulator."""


class InvalidDimension(PhotodetectionError, ValueError):
    """A basis size is not a positive integer."""


class InvalidInteraction(PhotodetectionError, ValueError):
    """The interaction strength is negative or not a finite number."""


class DimensionMismatch(PhotodetectionError, ValueError):
    """Operands live in spaces of incompatible size."""


class InvalidDensityOperator(PhotodetectionError, ValueError):
    """A matrix is not Hermitian, unit-trace and positive semidefinite."""


# Relation each named constraint enforces, quoted in violation messages.
CONSTRAINT_RELATIONS = {
    'efficiency-range': '0 <= eps_mu <= 1',
    'click-bound': '0 <= p_1mu <= eps_mu',
    'flip-range': '0 <= f_xi_mu <= 1',
    'probability-range': '0 <= p_xi_mu <= 1',
    'flip-split': '|a_xi_mu_mu|^2 + |a_xi_mu_nu|^2 = p_xi_mu',
    'click-sum': 'p_1mu + p_2mu = eps_mu',
    'no-click': 'p_0mu = 1 - eps_mu',
    'povm-completeness': 'sum_xi Pi_xi = I',
    'kraus-consistency': 'sum_k M_k^dag M_k = Pi_xi',
    'jc-isometry': 'U_gg^dag U_gg + U_eg^dag U_eg = I',
    'channel-completeness': 'sum_xi_k K^dag K = I',
    'two-path': 'Kraus route = joint-state route',
    'likelihood-sum': 'sum_xi P(xi|theta) = 1',
}


class ConstraintViolation(PhotodetectionError, ValueError):
    """A detector parameter breaks one of the model's constraint equations."""

    def __init__(self, constraint: str, message: str, residual: float = 0.0):
        self.constraint = constraint
        self.relation = CONSTRAINT_RELATIONS.get(constraint)
        self.residual = residual
        label = f"{constraint} ({self.relation})" if self.relation else constraint
        super().__init__(f"{label}: {message}")


class ImpossibleOutcome(PhotodetectionError):
    """Conditioning on an outcome that has (numerically) zero probability."""

    def __init__(self, xi: int, probability: float, context: str = ''):
        self.xi = xi
        self.probability = probability
        detail = f" ({context})" if context else ''
        super().__init__(
            f"Outcome xi={xi} is impossible: P={probability:.3e}{detail}."
        )


class DegenerateDetector(PhotodetectionError, ArithmeticError):
    """The closed-form posterior normaliser vanishes."""


class ConfigError(PhotodetectionError, ValueError):
    """A run configuration file cannot be read or parsed."""
