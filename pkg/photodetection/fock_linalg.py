"""
Dense linear algebra over the truncated Fock space and the two-level atom.

Operators are plain ``complex128`` numpy arrays. Joint atom-field operators
use the atom-slow ordering: basis vector (mu, n) has flat index
``mu * N + n`` with ``mu`` in {g=0, e=1}, so ``np.kron(atom_op, field_op)``
is the tensor product.
"""

from typing import Callable

import numpy as np
from numpy.typing import NDArray

from .exceptions import DimensionMismatch, InvalidDensityOperator, InvalidDimension

Operator = NDArray[np.complex128]
DensityOperator = Operator

ATOM_DIM = 2
G, E = 0, 1

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = -1e-10


def _check_dim(dim) -> int:
    if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)) or dim < 1:
        raise InvalidDimension(f"Basis size must be a positive integer, got {dim!r}.")
    return int(dim)


# ==================================================================
# CONSTRUCTION
# ==================================================================

def annihilation(dim: int) -> Operator:
    """Ladder operator ``a`` with <n-1|a|n> = sqrt(n)."""
    dim = _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(np.complex128)


def diag_fock_fn(dim: int, f: Callable[[int], float]) -> Operator:
    """diag(f(0), ..., f(dim-1)); functions of a†a are diagonal in the Fock basis."""
    dim = _check_dim(dim)
    return np.diag([complex(f(n)) for n in range(dim)]).astype(np.complex128)


def number_operator(dim: int) -> Operator:
    return diag_fock_fn(dim, float)


def identity(dim: int) -> Operator:
    return np.eye(_check_dim(dim), dtype=np.complex128)


def fock_projector(n: int, dim: int) -> Operator:
    """|n><n| in a ``dim``-dimensional Fock space."""
    dim = _check_dim(dim)
    if not 0 <= n < dim:
        raise DimensionMismatch(f"Fock state |{n}> does not fit in dimension {dim}.")
    proj = np.zeros((dim, dim), dtype=np.complex128)
    proj[n, n] = 1.0
    return proj


def atom_projector(level: int) -> Operator:
    """|g><g| for ``G``, |e><e| for ``E``."""
    return fock_projector(level, ATOM_DIM)


def atom_transition(to_level: int, from_level: int) -> Operator:
    """|to><from| in the atom space."""
    op = np.zeros((ATOM_DIM, ATOM_DIM), dtype=np.complex128)
    op[to_level, from_level] = 1.0
    return op


# ==================================================================
# ALGEBRA
# ==================================================================

def adjoint(op: Operator) -> Operator:
    return op.conj().T


def sandwich(k: Operator, rho: Operator) -> Operator:
    """K rho K†."""
    return k @ rho @ k.conj().T


def kron(a: Operator, b: Operator) -> Operator:
    """Tensor product under the atom-slow (first factor slow) convention."""
    return np.kron(a, b).astype(np.complex128)


def partial_trace_atom(rho_af: Operator, field_dim: int) -> Operator:
    """Sum of the diagonal atom blocks <mu|rho_AF|mu>."""
    field_dim = _check_dim(field_dim)
    if rho_af.shape != (ATOM_DIM * field_dim, ATOM_DIM * field_dim):
        raise DimensionMismatch(
            f"Joint operator of shape {rho_af.shape} is not "
            f"{ATOM_DIM}x{field_dim} on each axis."
        )
    blocks = rho_af.reshape(ATOM_DIM, field_dim, ATOM_DIM, field_dim)
    return np.einsum('mimj->ij', blocks)


def real_trace(op: Operator) -> float:
    return float(np.real(np.trace(op)))


# ==================================================================
# DENSITY OPERATORS
# ==================================================================

def density_residuals(rho: Operator) -> dict:
    """Measured deviations from the three density-operator invariants."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"Operator must be square, got shape {rho.shape}.")
    hermitian = float(np.max(np.abs(rho - rho.conj().T)))
    trace = abs(complex(np.trace(rho)) - 1.0)
    min_eig = float(np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)))
    return {'hermiticity': hermitian, 'trace': trace, 'min_eigenvalue': min_eig}


def is_density_operator(rho: Operator) -> bool:
    res = density_residuals(rho)
    return (res['hermiticity'] <= HERMITIAN_TOL
            and res['trace'] <= TRACE_TOL
            and res['min_eigenvalue'] >= PSD_FLOOR)


def ensure_density(rho) -> DensityOperator:
    """Coerce to ``complex128`` and raise unless all invariants hold."""
    rho = np.asarray(rho, dtype=np.complex128)
    res = density_residuals(rho)
    if res['hermiticity'] > HERMITIAN_TOL:
        raise InvalidDensityOperator(f"Not Hermitian (residual {res['hermiticity']:.3e}).")
    if res['trace'] > TRACE_TOL:
        raise InvalidDensityOperator(f"Trace differs from 1 by {res['trace']:.3e}.")
    if res['min_eigenvalue'] < PSD_FLOOR:
        raise InvalidDensityOperator(
            f"Not positive semidefinite (min eigenvalue {res['min_eigenvalue']:.3e})."
        )
    return rho


def random_density(dim: int, seed: int) -> DensityOperator:
    """G G† / Tr(G G†) for a seeded complex Gaussian G."""
    dim = _check_dim(dim)
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho)
    # exact Hermitian symmetrisation
    return ((rho + rho.conj().T) / 2).astype(np.complex128)
