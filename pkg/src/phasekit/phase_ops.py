"""
Complex amplitude operator, the unitary phase operator E = (AA^dag)^(-1/2) A,
its forward-photon restriction and the Susskind-Glogower comparator.

Notes on truncation
-------------------
The product of two truncated amplitude matrices is singular: the m = n_max
block of A A^dag receives nothing from inside the basis. The positive operator
is therefore formed as the projection of the exact product, P (A A^dag) P,
by building A on the basis of n_max + 1 and slicing (the ordering makes the
smaller basis a prefix). In each L-eigenspace this is the Jacobi matrix of
k rho^2 / 2, whose spectrum is strictly positive.

Rows and columns with total occupation n_max are kept but are not trustworthy;
identities are asserted only on an interior, see ``interior_unitarity``.
"""

from __future__ import annotations

import math
from typing import Union

import numpy as np

from .errors import NonPositiveSpectrum
from .fock_core import (
    BACKWARD,
    FORWARD,
    ComplexOperator,
    TwoModeBasis,
    build_basis,
    ladder_matrix,
)
from .special import log_gamma_ratio_half

DEFAULT_REL_FLOOR = 1e-12


def forward_tag(n_keep: int) -> str:
    return f"forward:{n_keep}"


def amplitude_operator(basis: TwoModeBasis, k: float = 1.0) -> ComplexOperator:
    """(a_fwd + a_bwd^dag) / sqrt(2k)."""
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    a_f = ladder_matrix(basis, FORWARD, "lower")
    up_b = ladder_matrix(basis, BACKWARD, "raise")
    return (a_f + up_b) / math.sqrt(2 * k)


def amplitude_gram(basis: TwoModeBasis, k: float = 1.0) -> ComplexOperator:
    """P (A A^dag) P with the intermediate sum running one shell past the basis."""
    big = amplitude_operator(build_basis(basis.n_max + 1), k).matrix
    d = basis.dim
    gram = big[:d, :] @ big[:d, :].conj().T
    return ComplexOperator(gram, basis.tag)


def _inv_sqrt(mat: np.ndarray, rel_floor: float) -> np.ndarray:
    herm = 0.5 * (mat + mat.conj().T)
    evals, evecs = np.linalg.eigh(herm)
    top = evals[-1]
    if not top > 0 or evals[0] <= rel_floor * top:
        raise NonPositiveSpectrum(
            f"smallest eigenvalue {evals[0]:.3e} is not above {rel_floor:g} * largest ({top:.3e})"
        )
    return (evecs / np.sqrt(evals)) @ evecs.conj().T


def herm_inv_sqrt(
    op: Union[ComplexOperator, np.ndarray], rel_floor: float = DEFAULT_REL_FLOOR
) -> Union[ComplexOperator, np.ndarray]:
    """Inverse square root of a Hermitian positive-definite operator.

    Uses the eigendecomposition ``M = U diag(w) U^dag``. Eigenvalues at or below
    ``rel_floor * max(w)`` raise NonPositiveSpectrum instead of being clamped.
    """
    if not rel_floor > 0:
        raise ValueError(f"rel_floor must be positive, got {rel_floor}")
    if isinstance(op, ComplexOperator):
        return ComplexOperator(_inv_sqrt(op.matrix, rel_floor), op.tag)
    return _inv_sqrt(np.asarray(op, dtype=complex), rel_floor)


def phase_operator(
    basis: TwoModeBasis, k: float = 1.0, rel_floor: float = DEFAULT_REL_FLOOR
) -> ComplexOperator:
    """E = (A A^dag)^(-1/2) A. Independent of k up to rounding."""
    amp = amplitude_operator(basis, k)
    return herm_inv_sqrt(amplitude_gram(basis, k), rel_floor) @ amp


def selection_rule_violation(op: ComplexOperator, basis: TwoModeBasis) -> float:
    """Largest |entry| connecting states whose L values do not satisfy m_row = m_col - 1."""
    m = basis.m_values
    forbidden = m[:, None] != m[None, :] - 1
    vals = np.abs(op.matrix[forbidden])
    return float(vals.max()) if vals.size else 0.0


def interior_unitarity(op: ComplexOperator, basis: TwoModeBasis, margin: int) -> float:
    """max |P (E^dag E - I) P| over states with total <= n_max - margin."""
    keep = basis.interior(margin)
    gram = op.matrix.conj().T @ op.matrix
    block = gram[np.ix_(keep, keep)] - np.eye(int(keep.sum()))
    return float(np.abs(block).max()) if block.size else 0.0


def restrict_forward(op: ComplexOperator, basis: TwoModeBasis, n_keep: int) -> ComplexOperator:
    """Keep only the <n,0| E |n+1,0> elements, n < n_keep, on the forward sector."""
    if n_keep < 1:
        raise ValueError(f"n_keep must be positive, got {n_keep}")
    if n_keep + 1 > basis.n_max:
        raise ValueError(f"n_keep + 1 = {n_keep + 1} exceeds n_max = {basis.n_max}")
    out = np.zeros((n_keep + 1, n_keep + 1), dtype=complex)
    for n in range(n_keep):
        out[n, n + 1] = op.matrix[basis.index((n, 0)), basis.index((n + 1, 0))]
    return ComplexOperator(out, forward_tag(n_keep))


def sg_operator(n_keep: int) -> ComplexOperator:
    """Susskind-Glogower operator sum_n |n><n+1| on the forward sector."""
    if n_keep < 1:
        raise ValueError(f"n_keep must be positive, got {n_keep}")
    return ComplexOperator(np.eye(n_keep + 1, k=1), forward_tag(n_keep))


def phase_sequence(n: int) -> float:
    """a_n = Gamma(n + 3/2) / (n! sqrt(n + 1)), via the log-gamma ratio."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    z = n + 1.0
    return math.exp(log_gamma_ratio_half(z)) / math.sqrt(z)


def phase_sequence_recurrence(count: int) -> np.ndarray:
    """a_0 .. a_{count-1} from a_0 = sqrt(pi)/2 and the exact step ratio."""
    if count < 0:
        raise ValueError(f"count must be non-negative, got {count}")
    out = np.empty(count)
    a = math.sqrt(math.pi) / 2
    for n in range(count):
        out[n] = a
        a *= (n + 1.5) / math.sqrt((n + 1.0) * (n + 2.0))
    return out


def phase_sequence_table(count: int) -> np.ndarray:
    return np.array([phase_sequence(n) for n in range(count)])


def forward_phase_operator(n_keep: int) -> ComplexOperator:
    """E_+ = sum_{n < n_keep} a_n |n><n+1| built from the exact sequence."""
    if n_keep < 1:
        raise ValueError(f"n_keep must be positive, got {n_keep}")
    return ComplexOperator(np.diag(phase_sequence_table(n_keep), k=1), forward_tag(n_keep))
