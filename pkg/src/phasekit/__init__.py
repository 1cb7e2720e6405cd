"""Unitary two-mode photon phase operator on a truncated Fock space."""

from .errors import BasisMismatch, InvalidConfig, NonPositiveSpectrum
from .fock_core import (
    ComplexOperator,
    FockIndex,
    StateVector,
    TwoModeBasis,
    angular_momentum,
    build_basis,
    fock_state,
    hamiltonian,
    ladder_matrix,
    position_operator,
    transformed_ladder,
)
from .phase_ops import (
    amplitude_operator,
    forward_phase_operator,
    herm_inv_sqrt,
    phase_operator,
    phase_sequence,
    restrict_forward,
    selection_rule_violation,
    sg_operator,
)

__version__ = "0.1.0"
