"""
Observables built on the phase operators: phase variances, uniform window
states, free time evolution and the expected A field of one mode pair.

Forward-sector work uses coefficient vectors and the banded E_+ only, so a
window at l = 200 needs a forward truncation of l + m states rather than a
two-mode basis of that size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import BasisMismatch
from .fock_core import ComplexOperator, StateVector, TwoModeBasis, position_operator
from .phase_ops import amplitude_operator, forward_tag


@dataclass(frozen=True)
class WindowState:
    """Uniform superposition of |l>, ..., |l+m-1> on a forward sector."""

    l: int
    m: int
    state: StateVector = field(repr=False)


def window_state(l: int, m: int, n_keep: int | None = None) -> WindowState:
    if l < 0 or m < 1:
        raise ValueError(f"need l >= 0 and m >= 1, got l={l}, m={m}")
    n_keep = l + m if n_keep is None else n_keep
    if l + m - 1 > n_keep:
        raise ValueError(f"window [{l}, {l + m - 1}] does not fit in n_keep={n_keep}")
    coeffs = np.zeros(n_keep + 1, dtype=complex)
    coeffs[l : l + m] = 1 / math.sqrt(m)
    return WindowState(l, m, StateVector(coeffs, forward_tag(n_keep)))


def forward_state(coeffs, normalize: bool = True) -> StateVector:
    c = np.asarray(coeffs, dtype=complex)
    if normalize:
        c = c / np.linalg.norm(c)
    return StateVector(c, forward_tag(len(c) - 1))


def variance_phase(state: StateVector, op: ComplexOperator) -> float:
    """1 - |<E>|^2, valid when E^dag E = 1 on the support of the state."""
    if state.tag != op.tag:
        raise BasisMismatch(f"state on {state.tag} vs operator on {op.tag}")
    return 1.0 - abs(state.expectation(op)) ** 2


def variance_phase_forward(state: StateVector, e_plus: ComplexOperator) -> float:
    """1 - |sum_n a_n c_n^* c_{n+1}|^2 with a_n read from the superdiagonal of E_+."""
    if state.tag != e_plus.tag:
        raise BasisMismatch(f"state on {state.tag} vs operator on {e_plus.tag}")
    a = np.diagonal(e_plus.matrix, 1)
    c = state.coeffs
    return 1.0 - abs(np.sum(a * c[:-1].conj() * c[1:])) ** 2


def time_evolve(state: StateVector, k: float, t: float) -> StateVector:
    """Free evolution of a forward state: c_n -> c_n exp(-i n k t)."""
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    n = np.arange(state.dim)
    return StateVector(state.coeffs * np.exp(-1j * n * k * t), state.tag, state.normalized)


def expectation_trajectory(
    state: StateVector, e_plus: ComplexOperator, k: float, times: Sequence[float]
) -> np.ndarray:
    return np.array([time_evolve(state, k, t).expectation(e_plus) for t in times])


def rotation(basis: TwoModeBasis, theta: float) -> ComplexOperator:
    """exp(-i theta L) as a diagonal phase matrix."""
    return ComplexOperator(np.diag(np.exp(-1j * theta * basis.m_values)), basis.tag)


def rotate(state: StateVector, basis: TwoModeBasis, theta: float) -> StateVector:
    if state.tag != basis.tag:
        raise BasisMismatch(f"state on {state.tag} vs basis {basis.tag}")
    return StateVector(state.coeffs * np.exp(-1j * theta * basis.m_values), state.tag, state.normalized)


@dataclass(frozen=True)
class FieldSampleConfig:
    k: float = 1.0
    volume_factor: float = 1.0
    x_samples: tuple = ()

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if not self.volume_factor > 0:
            raise ValueError(f"volume_factor must be positive, got {self.volume_factor}")
        object.__setattr__(self, "x_samples", tuple(float(x) for x in self.x_samples))


def _check_state(state: StateVector, basis: TwoModeBasis):
    if state.tag != basis.tag:
        raise BasisMismatch(f"state on {state.tag} vs basis {basis.tag}")


def expected_field(
    state: StateVector, cfg: FieldSampleConfig, basis: TwoModeBasis, via: str = "position"
) -> np.ndarray:
    """<A(x)> = sqrt(2/V) (<A_cos> cos kx + <A_sin> sin kx) along the wave vector.

    ``via="amplitude"`` uses <A_cos> = sqrt(2) Re<A>, <A_sin> = -sqrt(2) Im<A>
    for the complex amplitude operator instead of the two coordinate operators.
    """
    _check_state(state, basis)
    if via == "position":
        a_cos = state.expectation(position_operator(basis, "cos", cfg.k)).real
        a_sin = state.expectation(position_operator(basis, "sin", cfg.k)).real
    elif via == "amplitude":
        amp = state.expectation(amplitude_operator(basis, cfg.k))
        a_cos = math.sqrt(2) * amp.real
        a_sin = -math.sqrt(2) * amp.imag
    else:
        raise ValueError(f"via must be 'position' or 'amplitude', got {via!r}")
    kx = cfg.k * np.asarray(cfg.x_samples)
    return math.sqrt(2 / cfg.volume_factor) * (a_cos * np.cos(kx) + a_sin * np.sin(kx))
