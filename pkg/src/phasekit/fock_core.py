"""
Truncated two-mode Fock space for one (+k, -k) photon mode pair.

States |n_fwd, n_bwd> are kept when n_fwd + n_bwd <= n_max. Ordering is by
total occupation, then by ascending n_fwd, so the basis for n_max is a prefix
of the basis for n_max + 1.

Raising operators drop any amplitude that would leave the basis (projector
convention). Identities involving one ladder product therefore only hold on
states with total <= n_max - 1, two products on total <= n_max - 2; see
``TwoModeBasis.interior``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Tuple, Union

import numpy as np

from .errors import BasisMismatch

FORWARD = "fwd"
BACKWARD = "bwd"


@dataclass(frozen=True, order=True)
class FockIndex:
    """Occupation numbers of the forward (+k) and backward (-k) modes."""

    n_fwd: int
    n_bwd: int

    def __post_init__(self):
        if self.n_fwd < 0 or self.n_bwd < 0:
            raise ValueError(f"occupation numbers must be non-negative, got {self}")

    @property
    def total(self) -> int:
        return self.n_fwd + self.n_bwd

    @property
    def m(self) -> int:
        """Eigenvalue of the angular momentum L (momentum / k)."""
        return self.n_fwd - self.n_bwd

    @property
    def n_radial(self) -> int:
        return min(self.n_fwd, self.n_bwd)

    def __iter__(self):
        yield self.n_fwd
        yield self.n_bwd


IndexLike = Union[FockIndex, Tuple[int, int]]


def as_index(idx: IndexLike) -> FockIndex:
    if isinstance(idx, FockIndex):
        return idx
    n_fwd, n_bwd = idx
    return FockIndex(int(n_fwd), int(n_bwd))


@dataclass(frozen=True)
class TwoModeBasis:
    n_max: int
    states: Tuple[FockIndex, ...] = field(repr=False)
    index_of: dict = field(repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.states)

    @property
    def tag(self) -> str:
        return f"two-mode:{self.n_max}"

    @cached_property
    def totals(self) -> np.ndarray:
        return np.array([s.total for s in self.states])

    @cached_property
    def m_values(self) -> np.ndarray:
        return np.array([s.m for s in self.states])

    @cached_property
    def n_fwd(self) -> np.ndarray:
        return np.array([s.n_fwd for s in self.states])

    @cached_property
    def n_bwd(self) -> np.ndarray:
        return np.array([s.n_bwd for s in self.states])

    def index(self, idx: IndexLike) -> int:
        return self.index_of[as_index(idx)]

    def interior(self, margin: int) -> np.ndarray:
        """Boolean mask of states with total <= n_max - margin."""
        return self.totals <= self.n_max - margin

    def __contains__(self, idx) -> bool:
        return as_index(idx) in self.index_of

    def __len__(self) -> int:
        return self.dim


def build_basis(n_max: int) -> TwoModeBasis:
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    states = tuple(
        FockIndex(n_fwd, total - n_fwd)
        for total in range(n_max + 1)
        for n_fwd in range(total + 1)
    )
    return TwoModeBasis(n_max, states, {s: i for i, s in enumerate(states)})


@dataclass(frozen=True, eq=False)
class ComplexOperator:
    """Dense complex matrix acting on the basis identified by ``tag``."""

    matrix: np.ndarray
    tag: str

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {mat.shape}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def _check(self, other: "ComplexOperator"):
        if other.tag != self.tag:
            raise BasisMismatch(f"operators act on different bases: {self.tag} vs {other.tag}")

    def dag(self) -> "ComplexOperator":
        return ComplexOperator(self.matrix.conj().T, self.tag)

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            if other.tag != self.tag:
                raise BasisMismatch(f"state on {other.tag} vs operator on {self.tag}")
            return StateVector(self.matrix @ other.coeffs, self.tag, normalized=False)
        self._check(other)
        return ComplexOperator(self.matrix @ other.matrix, self.tag)

    def __add__(self, other):
        self._check(other)
        return ComplexOperator(self.matrix + other.matrix, self.tag)

    def __sub__(self, other):
        self._check(other)
        return ComplexOperator(self.matrix - other.matrix, self.tag)

    def __mul__(self, scalar):
        return ComplexOperator(self.matrix * scalar, self.tag)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return ComplexOperator(self.matrix / scalar, self.tag)

    def __neg__(self):
        return ComplexOperator(-self.matrix, self.tag)

    def __getitem__(self, key):
        return self.matrix[key]


@dataclass(frozen=True, eq=False)
class StateVector:
    """Coefficient vector over a tagged basis.

    ``normalized`` is False for intermediates such as ``op @ state``.
    """

    coeffs: np.ndarray
    tag: str
    normalized: bool = True

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1:
            raise ValueError("state coefficients must be one-dimensional")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "StateVector") -> complex:
        if other.tag != self.tag:
            raise BasisMismatch(f"states on {self.tag} vs {other.tag}")
        return complex(np.vdot(self.coeffs, other.coeffs))

    def expectation(self, op: ComplexOperator) -> complex:
        if op.tag != self.tag:
            raise BasisMismatch(f"state on {self.tag} vs operator on {op.tag}")
        return complex(np.vdot(self.coeffs, op.matrix @ self.coeffs))


def commutator(a: ComplexOperator, b: ComplexOperator) -> ComplexOperator:
    return a @ b - b @ a


def identity(basis: TwoModeBasis) -> ComplexOperator:
    return ComplexOperator(np.eye(basis.dim), basis.tag)


def ladder_matrix(basis: TwoModeBasis, mode: str, kind: str) -> ComplexOperator:
    """Annihilation (``kind="lower"``) or creation (``"raise"``) operator of one mode."""
    if mode not in (FORWARD, BACKWARD):
        raise ValueError(f"mode must be {FORWARD!r} or {BACKWARD!r}, got {mode!r}")
    if kind not in ("lower", "raise"):
        raise ValueError(f"kind must be 'lower' or 'raise', got {kind!r}")
    mat = np.zeros((basis.dim, basis.dim))
    for col, s in enumerate(basis.states):
        n = s.n_fwd if mode == FORWARD else s.n_bwd
        if n == 0:
            continue
        target = FockIndex(s.n_fwd - 1, s.n_bwd) if mode == FORWARD else FockIndex(s.n_fwd, s.n_bwd - 1)
        mat[basis.index_of[target], col] = math.sqrt(n)
    if kind == "raise":
        # every in-basis raise is the transpose of an in-basis lower
        mat = mat.T
    return ComplexOperator(mat, basis.tag)


def transformed_ladder(basis: TwoModeBasis, which: str) -> ComplexOperator:
    """a_cos = (a_fwd + a_bwd)/sqrt(2) or a_sin = i (a_fwd - a_bwd)/sqrt(2)."""
    a_f = ladder_matrix(basis, FORWARD, "lower")
    a_b = ladder_matrix(basis, BACKWARD, "lower")
    if which == "cos":
        return (a_f + a_b) / math.sqrt(2)
    if which == "sin":
        return (a_f - a_b) * (1j / math.sqrt(2))
    raise ValueError(f"which must be 'cos' or 'sin', got {which!r}")


def _check_k(k: float):
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")


def position_operator(basis: TwoModeBasis, which: str, k: float = 1.0) -> ComplexOperator:
    """Field-amplitude coordinate A_cos or A_sin = (a + a^dagger)/sqrt(2k)."""
    _check_k(k)
    a = transformed_ladder(basis, which)
    return (a + a.dag()) / math.sqrt(2 * k)


def momentum_operator(basis: TwoModeBasis, which: str, k: float = 1.0) -> ComplexOperator:
    """Conjugate momentum p_cos or p_sin = -i sqrt(k/2) (a - a^dagger)."""
    _check_k(k)
    a = transformed_ladder(basis, which)
    return (a - a.dag()) * (-1j * math.sqrt(k / 2))


def hamiltonian(basis: TwoModeBasis, k: float = 1.0, form: str = "planewave") -> ComplexOperator:
    _check_k(k)
    if form == "planewave":
        return ComplexOperator(np.diag(k * (basis.totals + 1.0)), basis.tag)
    if form == "cossin":
        a_c = transformed_ladder(basis, "cos")
        a_s = transformed_ladder(basis, "sin")
        return (a_c.dag() @ a_c + a_s.dag() @ a_s + identity(basis)) * k
    raise ValueError(f"form must be 'planewave' or 'cossin', got {form!r}")


def angular_momentum(basis: TwoModeBasis, form: str = "diagonal") -> ComplexOperator:
    """L = n_fwd - n_bwd; ``form="ladder"`` builds i(a_cos a_sin^dag - a_cos^dag a_sin)."""
    if form == "diagonal":
        return ComplexOperator(np.diag(basis.m_values.astype(float)), basis.tag)
    if form == "ladder":
        a_c = transformed_ladder(basis, "cos")
        a_s = transformed_ladder(basis, "sin")
        return (a_c @ a_s.dag() - a_c.dag() @ a_s) * 1j
    raise ValueError(f"form must be 'diagonal' or 'ladder', got {form!r}")


def fock_state(basis: TwoModeBasis, idx: IndexLike) -> StateVector:
    idx = as_index(idx)
    if idx.total > basis.n_max:
        raise ValueError(f"{idx} lies outside the basis with n_max={basis.n_max}")
    coeffs = np.zeros(basis.dim, dtype=complex)
    coeffs[basis.index_of[idx]] = 1.0
    return StateVector(coeffs, basis.tag)


def ladder_built_state(basis: TwoModeBasis, idx: IndexLike) -> StateVector:
    """(a_fwd^dag)^n_fwd (a_bwd^dag)^n_bwd |0> / sqrt(n_fwd! n_bwd!) by explicit products."""
    idx = as_index(idx)
    if idx.total > basis.n_max:
        raise ValueError(f"{idx} lies outside the basis with n_max={basis.n_max}")
    up_f = ladder_matrix(basis, FORWARD, "raise").matrix
    up_b = ladder_matrix(basis, BACKWARD, "raise").matrix
    vec = np.zeros(basis.dim, dtype=complex)
    vec[0] = 1.0
    for _ in range(idx.n_bwd):
        vec = up_b @ vec
    for _ in range(idx.n_fwd):
        vec = up_f @ vec
    vec /= math.sqrt(math.factorial(idx.n_fwd) * math.factorial(idx.n_bwd))
    return StateVector(vec, basis.tag)


def superposition(basis: TwoModeBasis, amplitudes: Iterable[Tuple[IndexLike, complex]]) -> StateVector:
    """Normalized superposition of Fock states given as (index, amplitude) pairs."""
    coeffs = np.zeros(basis.dim, dtype=complex)
    for idx, amp in amplitudes:
        coeffs[basis.index(idx)] += amp
    norm = np.linalg.norm(coeffs)
    if norm == 0:
        raise ValueError("superposition has zero norm")
    return StateVector(coeffs / norm, basis.tag)
