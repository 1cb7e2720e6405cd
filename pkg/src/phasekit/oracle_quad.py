"""
Independent check of phase-operator matrix elements by integrating the closed-form
wavefunctions.

The angular integral is done analytically: it is 2 pi when the L values match
the selection rule and exactly zero otherwise. After x = k rho^2 the radial
integrand of an allowed element is x^(1/2) e^(-x) times a polynomial, so a
generalized Gauss-Laguerre rule with alpha = 1/2 integrates it exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .fock_core import ComplexOperator, IndexLike, TwoModeBasis, as_index
from .wavefunc import wavefunction


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    order: int
    alpha: float
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, values) -> float:
        """Approximates the integral of f(x) x^alpha e^-x given values f(nodes)."""
        return float(np.dot(self.weights, values))


def _inverse_sq_sum(x: np.ndarray, order: int, alpha: float) -> np.ndarray:
    # 1 / sum_j p_j(x)^2 over the orthonormal polynomials of the Jacobi matrix.
    # All terms are positive, so small weights keep full relative accuracy.
    # p_j grows like exp(x/2); rescale per node to stay finite at high order.
    prev = np.zeros_like(x)
    cur = np.full_like(x, 1.0 / math.sqrt(math.gamma(alpha + 1)))
    total = cur**2
    log_scale = np.zeros_like(x)
    for j in range(order - 1):
        b_next = math.sqrt((j + 1) * (j + 1 + alpha))
        b_cur = math.sqrt(j * (j + alpha))
        prev, cur = cur, ((x - (2 * j + alpha + 1)) * cur - b_cur * prev) / b_next
        total += cur**2
        big = np.abs(cur) > 1e100
        if big.any():
            s = np.where(big, 1e-100, 1.0)
            prev, cur, total = prev * s, cur * s, total * s * s
            log_scale += np.where(big, 200 * math.log(10), 0.0)
    return np.exp(-np.log(total) - log_scale)


@lru_cache(maxsize=64)
def gauss_laguerre(order: int, alpha: float = 0.0) -> QuadratureRule:
    """Golub-Welsch rule for the weight x^alpha e^-x.

    Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix
    (diagonal 2i+alpha+1, off-diagonal sqrt(i(i+alpha))). The weight of a node is
    Gamma(alpha+1) times the squared first component of its unit eigenvector;
    that eigenvector is the vector of orthonormal polynomials at the node, so
    the weight is 1 / sum_j p_j(x)^2, evaluated by recurrence rather than read
    off the dense eigenvector (whose tiny components are only accurate in an
    absolute sense).
    """
    if order < 1:
        raise ValueError(f"order must be at least 1, got {order}")
    if not alpha > -1:
        raise ValueError(f"alpha must exceed -1, got {alpha}")
    i = np.arange(order, dtype=float)
    diag = 2 * i + alpha + 1
    off = np.sqrt(i[1:] * (i[1:] + alpha))
    nodes = eigh_tridiagonal(diag, off, eigvals_only=True)
    weights = _inverse_sq_sum(nodes, order, float(alpha))
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(order, float(alpha), nodes, weights)


def _check_k(k):
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")


def required_order(row: IndexLike, col: IndexLike) -> int:
    """Smallest alpha=1/2 rule order that is exact for the <row|E|col> integrand."""
    row, col = as_index(row), as_index(col)
    return row.n_radial + col.n_radial + (abs(row.m) + abs(col.m) + 1) // 2


def oracle_phase_element(row: IndexLike, col: IndexLike, k: float = 1.0, order: int = 48) -> complex:
    """<row| E |col> from the polar wavefunctions."""
    _check_k(k)
    row, col = as_index(row), as_index(col)
    if row.m != col.m - 1:
        return 0j
    need = required_order(row, col)
    if order < need:
        raise ValueError(f"order {order} is below the exactness bound {need} for {row}, {col}")
    rule = gauss_laguerre(order, 0.5)
    x = rule.nodes
    wr, wc = wavefunction(row, k), wavefunction(col, k)
    # x^{(|m_r|+|m_c|)/2} = x^{1/2} x^j; the x^{1/2} lives in the weight
    j = (abs(row.m) + abs(col.m) - 1) // 2
    # 2 pi (angle) * (k/pi) (prefactors) * 1/(2k) (rho drho = dx / 2k) = 1
    return complex(rule.integrate(x**j * wr.reduced(x) * wc.reduced(x)))


def oracle_inner_product(a: IndexLike, b: IndexLike, k: float = 1.0, order: int = 48) -> complex:
    """<psi_a|psi_b> with the alpha = |m| rule."""
    _check_k(k)
    a, b = as_index(a), as_index(b)
    if a.m != b.m:
        return 0j
    need = (a.n_radial + b.n_radial) // 2 + 1
    if order < need:
        raise ValueError(f"order {order} is below the exactness bound {need} for {a}, {b}")
    rule = gauss_laguerre(order, float(abs(a.m)))
    x = rule.nodes
    return complex(rule.integrate(wavefunction(a, k).reduced(x) * wavefunction(b, k).reduced(x)))


class ComparisonRow(NamedTuple):
    row: tuple
    col: tuple
    oracle: complex
    operator: complex

    @property
    def abs_diff(self) -> float:
        return abs(self.oracle - self.operator)


def compare_with_operator(
    op: ComplexOperator, basis: TwoModeBasis, margin: int, k: float = 1.0, order: int = 48
) -> List[ComparisonRow]:
    """Allowed elements with both states at total <= n_max - margin, in basis order (column-major)."""
    keep = [s for s in basis.states if s.total <= basis.n_max - margin]
    rows = []
    for col in keep:
        for row in keep:
            if row.m != col.m - 1:
                continue
            rows.append(
                ComparisonRow(
                    (row.n_fwd, row.n_bwd),
                    (col.n_fwd, col.n_bwd),
                    oracle_phase_element(row, col, k, order),
                    complex(op.matrix[basis.index_of[row], basis.index_of[col]]),
                )
            )
    return rows


def max_discrepancy(rows: Iterable[ComparisonRow]) -> float:
    return max((r.abs_diff for r in rows), default=0.0)
