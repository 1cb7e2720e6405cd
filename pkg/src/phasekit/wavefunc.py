"""
Polar wavefunctions of the |n_fwd, n_bwd> states on the (A_cos, A_sin) plane.

    psi(rho, phi) = s * sqrt(k/pi) * sqrt(n_r!/(n_r+|m|)!) * (sqrt(k) rho)^|m|
                    * L_{n_r}^{(|m|)}(k rho^2) * exp(-k rho^2 / 2) * exp(i m phi)

with n_r = min(n_fwd, n_bwd), m = n_fwd - n_bwd and s = (-1)^n_r. The sign makes
the functions agree with states generated by the forward/backward creation
operators, e.g. psi_{1,1} is proportional to (k rho^2 - 1), not (1 - k rho^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock_core import FockIndex, IndexLike, as_index


def laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial L_n^(alpha)(x) by three-term recurrence.

    Works elementwise on arrays.
    """
    if n < 0:
        raise ValueError(f"degree must be non-negative, got {n}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


@dataclass(frozen=True)
class PolarWavefunction:
    n_radial: int
    m: int
    k: float
    sign: int

    @property
    def norm_factor(self) -> float:
        am = abs(self.m)
        return math.exp(0.5 * (math.lgamma(self.n_radial + 1) - math.lgamma(self.n_radial + am + 1)))

    def reduced(self, x):
        """Signed, normalized Laguerre factor as a function of x = k rho^2.

        The radial profile is sqrt(k/pi) * x^(|m|/2) * reduced(x) * exp(-x/2).
        """
        return self.sign * self.norm_factor * laguerre(self.n_radial, abs(self.m), x)

    def radial(self, rho):
        rho = np.asarray(rho, dtype=float)
        x = self.k * rho**2
        out = math.sqrt(self.k / math.pi) * (math.sqrt(self.k) * rho) ** abs(self.m) * self.reduced(x) * np.exp(-x / 2)
        return out if out.ndim else float(out)

    def full(self, rho, phi):
        return self.radial(rho) * np.exp(1j * self.m * np.asarray(phi, dtype=float))

    __call__ = full


def wavefunction(idx: IndexLike, k: float = 1.0) -> PolarWavefunction:
    if not k > 0:
        raise ValueError(f"k must be positive, got {k}")
    idx: FockIndex = as_index(idx)
    n_r = idx.n_radial
    return PolarWavefunction(n_radial=n_r, m=idx.m, k=float(k), sign=-1 if n_r % 2 else 1)


def evaluate_grid(wf: PolarWavefunction, rho_samples, phi_samples) -> np.ndarray:
    """Matrix of wf(rho_i, phi_j), rows indexed by rho."""
    rho = np.asarray(rho_samples, dtype=float)
    phi = np.asarray(phi_samples, dtype=float)
    if np.any(rho < 0):
        raise ValueError("rho samples must be non-negative")
    return np.outer(wf.radial(rho), np.exp(1j * wf.m * phi))
