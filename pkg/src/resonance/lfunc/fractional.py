"""Coefficients of fractional powers of local Euler factors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from resonance.errors import ParameterError

NU_MAX = 8


def tau_q(q, k: int) -> float:
    """Generalised divisor function ``Gamma(q + k) / (k! Gamma(q))``.

    Computed by the recurrence ``tau_q(k) = tau_q(k-1) (q + k - 1) / k``.
    Exact (a ``Fraction``) when ``q`` is a ``Fraction`` or ``int``.
    """
    if k < 0:
        raise ParameterError(f"k must be nonnegative, got {k}")
    exact = isinstance(q, (int, Fraction))
    out = Fraction(1) if exact else 1.0
    for j in range(1, k + 1):
        out = out * (q + j - 1) / j
    return out


def binomial_series(alpha: complex, q, nu_max: int = NU_MAX) -> np.ndarray:
    """Coefficients of ``(1 - alpha X)^-q`` up to ``X^nu_max``."""
    out = np.empty(nu_max + 1, dtype=complex)
    out[0] = 1.0
    for k in range(1, nu_max + 1):
        out[k] = out[k - 1] * (float(q) + k - 1) / k * alpha
    return out


def local_power_series(roots, q, nu_max: int = NU_MAX) -> np.ndarray:
    """Coefficients of ``prod_j (1 - alpha_j X)^-q`` up to ``X^nu_max``."""
    out = np.zeros(nu_max + 1, dtype=complex)
    out[0] = 1.0
    for alpha in np.atleast_1d(roots):
        out = np.convolve(out, binomial_series(complex(alpha), q, nu_max))[: nu_max + 1]
    return out


@dataclass(frozen=True)
class FractionalCoefficients:
    """Local coefficients ``c(p^nu)`` of ``prod_h L_h(s)^q`` at one prime.

    Attributes:
        q: The exponent.
        p: The prime.
        coeffs: Complex array ``c(p^0), ..., c(p^nu_max)``.
        in_support: Whether ``p`` lies in the resonator support (the prime
            is then treated separately in the moment computation).
    """

    q: float
    p: int
    coeffs: np.ndarray
    in_support: bool = False

    @property
    def c1(self) -> complex:
        return complex(self.coeffs[1])


def fractional_coefficients(specs, q, p: int, nu_max: int = NU_MAX, in_support: bool = False) -> FractionalCoefficients:
    """Coefficients of the ``q``-th power of the local factor of ``prod L_h`` at ``p``.

    Args:
        specs: L-function specs whose local roots at ``p`` are combined.
        q: Positive real exponent.
        p: Prime.
        nu_max: Highest power of ``p`` kept.
        in_support: Flag recorded on the result.

    Returns:
        :class:`FractionalCoefficients`; ``c(p) = q sum_h a_h(p)``.
    """
    if float(q) <= 0:
        raise ParameterError(f"q must be positive, got {q}")
    roots = np.concatenate([np.asarray(s.local_roots(p), dtype=complex) for s in specs]) if specs else np.zeros(0)
    return FractionalCoefficients(float(q), int(p), local_power_series(roots, q, nu_max), in_support)
