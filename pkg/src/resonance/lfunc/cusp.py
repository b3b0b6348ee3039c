"""Level-one cusp-form L-functions.

Primary method: the incomplete-gamma expansion of the completed function
``Lambda(s) = (2 pi)^-(s+kappa) Gamma(s+kappa) L(s)``, ``kappa = (k-1)/2``:

    Lambda(s) = sum_n a(n) n^kappa [ (2 pi n)^-(s+kappa) Gamma(s+kappa, 2 pi n)
                                    + eps (2 pi n)^-(1-s+kappa) Gamma(1-s+kappa, 2 pi n) ]

with root number ``eps = (-1)^(k/2)``.  This is exact as n -> infinity; the
terms decay like ``exp(-2 pi n)`` once ``2 pi n`` exceeds ``|s|``.
Dividing by ``Gamma(s + kappa)`` loses about ``pi |t| / (2 ln 10)`` digits,
which mpmath precision absorbs; the coefficients must then be exact, so the
integer Fourier coefficients ``a(n) n^kappa`` are used.

Check method: the Gaussian-smoothed series
``sum a(n) n^-s exp(-(n/N)^2)``, whose deviation from ``L(s)`` is
``-L(s-2) / N^2 + O(N^-4)`` by shifting the Mellin contour.
"""

from __future__ import annotations

import mpmath
import numpy as np

from resonance.errors import ParameterError, UnsupportedRegionError

# |t| beyond this makes the mpmath expansion too slow for routine use
T_SUPPORTED = 120.0


def _precision(t: float) -> int:
    return int(20 + np.pi * abs(t) / (2 * np.log(10)) + 10)


def _integer_coefficient(a: complex, n: int, kappa: float) -> int:
    c = a.real * float(n) ** kappa
    r = round(c)
    if abs(c - r) > 1e-3 * max(1.0, abs(c)) ** 0.5 or abs(a.imag) > 1e-12:
        raise ParameterError(f"coefficient {n} is not an integer after rescaling")
    return int(r)


def cusp_afe(series, weight: int, s: complex, tol: float = 1e-12):
    """Evaluate ``L(s)`` for a level-one form by the incomplete-gamma expansion.

    Args:
        series: Normalised coefficients (``CoefficientSeries``).
        weight: Weight ``k`` of the form.
        s: Point of evaluation.
        tol: Target absolute accuracy.

    Returns:
        ``(value, error_estimate)``.
    """
    s = complex(s)
    if abs(s.imag) > T_SUPPORTED or not -10 <= s.real <= 12:
        raise UnsupportedRegionError(f"cusp-form evaluation supported for |t| <= {T_SUPPORTED}")
    kappa = (weight - 1) / 2
    eps = (-1) ** (weight // 2)
    with mpmath.workdps(_precision(s.imag)):
        ss = mpmath.mpc(s.real, s.imag)
        w1 = ss + kappa
        w2 = 1 - ss + kappa
        two_pi = 2 * mpmath.pi
        # the completed function has size ~ |Gamma(s+kappa)| (2 pi)^-(s+kappa)
        scale = abs(mpmath.gamma(w1) * two_pi ** (-w1))
        total = mpmath.mpc(0)
        absum = mpmath.mpf(0)
        last = mpmath.mpf(0)
        n = 1
        while True:
            if n > series.n_max:
                raise ParameterError(f"need coefficients beyond {series.n_max}")
            c = _integer_coefficient(series.values[n], n, kappa)
            x = two_pi * n
            term = 0
            if c != 0:
                term = c * (
                    x ** (-w1) * mpmath.gammainc(w1, x) + eps * x ** (-w2) * mpmath.gammainc(w2, x)
                )
                total += term
                absum += abs(term)
            # stop once terms decay geometrically and are below tolerance
            if x > abs(w1) + 10 and abs(term) + last < tol * scale * 1e-3:
                break
            last = abs(term)
            n += 1
        value = total * two_pi**w1 / mpmath.gamma(w1)
        # truncation (geometric tail) plus cancellation in the working precision
        lost = absum * mpmath.mpf(10) ** (-mpmath.mp.dps + 3)
        err = (10 * last + lost) * abs(two_pi**w1 / mpmath.gamma(w1))
        return complex(value), float(err) + 1e-15 * abs(complex(value))


def cusp_smoothed(series, s: complex, length: float | None = None):
    """Gaussian-smoothed Dirichlet series, valid for ``Re s > 1/2``.

    The bias ``L(s-2)/N^2`` is bounded with the convexity estimate
    ``|L(s-2)| <= (|t|/2pi + 3)^(2(5/2-sigma)) zeta(9/2-sigma-1/2)^2``
    obtained from the functional equation.

    Returns:
        ``(value, error_estimate)``.
    """
    s = complex(s)
    sigma, t = s.real, abs(s.imag)
    if sigma <= 0.5:
        raise UnsupportedRegionError("smoothed series needs Re s > 1/2")
    bound = (t / (2 * np.pi) + 3) ** (2 * (2.5 - sigma)) * float(mpmath.zeta(3.0 - sigma + 1.0)) ** 2
    if length is None:
        length = np.sqrt(bound / 1e-7)
    top = int(np.ceil(6.5 * length))
    if top > series.n_max:
        length = series.n_max / 6.5
        top = series.n_max
    n = np.arange(1, top + 1, dtype=float)
    terms = series.values[1 : top + 1] * np.exp(-s * np.log(n) - (n / length) ** 2)
    return complex(np.sum(terms)), float(bound / length**2)
