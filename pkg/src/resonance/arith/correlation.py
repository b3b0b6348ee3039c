"""Prime-sum correlations of coefficient sequences."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from resonance.arith.primes import primes_upto


class Correlation(NamedTuple):
    value: complex
    empty: bool
    prime_count: int


def coeff_correlation(a, b, x: float) -> Correlation:
    """Normalised prime correlation ``(log x / x) sum_{p<=x} a(p) conj(b(p))``.

    Args:
        a: Anything with ``at_primes(primes)`` (a coefficient series or an
            L-function spec).
        b: Same for the second sequence.
        x: Cut-off.

    Returns:
        :class:`Correlation`; ``empty`` is set (and ``value`` is 0) when no
        prime is ``<= x``.
    """
    ps = primes_upto(x)
    if ps.size == 0:
        return Correlation(0j, True, 0)
    terms = a.at_primes(ps) * np.conj(b.at_primes(ps))
    return Correlation(complex(np.sum(terms) * np.log(x) / x), False, int(ps.size))


def choose_x_eps(specs, eps: float = 0.1, x_max: float = 1e6) -> float | None:
    """Smallest power of ten past which the orthonormality estimates hold.

    Checks that the normalised diagonal correlations are within ``eps`` of
    their means and off-diagonal ones within ``eps`` of 0 at every power of
    ten from the candidate up to ``x_max``.

    Returns:
        The threshold, or ``None`` if it is not reached by ``x_max``.
    """
    exps = range(1, int(np.floor(np.log10(x_max))) + 1)
    ok = []
    for e in exps:
        x = 10.0**e
        good = True
        for i, s in enumerate(specs):
            for j, r in enumerate(specs):
                c = coeff_correlation(s, r, x).value
                target = s.kappa if i == j else 0.0
                good &= abs(c - target) <= eps
        ok.append(good)
    for k, e in enumerate(exps):
        if all(ok[k:]):
            return 10.0**e
    return None
