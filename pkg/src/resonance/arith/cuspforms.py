"""Exact Fourier coefficients of level-one Hecke eigenforms.

The discriminant form is expanded through Jacobi's identity
``prod (1 - q^n)^24 = (sum_k (-1)^k (2k+1) q^{k(k+1)/2})^8`` and the
products are carried out exactly with Kronecker substitution on big
integers.  Each of the other one-dimensional cusp spaces of level one
(weights 16, 18, 20, 22, 26) is spanned by Delta times an Eisenstein
monomial, so those forms come out of the same machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import gmpy2
import numpy as np

from resonance.arith.primes import primes_upto
from resonance.errors import CoefficientBoundError, ParameterError, UnsupportedFormError

# weight -> (power of E4, power of E6) multiplying Delta
_FORMS = {
    12: (0, 0),
    16: (1, 0),
    18: (0, 1),
    20: (2, 0),
    22: (1, 1),
    26: (2, 1),
}
FORM_ALIASES = {"delta": 12, **{f"delta{k}": k for k in _FORMS}}


def form_weight(form: str) -> int:
    """Weight of a named form (``"delta"``, ``"delta16"``, ...)."""
    try:
        return FORM_ALIASES[form.lower()]
    except KeyError:
        raise UnsupportedFormError(
            f"unknown form {form!r}; supported: {sorted(FORM_ALIASES)}"
        ) from None


def _pack(coeffs: list[int], bits: int) -> gmpy2.mpz:
    """Pack signed ints into one big int with ``bits``-wide slots."""
    nbytes = bits // 8
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    return gmpy2.mpz(int.from_bytes(pos, "little")) - gmpy2.mpz(int.from_bytes(neg, "little"))


def _unpack(value: gmpy2.mpz, count: int, bits: int) -> list[int]:
    """Inverse of :func:`_pack` for slots holding values in ``(-2^(bits-1), 2^(bits-1))``."""
    nbytes = bits // 8
    half = 1 << (bits - 1)
    bias = int.from_bytes(half.to_bytes(nbytes, "little") * count, "little")
    # slots above `count` never influence the lower ones once reduced mod 2^(bits*count)
    low = gmpy2.f_mod(value + bias, gmpy2.mpz(1) << (bits * count))
    raw = int(low).to_bytes(nbytes * count, "little")
    return [int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half for i in range(count)]


def series_mul(a: list[int], b: list[int], n: int) -> list[int]:
    """Product of integer power series, truncated to ``n`` terms.

    Args:
        a: Coefficients of the first series (constant term first).
        b: Coefficients of the second series.
        n: Number of output coefficients.

    Returns:
        The first ``n`` coefficients of ``a * b`` (exact).
    """
    a, b = a[:n], b[:n]
    if not a or not b:
        return [0] * n
    bound = sum(abs(x) for x in a) * max(abs(x) for x in b)
    bits = -(-(bound.bit_length() + 2) // 8) * 8
    prod = _pack(a, bits) * _pack(b, bits)
    out = _unpack(prod, min(n, len(a) + len(b) - 1), bits)
    return out + [0] * (n - len(out))


def _series_pow(a: list[int], k: int, n: int) -> list[int]:
    out = [1] + [0] * (n - 1)
    base = a
    while k:
        if k & 1:
            out = series_mul(out, base, n)
        k >>= 1
        if k:
            base = series_mul(base, base, n)
    return out


def _divisor_power_sums(n: int, k: int) -> list[int]:
    """sigma_k(m) for 0 <= m < n (index 0 unused)."""
    sig = [0] * n
    for d in range(1, n):
        dk = d**k
        for m in range(d, n, d):
            sig[m] += dk
    return sig


def _eisenstein(weight: int, n: int) -> list[int]:
    if weight == 4:
        c, k = 240, 3
    elif weight == 6:
        c, k = -504, 5
    else:
        raise ValueError(weight)
    sig = _divisor_power_sums(n, k)
    return [1] + [c * s for s in sig[1:]]


def _euler_eighth_root(n: int) -> list[int]:
    """Coefficients of prod (1 - q^m)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}."""
    out = [0] * n
    k = 0
    while k * (k + 1) // 2 < n:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


def cuspform_raw(form: str, n_max: int) -> list[int]:
    """Unnormalised integer coefficients ``c(1), ..., c(n_max)``.

    Args:
        form: Form name, see :data:`FORM_ALIASES`.
        n_max: Number of coefficients.

    Returns:
        List ``out`` with ``out[n] = c(n)`` for ``1 <= n <= n_max`` and
        ``out[0] = 0``.
    """
    k = form_weight(form)
    if n_max < 1:
        raise ParameterError(f"n_max must be positive, got {n_max}")
    m = n_max  # coefficient of q^n in Delta is coefficient of q^(n-1) in prod
    eta24 = _series_pow(_euler_eighth_root(m), 8, m)
    a4, a6 = _FORMS[k]
    series = eta24
    for _ in range(a4):
        series = series_mul(series, _eisenstein(4, m), m)
    for _ in range(a6):
        series = series_mul(series, _eisenstein(6, m), m)
    return [0] + series


@dataclass(frozen=True)
class CoefficientSeries:
    """Dirichlet coefficients ``a(1..N)`` of an L-function.

    Attributes:
        label: Identifier used in reports and cache file names.
        values: Complex array of length ``N + 1``; ``values[0]`` is unused.
        multiplicative: Whether ``a`` is multiplicative.
        normalization: Description of the scaling (``"analytic"`` means
            the Ramanujan bound reads ``|a(p)| <= d``).
    """

    label: str
    values: np.ndarray = field(repr=False, compare=False)
    multiplicative: bool = True
    normalization: str = "analytic"

    @property
    def n_max(self) -> int:
        return int(self.values.size - 1)

    def __call__(self, n):
        return self.values[n]

    def at_primes(self, primes: np.ndarray) -> np.ndarray:
        primes = np.asarray(primes, dtype=np.int64)
        if primes.size and primes.max() > self.n_max:
            raise ParameterError(
                f"{self.label}: coefficient at {int(primes.max())} beyond N_max={self.n_max}"
            )
        return self.values[primes]


def cuspform_coefficients(form: str, n_max: int) -> CoefficientSeries:
    """Analytically normalised Hecke eigenvalues ``c(n) / n^((k-1)/2)``.

    The Deligne bound ``|a(p)| <= 2`` is checked at every prime up to
    ``n_max``; a violation means the expansion is wrong and raises.
    """
    k = form_weight(form)
    raw = cuspform_raw(form, n_max)
    n = np.arange(n_max + 1, dtype=float)
    n[0] = 1.0
    vals = np.array([float(c) for c in raw]) / n ** ((k - 1) / 2)
    ps = primes_upto(n_max)
    worst = np.abs(vals[ps]).max() if ps.size else 0.0
    if worst > 2.0 + 1e-9:
        raise CoefficientBoundError(f"|a(p)| reached {worst:.6f} > 2 for {form}")
    vals = vals.astype(complex)
    vals.setflags(write=False)
    label = "delta" if k == 12 else f"delta{k}"
    return CoefficientSeries(label, vals)


def character_series(chi, n_max: int) -> CoefficientSeries:
    """Coefficient series of a Dirichlet character."""
    vals = np.asarray(chi(np.arange(n_max + 1)), dtype=complex).copy()
    vals[0] = 0.0
    vals.setflags(write=False)
    return CoefficientSeries(chi.label, vals)


def zeta_series(n_max: int) -> CoefficientSeries:
    vals = np.ones(n_max + 1, dtype=complex)
    vals[0] = 0.0
    vals.setflags(write=False)
    return CoefficientSeries("zeta", vals)
