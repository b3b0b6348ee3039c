"""Signed prime sums that set the exponent of the off-line pipeline.

For an off-line resonator with ``C r(p) = sum_large a_g(p) - sum_small a_g(p)``
and each function ``L_h`` put on the side ``j(h)`` (1 for the large list,
0 for the small list), the quantity

    (-1)^j(h) sum_p Re(conj r(p) a_h(p)) / ((1 + |r(p)|^2) p^sigma)

should be negative and of size ``(log T)^(1-sigma) / log log T``.  Writing
out ``r`` splits it into a diagonal term (``g = h``), cross terms within
the same list and cross terms against the other list.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from resonance.errors import ParameterError


def comparator(T: float, sigma: float) -> float:
    """``(log T)^(1-sigma) / log log T``, or ``log log log T`` at ``sigma = 1``."""
    lT = math.log(T)
    if sigma == 1:
        return math.log(math.log(lT))
    return lT ** (1 - sigma) / math.log(lT)


@dataclass
class SignedSumEntry:
    label: str
    side: str
    value: float
    diagonal: float
    cross_same: float
    cross_other: float
    ratio: float

    @property
    def diagonal_dominant(self) -> bool:
        return abs(self.diagonal) > abs(self.cross_same) + abs(self.cross_other)


@dataclass
class SignedPrimeSumReport:
    """Per-function signed sums.

    Attributes:
        entries: One :class:`SignedSumEntry` per function, large list first.
        comparator: The scale the sums are compared to.
        sigma, T, C: Parameters.
    """

    entries: list
    comparator: float
    sigma: float
    T: float
    C: float
    prime_count: int = 0
    notes: list = field(default_factory=list)

    @property
    def all_negative(self) -> bool:
        return all(e.value < 0 for e in self.entries)

    @property
    def diagonal_dominant(self) -> bool:
        return all(e.diagonal_dominant for e in self.entries)

    @property
    def D_measured(self) -> float | None:
        """``min_h (-value_h / comparator)``; ``None`` without entries."""
        if not self.entries:
            return None
        return float(min(-e.ratio for e in self.entries))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["all_negative"] = self.all_negative
        d["diagonal_dominant"] = self.diagonal_dominant
        d["D_measured"] = self.D_measured
        return d


def signed_prime_sums(specs_large, specs_small, res, sigma: float, T: float) -> SignedPrimeSumReport:
    """Evaluate the signed sums for every function in both lists.

    Args:
        specs_large: Functions to be made large (``j = 1``).
        specs_small: Functions to be made small (``j = 0``).
        res: The off-line resonator built from the same lists.
        sigma: Real part.
        T: Height (for the comparator).

    Returns:
        :class:`SignedPrimeSumReport`.
    """
    if res.kind != "offline":
        raise ParameterError("signed sums concern the off-line resonator")
    specs = list(specs_large) + list(specs_small)
    signs = [1] * len(specs_large) + [-1] * len(specs_small)
    C = float(res.params.get("C", 1.0))
    comp = comparator(T, sigma)
    if res.empty:
        entries = [SignedSumEntry(s.label, "large" if sg > 0 else "small", 0.0, 0.0, 0.0, 0.0, 0.0) for s, sg in zip(specs, signs)]
        return SignedPrimeSumReport(entries, comp, sigma, T, C, 0, ["empty resonator support"])
    p = res.primes.astype(float)
    denom = (1 + np.abs(res.r) ** 2) * p**sigma * C
    coeffs = [s.at_primes(res.primes) for s in specs]
    entries = []
    for h, (spec, sh) in enumerate(zip(specs, signs)):
        diag = same = other = 0.0
        for g, sg in enumerate(signs):
            term = -sh * sg * float(np.sum((np.conj(coeffs[g]) * coeffs[h]).real / denom))
            if g == h:
                diag += term
            elif sg == sh:
                same += term
            else:
                other += term
        value = diag + same + other
        entries.append(SignedSumEntry(spec.label, "large" if sh > 0 else "small", value, diag, same, other, value / comp))
    return SignedPrimeSumReport(entries, comp, sigma, T, C, int(p.size))


def direct_signed_sum(spec, side_sign: int, res, sigma: float) -> float:
    """``(-1)^j sum_p Re(conj r a_h) / ((1+|r|^2) p^sigma)`` straight from ``r`` (oracle)."""
    if res.empty:
        return 0.0
    p = res.primes.astype(float)
    a = spec.at_primes(res.primes)
    return float(-side_sign * np.sum((np.conj(res.r) * a).real / ((1 + np.abs(res.r) ** 2) * p**sigma)))
