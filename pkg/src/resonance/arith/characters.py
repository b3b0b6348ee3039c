"""Dirichlet characters from an explicit decomposition of (Z/qZ)^*.

The unit group is written as a product of cyclic factors, one per odd prime
power (generated by a primitive root) and up to two for the 2-part
(generated by -1 and 5).  A character is the vector of exponents it assigns
to those generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import gcd

import numpy as np

from resonance.arith.primes import factorize
from resonance.errors import InvalidIndexError, ParameterError


def root_of_unity(j: int, m: int) -> complex:
    """``exp(2 pi i j / m)`` with exact values at multiples of a quarter turn."""
    j %= m
    if (4 * j) % m == 0:
        return (1, 1j, -1, -1j)[4 * j // m]
    ang = 2.0 * np.pi * j / m
    return complex(np.cos(ang), np.sin(ang))


def _primitive_root(p: int) -> int:
    phi = p - 1
    fs = list(factorize(phi)) if phi > 1 else []
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in fs):
            return g
    return 1  # p == 2


@dataclass(frozen=True)
class _CyclicFactor:
    modulus: int  # prime power the factor lives in
    generator: int
    order: int


def unit_group_factors(q: int) -> list[_CyclicFactor]:
    """Cyclic factors of (Z/qZ)^* in a fixed order (increasing prime)."""
    out = []
    for p, e in sorted(factorize(q).items()) if q > 1 else []:
        pe = p**e
        if p == 2:
            if e == 2:
                out.append(_CyclicFactor(pe, pe - 1, 2))
            elif e >= 3:
                out.append(_CyclicFactor(pe, pe - 1, 2))
                out.append(_CyclicFactor(pe, 5, 2 ** (e - 2)))
        else:
            g = _primitive_root(p)
            # a primitive root mod p lifts to one mod p^2 unless g^(p-1) = 1 mod p^2
            if e > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            out.append(_CyclicFactor(pe, g, pe - pe // p))
    return out


def _discrete_logs(q: int, factors: list[_CyclicFactor]) -> dict[int, tuple[int, ...]]:
    """Exponent vector of every unit mod q with respect to the generators."""
    per_factor = []
    i = 0
    while i < len(factors):
        f = factors[i]
        if f.modulus % 2 == 0 and i + 1 < len(factors) and factors[i + 1].modulus == f.modulus:
            g = factors[i + 1]
            table = {}
            for a in range(2):
                for b in range(g.order):
                    table[(pow(f.generator, a, f.modulus) * pow(g.generator, b, f.modulus)) % f.modulus] = (a, b)
            per_factor.append((f.modulus, table))
            i += 2
            continue
        table = {}
        x = 1
        for k in range(f.order):
            table[x] = (k,)
            x = x * f.generator % f.modulus
        per_factor.append((f.modulus, table))
        i += 1
    logs = {}
    for a in range(1, q + 1):
        if gcd(a, q) != 1:
            continue
        vec: tuple[int, ...] = ()
        for mod, table in per_factor:
            vec += table[a % mod]
        logs[a % q] = vec
    return logs


@dataclass(frozen=True)
class DirichletCharacter:
    """A Dirichlet character given by its value table.

    Attributes:
        modulus: q.
        index: Exponent vector on the generators of (Z/qZ)^*.
        orders: Orders of those generators.
        values: Complex array of length q with ``values[n % q] = chi(n)``.
    """

    modulus: int
    index: tuple[int, ...]
    orders: tuple[int, ...]
    values: np.ndarray = field(repr=False, compare=False)

    def __call__(self, n):
        return self.values[np.asarray(n) % self.modulus]

    @property
    def is_principal(self) -> bool:
        return all(i % o == 0 for i, o in zip(self.index, self.orders))

    @property
    def order(self) -> int:
        out = 1
        for i, o in zip(self.index, self.orders):
            k = o // gcd(i % o, o) if i % o else 1
            out = out * k // gcd(out, k)
        return out

    @property
    def is_real(self) -> bool:
        return bool(np.all(np.abs(self.values.imag) == 0.0))

    @property
    def parity(self) -> int:
        """0 for even characters, 1 for odd ones."""
        if self.modulus <= 2:
            return 0
        return 0 if self.values[self.modulus - 1].real > 0 else 1

    @property
    def label(self) -> str:
        return f"chi_{self.modulus}[{','.join(map(str, self.index))}]"

    def conjugate(self) -> "DirichletCharacter":
        idx = tuple((-i) % o for i, o in zip(self.index, self.orders))
        return dirichlet_character(self.modulus, idx)


def dirichlet_character(q: int, index) -> DirichletCharacter:
    """Build the character mod ``q`` with generator exponents ``index``.

    Args:
        q: Modulus, ``q >= 1``.
        index: Sequence of exponents, one per cyclic factor of (Z/qZ)^*
            (empty for q = 1, 2).  An int is accepted when there is at most
            one factor.

    Returns:
        The :class:`DirichletCharacter`.
    """
    q = int(q)
    if q < 1:
        raise ParameterError(f"modulus must be positive, got {q}")
    factors = unit_group_factors(q)
    if isinstance(index, (int, np.integer)):
        index = (int(index),) if factors else ()
        if not factors and index:
            raise InvalidIndexError(f"modulus {q} has a trivial unit group")
    index = tuple(int(i) for i in index)
    if len(index) != len(factors):
        raise InvalidIndexError(
            f"modulus {q} needs {len(factors)} generator exponents, got {len(index)}"
        )
    orders = tuple(f.order for f in factors)
    for i, o in zip(index, orders):
        if not 0 <= i < o:
            raise InvalidIndexError(f"exponent {i} outside [0, {o}) for modulus {q}")
    logs = _discrete_logs(q, factors)
    values = np.zeros(q, dtype=complex)
    for a, vec in logs.items():
        # common denominator keeps exact quarter-turn values exact
        m = 1
        for o in orders:
            m = m * o // gcd(m, o)
        j = sum(v * i * (m // o) for v, i, o in zip(vec, index, orders))
        values[a] = root_of_unity(j, m)
    if q == 1:
        values[0] = 1.0
    values.setflags(write=False)
    return DirichletCharacter(q, index, orders, values)


def all_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod ``q``, principal first."""
    orders = [f.order for f in unit_group_factors(q)]
    return [dirichlet_character(q, idx) for idx in product(*(range(o) for o in orders))]
