"""Descriptions of the L-functions the library can evaluate."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from resonance.arith.cache import cache_read, cache_write, default_cache_dir
from resonance.arith.characters import DirichletCharacter, dirichlet_character
from resonance.arith.cuspforms import CoefficientSeries, cuspform_coefficients, form_weight
from resonance.arith.primes import prime_power_decomposition
from resonance.errors import CacheMissError, ParameterError

KINDS = ("zeta", "dirichlet", "cusp", "one")


@dataclass(frozen=True)
class LFunctionSpec:
    """An L-function with a polynomial Euler product.

    Attributes:
        label: Short identifier (``"zeta"``, ``"chi_4[1]"``, ``"delta"``).
        kind: One of ``zeta``, ``dirichlet``, ``cusp`` or ``one`` (the
            constant function 1, used as a trivial denominator).
        degree: Number of local roots.
        kappa: Mean square of the prime coefficients (1 for every
            primitive L-function here).
        theta: Bound towards Ramanujan; 0 for all supported families.
        pole_order: Order of the pole at ``s = 1``.
        character: The character for ``kind == "dirichlet"``.
        series: Normalised coefficients for ``kind == "cusp"``.
        weight: Weight of the cusp form.
    """

    label: str
    kind: str
    degree: int
    kappa: float = 1.0
    theta: float = 0.0
    pole_order: int = 0
    character: DirichletCharacter | None = field(default=None, compare=False)
    series: CoefficientSeries | None = field(default=None, compare=False, repr=False)
    weight: int | None = None

    # -- coefficients -------------------------------------------------
    def coefficients(self, n) -> np.ndarray:
        """``a(n)`` for an integer array ``n >= 1``."""
        n = np.asarray(n, dtype=np.int64)
        if self.kind == "zeta":
            return np.ones(n.shape, dtype=complex)
        if self.kind == "one":
            return (n == 1).astype(complex)
        if self.kind == "dirichlet":
            return self.character(n)
        if n.size and n.max() > self.series.n_max:
            raise ParameterError(
                f"{self.label}: coefficients known only up to {self.series.n_max}"
            )
        return self.series.values[n]

    def at_primes(self, primes) -> np.ndarray:
        return self.coefficients(primes)

    def local_roots(self, p: int) -> np.ndarray:
        """Satake roots ``alpha_j(p)`` (zeros included for ramified primes)."""
        if self.kind == "one":
            return np.zeros(0, dtype=complex)
        if self.kind in ("zeta", "dirichlet"):
            return np.array([self.coefficients([p])[0]], dtype=complex)
        a = complex(self.coefficients([p])[0])
        disc = np.sqrt(complex(a * a - 4.0))
        return np.array([(a + disc) / 2, (a - disc) / 2], dtype=complex)

    def log_coefficients(self, n) -> np.ndarray:
        """``b(n)`` in ``log L(s) = sum b(n) n^-s``: ``sum_j alpha_j(p)^k / k`` at ``p^k``."""
        n = np.asarray(n, dtype=np.int64)
        base, expo = prime_power_decomposition(n)
        out = np.zeros(n.shape, dtype=complex)
        for i in np.nonzero(expo)[0]:
            roots = self.local_roots(int(base[i]))
            k = int(expo[i])
            out[i] = np.sum(roots**k) / k
        return out

    @property
    def max_coefficient_n(self) -> float:
        return float("inf") if self.kind != "cusp" else float(self.series.n_max)

    def describe(self) -> dict:
        out = {"label": self.label, "kind": self.kind, "degree": self.degree}
        if self.character is not None:
            out["modulus"] = self.character.modulus
            out["index"] = list(self.character.index)
        if self.weight is not None:
            out["weight"] = self.weight
            out["n_max"] = self.series.n_max
        return out


def zeta_spec() -> LFunctionSpec:
    return LFunctionSpec("zeta", "zeta", 1, pole_order=1)


def one_spec() -> LFunctionSpec:
    """The constant function 1 (empty Euler product)."""
    return LFunctionSpec("one", "one", 0, kappa=0.0)


def dirichlet_spec(chi: DirichletCharacter | tuple) -> LFunctionSpec:
    """Spec for ``L(s, chi)``; accepts a character or ``(q, index)``."""
    if not isinstance(chi, DirichletCharacter):
        chi = dirichlet_character(*chi)
    pole = 1 if chi.is_principal else 0
    return LFunctionSpec(chi.label, "dirichlet", 1, pole_order=pole, character=chi)


def cusp_spec(form: str = "delta", n_max: int = 20000, cache_dir=None, use_cache: bool = True) -> LFunctionSpec:
    """Spec for a level-one Hecke eigenform.

    Coefficients are read from the cache when present and written to it
    after a fresh computation (``use_cache=False`` skips both).
    """
    k = form_weight(form)
    label = "delta" if k == 12 else f"delta{k}"
    series = None
    directory = cache_dir if cache_dir is not None else default_cache_dir()
    if use_cache:
        try:
            series = cache_read(directory, label, n_max)
        except CacheMissError:
            series = None
    if series is None:
        series = cuspform_coefficients(form, n_max)
        if use_cache:
            try:
                cache_write(directory, series)
            except OSError:
                pass  # read-only cache location; the computed series is still valid
    return LFunctionSpec(label, "cusp", 2, series=series, weight=k)


def parse_spec(text: str, cusp_n_max: int = 20000, cache_dir=None) -> LFunctionSpec:
    """Parse ``zeta``, ``one``, ``dirichlet:q:i[,j]`` or ``cusp:form[:N]``."""
    parts = text.strip().split(":")
    head = parts[0].lower()
    if head == "zeta" and len(parts) == 1:
        return zeta_spec()
    if head == "one" and len(parts) == 1:
        return one_spec()
    if head in ("dirichlet", "chi") and len(parts) in (2, 3):
        q = int(parts[1])
        idx = tuple(int(x) for x in parts[2].split(",")) if len(parts) == 3 and parts[2] else ()
        return dirichlet_spec(dirichlet_character(q, idx))
    if head == "cusp" and len(parts) in (2, 3):
        n_max = int(parts[2]) if len(parts) == 3 else cusp_n_max
        return cusp_spec(parts[1], n_max, cache_dir=cache_dir)
    raise ParameterError(f"cannot parse L-function {text!r}")
