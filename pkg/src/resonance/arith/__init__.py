"""Arithmetic primitives: primes, characters, cusp-form coefficients, cache."""

from resonance.arith.cache import CACHE_ENV, cache_read, cache_write, default_cache_dir
from resonance.arith.characters import DirichletCharacter, all_characters, dirichlet_character
from resonance.arith.correlation import Correlation, choose_x_eps, coeff_correlation
from resonance.arith.cuspforms import (
    CoefficientSeries,
    character_series,
    cuspform_coefficients,
    cuspform_raw,
    form_weight,
    zeta_series,
)
from resonance.arith.primes import PrimeTable, primes_between, primes_upto, sieve_primes

__all__ = [
    "CACHE_ENV",
    "CoefficientSeries",
    "Correlation",
    "DirichletCharacter",
    "PrimeTable",
    "all_characters",
    "cache_read",
    "cache_write",
    "character_series",
    "choose_x_eps",
    "coeff_correlation",
    "cuspform_coefficients",
    "cuspform_raw",
    "default_cache_dir",
    "dirichlet_character",
    "form_weight",
    "primes_between",
    "primes_upto",
    "sieve_primes",
    "zeta_series",
]
