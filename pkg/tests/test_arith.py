import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resonance.arith import (
    all_characters,
    cache_read,
    cache_write,
    coeff_correlation,
    cuspform_coefficients,
    cuspform_raw,
    dirichlet_character,
    primes_between,
    sieve_primes,
    zeta_series,
)
from resonance.arith.cache import cache_path
from resonance.arith.primes import factorize
from resonance.errors import CacheMissError, EmptyDomainError, IntegrityError, InvalidIndexError
from resonance.lfunc import dirichlet_spec, zeta_spec


def _trial_division_primes(limit):
    return [n for n in range(2, limit + 1) if all(n % d for d in range(2, math.isqrt(n) + 1))]


def _bytearray_sieve_count(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return sum(flags)


def _tau_by_product(n_max):
    """Coefficients of q prod (1 - q^n)^24 by naive integer multiplication."""
    series = [1] + [0] * (n_max - 1)
    for n in range(1, n_max):
        for _ in range(24):
            for k in range(n_max - 1, n - 1, -1):
                series[k] -= series[k - n]
    return [0] + series  # shift by q


# -- primes ---------------------------------------------------------------------


def test_sieve_small_cases():
    assert sieve_primes(10).primes.tolist() == [2, 3, 5, 7]
    assert sieve_primes(2).primes.tolist() == [2]


def test_sieve_rejects_limit_below_two():
    with pytest.raises(EmptyDomainError):
        sieve_primes(1)


def test_prime_count_to_one_million_matches_independent_sieve():
    oracle = _bytearray_sieve_count(10**6)
    assert oracle == 78498
    assert len(sieve_primes(10**6)) == oracle


@given(st.integers(min_value=2, max_value=3000))
def test_sieve_agrees_with_trial_division(limit):
    assert sieve_primes(limit).primes.tolist() == _trial_division_primes(limit)


def test_sieve_agrees_with_trial_division_to_1e5():
    assert sieve_primes(10**5).primes.tolist() == _trial_division_primes(10**5)


def test_primes_between_is_closed():
    assert primes_between(2, 13).tolist() == [2, 3, 5, 7, 11, 13]
    got = primes_between(10, 30).tolist()
    assert got == [p for p in _trial_division_primes(30) if 10 <= p <= 30]


@given(st.integers(min_value=1, max_value=10**6))
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**k for p, k in f.items()) == n
    assert all(_trial_division_primes(p)[-1:] == [p] for p in f)


# -- characters -------------------------------------------------------------------


def test_trivial_character():
    chi = dirichlet_character(1, ())
    assert np.all(chi(np.arange(1, 50)) == 1)


def test_character_mod_4():
    chi = dirichlet_character(4, (1,))
    assert chi(3) == -1
    assert chi(2) == 0
    assert chi(1) == 1


def test_invalid_index_rejected():
    with pytest.raises(InvalidIndexError):
        dirichlet_character(5, (4,))
    with pytest.raises(InvalidIndexError):
        dirichlet_character(8, (1,))


@given(st.integers(min_value=1, max_value=80))
def test_character_orthogonality(q):
    chars = all_characters(q)
    phi = sum(1 for a in range(1, q + 1) if math.gcd(a, q) == 1)
    assert len(chars) == phi
    a = np.arange(1, q + 1)
    table = np.array([c(a) for c in chars])
    gram = table @ table.conj().T
    assert np.allclose(gram, phi * np.eye(phi), atol=1e-9)
    for c in chars:
        if not c.is_principal:
            assert abs(np.sum(c(a))) < 1e-9


@given(st.integers(min_value=1, max_value=60), st.data())
def test_characters_completely_multiplicative_and_periodic(q, data):
    chars = all_characters(q)
    chi = chars[data.draw(st.integers(0, len(chars) - 1))]
    m = data.draw(st.integers(1, 10**4))
    n = data.draw(st.integers(1, 10**4))
    assert abs(chi(m * n) - chi(m) * chi(n)) < 1e-12
    assert chi(m) == chi(m + q)
    assert (chi(m) == 0) == (math.gcd(m, q) > 1)
    assert chi(1) == 1


# -- cusp forms ---------------------------------------------------------------------


def test_ramanujan_tau_matches_naive_product():
    oracle = _tau_by_product(30)
    assert cuspform_raw("delta", 30)[1:] == oracle[1:31]
    assert oracle[2] == -24


def test_delta_normalisation():
    a = cuspform_coefficients("delta", 100)
    assert a(1) == 1
    assert a(2).real == pytest.approx(-24 / 2**5.5, abs=1e-12)
    assert a(2).real == pytest.approx(-0.530330, abs=1e-6)
    assert abs(a(6) - a(2) * a(3)) < 1e-12


def test_delta_multiplicative_and_deligne():
    n_max = 3000
    a = cuspform_coefficients("delta", n_max)
    for m in range(2, 60):
        for n in range(2, n_max // m + 1):
            if math.gcd(m, n) == 1:
                assert abs(a(m * n) - a(m) * a(n)) < 1e-9
    ps = sieve_primes(n_max).primes
    assert np.max(np.abs(a.values[ps])) <= 2


def test_hecke_relation_at_prime_squares():
    a = cuspform_coefficients("delta", 2000)
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43):
        assert abs(a(p * p) - (a(p) ** 2 - 1)) < 1e-9


# -- correlations ---------------------------------------------------------------------


def test_zeta_self_correlation_near_one():
    z = zeta_spec()
    c = coeff_correlation(z, z, 1e6)
    direct = len(sieve_primes(10**6)) * math.log(1e6) / 1e6
    assert c.value.real == pytest.approx(direct, rel=1e-12)
    assert abs(c.value - 1) < 0.1


def test_distinct_characters_mod_5_decorrelate():
    a, b = dirichlet_spec((5, (1,))), dirichlet_spec((5, (3,)))
    c = coeff_correlation(a, b, 1e6)
    ps = sieve_primes(10**6).primes
    direct = sum(complex(a.character(p) * np.conj(b.character(p))) for p in ps.tolist()) * math.log(1e6) / 1e6
    assert abs(c.value - direct) < 1e-9
    assert abs(c.value) <= 0.05


def test_empty_correlation():
    z = zeta_spec()
    c = coeff_correlation(z, z, 1)
    assert c.empty and c.value == 0


# -- cache -----------------------------------------------------------------------------


def test_cache_round_trip_is_bit_exact(tmp_path):
    s = cuspform_coefficients("delta", 10**4)
    cache_write(tmp_path, s)
    back = cache_read(tmp_path, "delta", 10**4)
    assert back.values.tobytes() == s.values.tobytes()


def test_cache_round_trip_of_character_series(tmp_path):
    s = zeta_series(500)
    cache_write(tmp_path, s)
    assert np.array_equal(cache_read(tmp_path, s.label, 500).values, s.values)


def test_cache_unknown_label(tmp_path):
    with pytest.raises(CacheMissError):
        cache_read(tmp_path, "nothing", 10)


def test_cache_truncated_file(tmp_path):
    s = cuspform_coefficients("delta", 200)
    path = cache_write(tmp_path, s)
    path.write_bytes(path.read_bytes()[:-7])
    with pytest.raises(IntegrityError):
        cache_read(tmp_path, "delta", 200)


def test_cache_version_mismatch(tmp_path):
    s = cuspform_coefficients("delta", 200)
    path = cache_write(tmp_path, s)
    raw = bytearray(path.read_bytes())
    raw[8] = 99
    path.write_bytes(bytes(raw))
    with pytest.raises(IntegrityError):
        cache_read(tmp_path, "delta", 200)


def test_cache_corrupted_record(tmp_path):
    s = cuspform_coefficients("delta", 200)
    path = cache_write(tmp_path, s)
    raw = bytearray(path.read_bytes())
    raw[-3] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(IntegrityError):
        cache_read(tmp_path, "delta", 200)
    assert cache_path(tmp_path, "delta", 200).exists()
