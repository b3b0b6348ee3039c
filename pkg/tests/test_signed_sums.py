import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resonance.arith import primes_between
from resonance.errors import ParameterError
from resonance.lfunc import dirichlet_spec, zeta_spec
from resonance.resonator import build_resonator_critical, build_resonator_offline
from resonance.signed_sums import comparator, direct_signed_sum, signed_prime_sums

CHI1 = dirichlet_spec((5, (1,)))
CHI2 = dirichlet_spec((5, (2,)))


@given(st.floats(0.5, 50.0), st.floats(0.55, 1.0))
def test_zeta_with_constant_resonator(C, sigma):
    z = zeta_spec()
    T, beta = 1e5, 5.0
    res = build_resonator_offline([z], [], beta, T, C)
    rep = signed_prime_sums([z], [], res, sigma, T)
    p = primes_between(2, beta * math.log(T)).astype(float)
    want = -(1 / C) * np.sum(1 / ((1 + 1 / C**2) * p**sigma))
    e = rep.entries[0]
    assert e.value == pytest.approx(want, rel=1e-12)
    assert e.value < 0 and e.cross_same == 0 and e.cross_other == 0
    assert rep.prime_count == p.size


@pytest.mark.parametrize("large,small", [([CHI1, CHI2], []), ([CHI1], [CHI2]), ([], [CHI1, CHI2])])
def test_decomposition_matches_direct_sum(large, small):
    T = 1e5
    res = build_resonator_offline(large, small, 20.0, T, 4.0)
    rep = signed_prime_sums(large, small, res, 0.75, T)
    signs = [1] * len(large) + [-1] * len(small)
    for spec, sign, e in zip(large + small, signs, rep.entries):
        assert e.value == pytest.approx(e.diagonal + e.cross_same + e.cross_other, rel=1e-13)
        assert e.value == pytest.approx(direct_signed_sum(spec, sign, res, 0.75), rel=1e-12)
        assert e.side == ("large" if sign > 0 else "small")
        assert np.isfinite(e.ratio)
    assert rep.all_negative


def test_cross_term_within_orthonormality_tolerance():
    T, beta, sigma = 1e5, 5.0, 0.75
    scale = (beta * math.log(T)) ** (1 - sigma) / math.log(math.log(T))
    res = build_resonator_offline([CHI1, CHI2], [], beta, T, 4.0)
    rep = signed_prime_sums([CHI1, CHI2], [], res, sigma, T)
    # oracle: the cross term straight from the two character values
    p = res.primes
    a1, a2 = CHI1.at_primes(p), CHI2.at_primes(p)
    denom = (1 + np.abs(res.r) ** 2) * p.astype(float) ** sigma * 4.0
    cross = -float(np.sum((np.conj(a2) * a1).real / denom))
    assert rep.entries[0].cross_same == pytest.approx(cross, rel=1e-12)
    assert abs(cross) <= 0.1 * scale


@pytest.mark.parametrize("large,small", [([CHI1, CHI2], []), ([CHI1], [CHI2])])
def test_diagonal_dominance_at_large_support(large, small):
    T = 1e5
    beta = 1e5 / math.log(T)
    C = 4 * (len(large) + len(small))
    res = build_resonator_offline(large, small, beta, T, C)
    rep = signed_prime_sums(large, small, res, 0.75, T)
    assert rep.diagonal_dominant
    assert rep.D_measured > 0


def test_doubling_C_halves_terms():
    T = 1e5
    r1 = signed_prime_sums([CHI1, CHI2], [], build_resonator_offline([CHI1, CHI2], [], 5.0, T, 4.0), 0.75, T)
    res2 = build_resonator_offline([CHI1, CHI2], [], 5.0, T, 8.0)
    r2 = signed_prime_sums([CHI1, CHI2], [], res2, 0.75, T)
    rmax = float(np.max(np.abs(res2.r))) * 2  # |r| at C = 4
    for a, b in zip(r1.entries, r2.entries):
        for x, y in ((a.diagonal, b.diagonal), (a.cross_same, b.cross_same)):
            assert abs(2 * y - x) <= rmax**2 * abs(x) + 1e-15


def test_comparator_scales():
    T = 1e5
    assert comparator(T, 1.0) == pytest.approx(math.log(math.log(math.log(T))))
    assert comparator(T, 0.75) == pytest.approx(math.log(T) ** 0.25 / math.log(math.log(T)))


def test_empty_resonator():
    with pytest.warns(UserWarning):
        res = build_resonator_offline([zeta_spec()], [], 0.1, 1e5, 2.0)
    rep = signed_prime_sums([zeta_spec()], [], res, 0.75, 1e5)
    assert rep.entries[0].value == 0.0 and rep.notes
    assert not rep.all_negative


def test_critical_resonator_rejected():
    res = build_resonator_critical([zeta_spec()], 0.1, 1.2, ell=25.0)
    with pytest.raises(ParameterError):
        signed_prime_sums([zeta_spec()], [], res, 0.75, 1e5)


def test_report_serializes():
    res = build_resonator_offline([zeta_spec()], [], 5.0, 1e5, 2.0)
    d = signed_prime_sums([zeta_spec()], [], res, 0.75, 1e5).to_dict()
    assert d["all_negative"] and d["D_measured"] > 0 and len(d["entries"]) == 1
