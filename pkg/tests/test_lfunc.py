import cmath
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from resonance.arith import dirichlet_character, sieve_primes
from resonance.errors import ParameterError, PoleError
from resonance.lfunc import (
    abs_L_line,
    count_zeros_rectangle,
    cusp_spec,
    dirichlet_spec,
    evaluate_L,
    evaluate_L_line,
    evaluate_zeta,
    first_zeta_zero,
    fractional_coefficients,
    hardy_z,
    local_power_series,
    log_L,
    one_spec,
    parse_spec,
    tau_q,
    zeta_spec,
)
from resonance.lfunc.cusp import cusp_afe, cusp_smoothed

CATALAN = 0.915965594177219015054603514932

mpmath.mp.dps = 30


def _mp_dirichlet(s, chi):
    return complex(mpmath.dirichlet(s, [complex(v) for v in chi.values]))


# -- zeta ----------------------------------------------------------------------


def test_zeta_closed_forms():
    assert evaluate_zeta(2) == pytest.approx(math.pi**2 / 6, abs=1e-12)
    assert evaluate_zeta(2).real == pytest.approx(1.6449340668, abs=1e-10)
    assert evaluate_zeta(0) == pytest.approx(-0.5, abs=1e-12)
    assert evaluate_zeta(3).real == pytest.approx(1.2020569031595942, abs=1e-12)


def test_zeta_pole():
    with pytest.raises(PoleError):
        evaluate_zeta(1)


@given(st.floats(0.0, 3.0), st.floats(-300.0, 300.0))
def test_zeta_matches_mpmath(sigma, t):
    s = complex(sigma, t)
    if abs(s - 1) < 1e-3:
        return
    want = complex(mpmath.zeta(s))
    assert abs(evaluate_zeta(s) - want) <= 1e-10 * max(1.0, abs(want))


@pytest.mark.parametrize("t", [1e3, 5e4, 1e6])
def test_zeta_on_critical_line_at_height(t):
    want = complex(mpmath.zeta(complex(0.5, t)))
    got = evaluate_zeta(complex(0.5, t))
    assert abs(got - want) <= 1e-8 * max(1.0, abs(want))


def test_first_zero_against_sign_change_bisection():
    # independent oracle: bisection on the sign of mpmath's Hardy Z
    lo, hi = 14.0, 14.3
    for _ in range(60):
        mid = (lo + hi) / 2
        if mpmath.siegelz(lo) * mpmath.siegelz(mid) <= 0:
            hi = mid
        else:
            lo = mid
    g = first_zeta_zero()
    assert abs(g - lo) < 1e-9
    assert abs(g - 14.134725) < 1e-6
    assert abs(evaluate_zeta(complex(0.5, 14.134725))) <= 1e-5


def test_hardy_z_is_real_valued_modulus():
    t = np.array([20.0, 100.0, 1000.0])
    assert np.allclose(np.abs(hardy_z(t)), [abs(evaluate_zeta(complex(0.5, x))) for x in t], atol=1e-9)


def test_riemann_siegel_grid_matches_direct_evaluation():
    t0, dt, n = 1e5, 0.37, 40
    got = abs_L_line(zeta_spec(), 0.5, t0, dt, n)
    want = np.array([abs(complex(mpmath.zeta(complex(0.5, t0 + k * dt)))) for k in range(n)])
    assert np.max(np.abs(got - want)) < 1e-6


# -- Dirichlet L-functions -----------------------------------------------------


def test_dirichlet_closed_forms():
    chi4 = dirichlet_spec((4, (1,)))
    assert evaluate_L(chi4, 1).value == pytest.approx(math.pi / 4, abs=1e-12)
    # direct alternating series with 10^6 terms as the oracle for L(2, chi_4)
    k = np.arange(10**6, dtype=float)
    oracle = math.fsum(((-1.0) ** k) / (2 * k + 1) ** 2)
    assert abs(oracle - CATALAN) < 1e-11
    assert evaluate_L(chi4, 2).value == pytest.approx(oracle, abs=1e-10)


def test_principal_mod_one_is_zeta():
    chi1 = dirichlet_spec((1, ()))
    s = complex(2, 3)
    assert abs(evaluate_L(chi1, s).value - evaluate_zeta(s)) < 1e-9


@given(st.sampled_from([3, 4, 5, 6, 8, 12, 15]), st.floats(0.2, 3.0), st.floats(-80, 80))
def test_principal_character_removes_euler_factors(q, sigma, t):
    s = complex(sigma, t)
    if abs(s - 1) < 1e-2:
        return
    chi0 = dirichlet_spec(dirichlet_character(q, _zeros(q)))
    want = evaluate_zeta(s)
    for p in {p for p in sieve_primes(q).primes.tolist() if q % p == 0}:
        want *= 1 - p ** (-s)
    assert abs(evaluate_L(chi0, s).value - want) <= 1e-8 * max(1, abs(want))


def _zeros(q):
    from resonance.arith.characters import unit_group_factors

    return (0,) * len(unit_group_factors(q))


@given(st.sampled_from([(5, (1,)), (5, (2,)), (7, (3,)), (8, (1, 1)), (12, (1, 0))]), st.floats(0.0, 3.0), st.floats(-200, 200))
def test_dirichlet_matches_mpmath(ch, sigma, t):
    spec = dirichlet_spec(ch)
    s = complex(sigma, t)
    want = _mp_dirichlet(s, spec.character)
    assert abs(evaluate_L(spec, s).value - want) <= 1e-9 * max(1, abs(want))


def test_line_evaluation_matches_pointwise():
    spec = dirichlet_spec((5, (1,)))
    vals, _ = evaluate_L_line(spec, 0.75, 1000.0, 0.5, 9)
    for k, v in enumerate(vals):
        assert abs(v - evaluate_L(spec, complex(0.75, 1000 + 0.5 * k)).value) < 1e-10


def test_constant_one():
    assert evaluate_L(one_spec(), complex(0.3, 7)).value == 1
    assert log_L(one_spec(), complex(0.3, 7)) == 0


# -- cusp forms -------------------------------------------------------------------


@pytest.fixture(scope="module")
def delta():
    return cusp_spec("delta", 100_000)


def test_delta_at_two_matches_direct_series(delta):
    n = np.arange(1, 100_001)
    direct = np.sum(delta.series.values[1:] / n**2.0)
    assert abs(evaluate_L(delta, 2).value - direct) < 1e-6


def test_delta_methods_agree_right_of_critical_line(delta):
    for t in (0.0, 5.0, 20.0, 60.0):
        s = complex(0.9, t)
        afe, _ = cusp_afe(delta.series, 12, s)
        smooth = cusp_smoothed(delta.series, s)
        smooth = smooth[0] if isinstance(smooth, tuple) else smooth
        assert abs(afe - smooth) < 1e-4


def test_delta_matches_direct_series_at_three(delta):
    n = np.arange(1, 100_001)
    direct = np.sum(delta.series.values[1:] / n**3.0)
    assert abs(evaluate_L(delta, complex(3, 1)).value - np.sum(delta.series.values[1:] / n ** complex(3, 1))) < 1e-9
    assert abs(evaluate_L(delta, 3).value - direct) < 1e-9


@pytest.mark.parametrize("label", ["zeta", "dirichlet:5:1", "cusp:delta:2000"])
def test_log_bound_in_absolute_convergence_region(label):
    spec = parse_spec(label)
    ps = sieve_primes(2000).primes
    bound = 0.0
    for p in ps.tolist():
        roots = spec.local_roots(p)
        for k in range(1, 40):
            bound += float(np.sum(np.abs(roots) ** k)) / k * p ** (-2.0 * k)
    # primes beyond the table: sum_k d p^(-2k)/k <= 2d/p^2, summed over n > 2000
    tail = 2 * spec.degree / 2000
    assert abs(cmath.log(evaluate_L(spec, 2).value)) <= bound + tail


# -- logarithms ---------------------------------------------------------------------


def test_log_zeta_two():
    v = log_L(zeta_spec(), 2)
    assert v.real == pytest.approx(math.log(math.pi**2 / 6), abs=1e-12)
    assert v.imag == 0 or abs(v.imag) < 1e-15


def test_log_vanishes_far_right():
    for sigma in (10.0, 30.0, 60.0):
        assert abs(log_L(zeta_spec(), sigma)) < 2.0 ** (1 - sigma)


def test_exp_log_at_reference_point():
    s = complex(1.2, 50)
    assert abs(cmath.exp(log_L(zeta_spec(), s)) - evaluate_zeta(s)) < 1e-8


@given(st.floats(1.1, 3.0), st.floats(-200, 200), st.sampled_from(["zeta", "dirichlet:4:1", "dirichlet:5:1"]))
def test_exp_log_consistency(sigma, t, label):
    spec = parse_spec(label)
    s = complex(sigma, t)
    assert abs(cmath.exp(log_L(spec, s)) - evaluate_L(spec, s).value) < 1e-8


def test_log_continuation_matches_mpmath_branch():
    # continuous branch of log zeta along the horizontal path, from mpmath
    s = complex(0.75, 1000)
    xs = np.linspace(3.0, 0.75, 301)
    with mpmath.workdps(15):
        ph = np.unwrap([cmath.phase(complex(mpmath.zeta(complex(x, 1000)))) for x in xs])
    want = complex(math.log(abs(complex(mpmath.zeta(s)))), ph[-1] - ph[0] + cmath.phase(complex(mpmath.zeta(complex(3, 1000)))))
    got = log_L(zeta_spec(), s)
    assert abs(got - want) < 1e-6


# -- fractional powers --------------------------------------------------------------


def test_tau_q_values():
    assert tau_q(Fraction(1, 3), 0) == 1
    assert tau_q(1, 5) == 1
    assert tau_q(Fraction(1, 2), 2) == Fraction(3, 8)
    for q in (0.5, 1.7, 2.25):
        for k in range(6):
            gamma_ratio = math.gamma(q + k) / (math.factorial(k) * math.gamma(q))
            assert tau_q(q, k) == pytest.approx(gamma_ratio, rel=1e-13)


def test_tau_q_rejects_negative_k():
    with pytest.raises(ParameterError):
        tau_q(0.5, -1)


def _exp_log_series(roots, q, nu):
    """Coefficients of exp(q sum_j sum_k alpha_j^k X^k / k) via mpmath Taylor expansion."""
    f = lambda x: mpmath.exp(q * sum(-mpmath.log(1 - a * x) for a in roots))  # noqa: E731
    return [complex(c) for c in mpmath.taylor(f, 0, nu)]


def test_fractional_coefficients_zeta_half():
    c = fractional_coefficients([zeta_spec()], 0.5, 2).coeffs
    assert c[0] == 1
    assert c[2] == pytest.approx(3 / 8, abs=1e-15)
    oracle = _exp_log_series([1.0], 0.5, 8)
    assert np.allclose(c, oracle, atol=1e-12)


@given(st.floats(0.1, 3.0), st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_first_fractional_coefficient_is_q_times_sum(q, p):
    specs = [zeta_spec(), dirichlet_spec((5, (1,))), cusp_spec("delta", 100)]
    fc = fractional_coefficients(specs, q, p)
    assert abs(fc.c1 - q * sum(s.coefficients([p])[0] for s in specs)) < 1e-12
    assert fc.coeffs[0] == 1


@given(
    st.lists(st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False), min_size=1, max_size=3),
    st.sampled_from([Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(3, 4)]),
)
def test_fractional_power_identity(roots, q):
    c = local_power_series(roots, float(q), 6)
    conv = np.array([1.0 + 0j])
    for _ in range(q.denominator):
        conv = np.convolve(conv, c)[:7]
    assert np.max(np.abs(conv - local_power_series(roots, q.numerator, 6))) < 1e-10


@given(st.lists(st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False), min_size=1, max_size=2), st.floats(0.1, 2.0))
def test_local_power_series_matches_exp_log(roots, q):
    got = local_power_series(roots, q, 5)
    want = _exp_log_series(roots, q, 5)
    assert np.max(np.abs(got - want)) < 1e-9


# -- zero counting ------------------------------------------------------------------


def _critical_line_zero_count(t1, t2, step=0.01):
    t = np.arange(t1, t2, step)
    z = np.array([float(mpmath.siegelz(x)) for x in t])
    return int(np.sum(np.sign(z[1:]) != np.sign(z[:-1])))


def test_zero_count_low_rectangle():
    assert _critical_line_zero_count(10, 30) == 3
    assert count_zeros_rectangle(zeta_spec(), 0.4, 10, 30).count == 3


def test_zero_free_rectangles():
    assert count_zeros_rectangle(zeta_spec(), 0.6, 10, 20).count == 0
    assert count_zeros_rectangle(zeta_spec(), 0.6, 10, 100).count == 0


def test_empty_rectangle():
    assert count_zeros_rectangle(zeta_spec(), 0.4, 15.0, 15.0).count == 0


def test_zero_count_additive_over_stacked_rectangles():
    z = zeta_spec()
    whole = count_zeros_rectangle(z, 0.3, 10, 50).count
    parts = count_zeros_rectangle(z, 0.3, 10, 27.3).count + count_zeros_rectangle(z, 0.3, 27.3, 50).count
    assert whole == parts == _critical_line_zero_count(10, 50)


def test_dirichlet_zero_count_against_mpmath():
    # zeros of L(s, chi_4) with 0 < t < 12 on the critical line: 6.0209, 10.2437
    spec = dirichlet_spec((4, (1,)))
    assert count_zeros_rectangle(spec, 0.4, 1, 12).count == 2
    assert abs(evaluate_L(spec, complex(0.5, 6.020948904697597)).value) < 1e-8


def test_parse_spec_forms():
    assert parse_spec("zeta").label == "zeta"
    assert parse_spec("dirichlet:4:1").character.modulus == 4
    assert parse_spec("cusp:delta:300").series.n_max == 300
    with pytest.raises(ParameterError):
        parse_spec("maass:1")
