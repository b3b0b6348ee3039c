import math

import pytest

from resonance.certify import GoodIntervalCertificate, certify_good_interval, require_certificate
from resonance.errors import CertificateRequiredError, ParameterError, UncertifiedIntervalError
from resonance.lfunc import count_zeros_rectangle, dirichlet_spec, first_zeta_zero, one_spec, zeta_spec


@pytest.fixture(scope="module")
def cert_1e4():
    return certify_good_interval([zeta_spec()], 0.6, 1e4, 0.3, 1.5e4)


def test_zeta_certified_at_1e4(cert_1e4):
    c = cert_1e4
    assert c.certified and c.counts == {"zeta": 0} and c.rejection is None
    h = 1e4**0.3
    assert c.t1 == pytest.approx(1.5e4 + h / 2) and c.t2 == pytest.approx(1.5e4 + 5 * h / 2)
    # the certificate agrees with an independent count on the same rectangle
    assert count_zeros_rectangle(zeta_spec(), 0.6, c.t1, c.t2, 3.0).count == 0
    assert c.contours["zeta"]["count"] == 0


def test_window_inside_rectangle(cert_1e4):
    lo, hi = cert_1e4.window
    assert cert_1e4.t1 < lo < hi < cert_1e4.t2
    assert hi - lo == pytest.approx(1e4**0.3)


def test_tiny_window_still_valid():
    c = certify_good_interval([zeta_spec()], 0.6, 1e4, 0.2, 1.5e4)
    assert 1e4**0.2 < 10
    assert c.certified and c.t2 - c.t1 == pytest.approx(2 * 1e4**0.2)


def test_rejection_locates_first_zero():
    # T=10, A=12.5: the rectangle [0.4, 3] x [13.13, 15.66] holds the first zero
    c = certify_good_interval([zeta_spec()], 0.4, 10.0, 0.1, 12.5)
    assert not c.certified
    assert c.counts["zeta"] == 1
    assert c.rejection["spec"] == "zeta"
    assert c.rejection["zero_re"] == pytest.approx(0.5, abs=1e-6)
    assert c.rejection["zero_im"] == pytest.approx(first_zeta_zero(), abs=1e-6)


def test_certified_iff_all_counts_zero():
    chi = dirichlet_spec((4, (1,)))
    c = certify_good_interval([zeta_spec(), chi, one_spec()], 0.6, 100.0, 0.5, 150.0)
    assert set(c.counts) == {"zeta", chi.label}
    assert c.certified == all(v == 0 for v in c.counts.values())
    assert "one" not in c.spec_labels


@pytest.mark.parametrize("A", [1.2e4, 1.8e4])
def test_anchor_range(A):
    with pytest.raises(ParameterError):
        certify_good_interval([zeta_spec()], 0.6, 1e4, 0.3, A)


@pytest.mark.parametrize("alpha", [0.0, 1.5])
def test_alpha_range(alpha):
    with pytest.raises(ParameterError):
        certify_good_interval([zeta_spec()], 0.6, 1e4, alpha, 1.5e4)


def test_covers(cert_1e4):
    c = cert_1e4
    lo, hi = c.window
    assert c.covers(["zeta"], 0.75, lo, hi)
    assert not c.covers(["zeta"], 0.6, lo, hi)  # sigma must exceed sigma0 strictly
    assert not c.covers(["zeta", "chi4"], 0.75, lo, hi)
    assert not c.covers(["zeta"], 0.75, c.t1 - 1, hi)
    require_certificate(c, [zeta_spec(), one_spec()], 0.75, lo, hi)
    with pytest.raises(UncertifiedIntervalError):
        require_certificate(None, [zeta_spec()], 0.75, lo, hi)
    with pytest.raises(CertificateRequiredError):
        require_certificate(c, [zeta_spec()], 0.55, lo, hi, CertificateRequiredError)


def test_round_trip(cert_1e4):
    d = cert_1e4.to_dict()
    back = GoodIntervalCertificate.from_dict(d)
    assert back == cert_1e4
    assert math.isfinite(back.t1)
