import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import afterpulse_sum_bruteforce
from trojanrisk.detectors import (
    MonitoringDetector,
    Spad,
    afterpulse_probability,
    alarm_triggered,
    click_probability,
    detection_probability,
    invert_efficiency,
    mean_photons,
    photocurrent,
    power_for_photons,
    qber_contribution,
    total_afterpulse_probability,
)
from trojanrisk.errors import NotInvertible
from trojanrisk.spectral import SpectralCurve

# Frozen from exact rational arithmetic with the SI-defined h and c.
MU_1550_100UW_1NS = 780288.06796912
# Frozen from a 50-digit evaluation of d + (1 - exp(-mu*eta)) (1 - d).
P_TOT_D1E4_ETA01_MU1 = 0.0952530657058440


def flat_spad(eta=0.1, d=1e-4, gate_rate=1e6, tau=10e-6, amp=0.02):
    return Spad(SpectralCurve.flat(math.log10(eta)), d, 2.5e-9, gate_rate, amp, tau)


def test_mean_photons_oracle():
    assert mean_photons(1550, 100e-6, 1e-9) == pytest.approx(MU_1550_100UW_1NS, rel=1e-12)
    assert mean_photons(1550, 0.0, 1e-9) == 0.0


def test_power_round_trip():
    p = power_for_photons(1310, 4.0e6, 1e-9)
    assert mean_photons(1310, p, 1e-9) == pytest.approx(4.0e6, rel=1e-14)


def test_detection_probability_oracle():
    assert detection_probability(flat_spad(), 1550, 1.0) == pytest.approx(P_TOT_D1E4_ETA01_MU1, rel=1e-13)


def test_dark_only_when_no_light():
    assert detection_probability(flat_spad(d=3e-5), 1550, 0.0) == 3e-5


def test_monitor_boundary():
    det = MonitoringDetector.flat(1e-4, 10e-9)
    assert photocurrent(det, 1550, 100e-6) == pytest.approx(10e-9, rel=1e-12)
    assert alarm_triggered(det, 1550, 100e-6)
    assert not alarm_triggered(det, 1550, 99.999e-6)
    assert not alarm_triggered(det, 1550, 0.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=0, max_value=1e-4, exclude_max=True, allow_subnormal=False))
def test_monitor_no_alarm_below_boundary(power):
    assert not alarm_triggered(MonitoringDetector.flat(1e-4, 10e-9), 1550, power)


def test_fixture_spad_efficiency(curve):
    spad = Spad(curve("spad_efficiency_log10"), 1e-5, 2.5e-9, 1e6)
    assert spad.efficiency(1720) == pytest.approx(5e-5, rel=0.2)
    assert spad.efficiency(1550) / spad.efficiency(1720) >= 1e3


def test_invert_rejects_out_of_range():
    for p in (1e-4, 5e-5, 1.0):
        with pytest.raises(NotInvertible):
            invert_efficiency(p, 1e-4, 1.0)
    with pytest.raises(NotInvertible):
        invert_efficiency(0.5, 1e-4, 0.0)


EPS = 2.0 ** -52


def inversion_condition(p, mu_eta):
    """Relative error in eta per unit relative rounding of p_tot."""
    return p / ((1.0 - p) * mu_eta)


@settings(max_examples=1000, deadline=None)
@given(log_eta=st.floats(-5, math.log10(0.25)), log_mu=st.floats(-1, 2), log_d=st.floats(-8, -2))
def test_inversion_accurate_to_conditioning(log_eta, log_mu, log_d):
    eta, mu, d = 10 ** log_eta, 10 ** log_mu, 10 ** log_d
    p = click_probability(eta, d, mu)
    err = abs(invert_efficiency(p, d, mu) - eta) / eta
    assert err <= 1e-15 + 4 * EPS * inversion_condition(p, mu * eta)


def test_inversion_loses_precision_near_saturation():
    # 1 - p_tot is about 1.4e-11 here, so a double holds only ~17 bits of eta
    p = click_probability(0.25, 1e-5, 100.0)
    err = abs(invert_efficiency(p, 1e-5, 100.0) - 0.25) / 0.25
    assert 1e-12 < err <= 4 * EPS * inversion_condition(p, 25.0)


@settings(max_examples=300, deadline=None)
@given(eta=st.floats(1e-6, 1.0), d=st.floats(1e-8, 1e-2), mu=st.floats(0, 50), k=st.floats(1.0, 3.0))
def test_click_probability_monotone(eta, d, mu, k):
    p = click_probability(eta, d, mu)
    assert d <= p <= 1
    assert click_probability(eta, d, mu * k) >= p
    assert click_probability(min(1.0, eta * k), d, mu) >= p


def test_afterpulse_decays_and_saturates():
    spad = flat_spad()
    seq = [afterpulse_probability(spad, 1550, 10.0, k) for k in range(0, 50)]
    assert all(a > b for a, b in zip(seq, seq[1:]))
    assert afterpulse_probability(spad, 1550, 1e9, 1) == 1.0
    assert afterpulse_probability(spad, 1550, 0.0, 1) == 0.0


@settings(max_examples=300, deadline=None)
@given(mu=st.floats(0, 1e4), k1=st.integers(0, 200), k2=st.integers(0, 200))
def test_afterpulse_properties(mu, k1, k2):
    spad = flat_spad()
    a1 = afterpulse_probability(spad, 1550, mu, k1)
    assert 0 <= a1 <= 1
    if k2 > k1:
        assert afterpulse_probability(spad, 1550, mu, k2) <= a1


def test_afterpulse_follows_efficiency(curve):
    spad = Spad(curve("spad_efficiency_log10"), 1e-5, 2.5e-9, 1e6)
    ratio = spad.efficiency(1550) / spad.efficiency(1700)
    lo = afterpulse_probability(spad, 1700, 1.0, 1)
    hi = afterpulse_probability(spad, 1550, 1.0, 1)
    assert hi / lo == pytest.approx(ratio, rel=1e-12)


@pytest.mark.parametrize("mu", [0.0, 1e-3, 1.0, 400.0, 1e4, 2e6])
def test_total_afterpulse_matches_bruteforce(mu):
    spad = flat_spad(gate_rate=1e6, tau=10e-6)
    r = math.exp(-1.0 / (spad.gate_rate_hz * spad.trap_decay_s))
    a = spad.afterpulse_amplitude * mu * spad.efficiency(1550)
    expected = afterpulse_sum_bruteforce(a, r, k_max=20000)
    got = total_afterpulse_probability(spad, 1550, mu)
    assert got == pytest.approx(expected, rel=1e-9, abs=1e-300)


def test_qber_contribution_oracle():
    assert qber_contribution(0.01, 0.002) == pytest.approx(0.0833333333333333, rel=1e-12)
    assert qber_contribution(0.01, 0.0) == 0.0
    with pytest.raises(ValueError):
        qber_contribution(0.0, 0.0)


@settings(max_examples=300, deadline=None)
@given(p1=st.floats(0, 1e-2), p2=st.floats(0, 1e-2), lam=st.floats(900, 1700))
def test_alarm_monotone_in_power(curve, p1, p2, lam):
    det = MonitoringDetector(curve("monitor_responsivity_log10"), 1e-8)
    lo, hi = sorted((p1, p2))
    assert alarm_triggered(det, lam, lo) <= alarm_triggered(det, lam, hi)


def test_idler_measurement_pipeline(curve):
    # gate settings of the long-wavelength efficiency measurement; the idler
    # power and gate count are illustrative, nothing in them is measured
    spad = Spad(curve("spad_efficiency_log10"), 1e-5, 2.5e-9, 98.0e3)
    mu = spad.gate_mean_photons(1720, 1e-6)
    assert mu == pytest.approx(2.5e-9 * 1720e-9 * 1e-6 / (6.62607015e-34 * 299792458), rel=1e-12)
    gates = 10**9
    clicks = round(detection_probability(spad, 1720, mu) * gates)
    eta = invert_efficiency(clicks / gates, spad.dark_count_prob, mu)
    assert eta == pytest.approx(5e-5, rel=0.2)
    assert eta == pytest.approx(spad.efficiency(1720), rel=1e-3)
