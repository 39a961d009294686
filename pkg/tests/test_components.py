import math
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trojanrisk.components import (
    Circulator,
    Connector,
    Coupler,
    DatasheetClaim,
    DefaultedValueWarning,
    Direction,
    FiberSegment,
    Filter,
    GenericLoss,
    Isolator,
    opposite,
    parse_direction,
    reflectivity,
    transmittance,
    validate_against_datasheet,
)
from trojanrisk.errors import InvalidDirection
from trojanrisk.spectral import SpectralCurve

F, R = Direction.FORWARD, Direction.REVERSE


def test_parse_and_opposite_directions():
    assert parse_direction("forward") is F
    assert parse_direction(" Reverse ") is R
    assert parse_direction("1->2") == (1, 2)
    assert opposite((1, 2)) == (2, 1)
    assert opposite(F) is R
    with pytest.raises(InvalidDirection):
        parse_direction("sideways")
    with pytest.raises(InvalidDirection):
        parse_direction("2->2")


def test_iso1_examples(curve):
    iso = Isolator(curve("iso1_forward"), curve("iso1_reverse"))
    assert transmittance(iso, R, 1550) == pytest.approx(-50.0, abs=2.0)
    assert transmittance(iso, R, 1310) >= -20.0
    assert transmittance(iso, F, 1550) == pytest.approx(-0.5, abs=0.2)


def test_iso3_example(curve):
    iso = Isolator(curve("iso3_forward"), curve("iso3_reverse"))
    assert transmittance(iso, R, 1550) == pytest.approx(-35.0, abs=2.0)


def test_circulator_favoured_hops(curve):
    circ = Circulator({(1, 2): curve("circ_1to2"), (2, 3): curve("circ_2to3"),
                       (2, 1): curve("circ_2to1")})
    assert transmittance(circ, (1, 2), 1550) == pytest.approx(-2.0, abs=0.5)
    assert transmittance(circ, (2, 3), 1550) == pytest.approx(-2.8, abs=0.5)
    for hop in ((1, 2), (2, 3)):
        assert -3.5 <= transmittance(circ, hop, 1550) <= 0.0
    with pytest.raises(InvalidDirection):
        transmittance(circ, (3, 2), 1550)
    with pytest.raises(InvalidDirection):
        transmittance(circ, F, 1550)


def test_isolator_rejects_port_pairs():
    iso = Isolator(SpectralCurve.flat(0.0), SpectralCurve.flat(-30.0))
    with pytest.raises(InvalidDirection):
        transmittance(iso, (1, 2), 1550)


def test_filter_rectangular_passband():
    fbg = Filter(1550, 4, -1.0, -60.0)
    assert transmittance(fbg, F, 1551) == -1.0
    assert transmittance(fbg, F, 1552) == -1.0
    assert transmittance(fbg, F, 1310) == -60.0
    assert transmittance(fbg, R, 1310) == -60.0
    with pytest.raises(ValueError):
        Filter(1550, 4, -10.0, -5.0)


def test_connector_reflection_and_default_insertion():
    c = Connector()
    assert reflectivity(c, 1550) == -14.0
    with pytest.warns(DefaultedValueWarning):
        assert transmittance(c, F, 1550) == -0.3
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert transmittance(Connector(-40.0, -0.5), R, 1550) == -0.5
    curved = Connector(SpectralCurve([1000, 2000], [-20, -40]), 0.0)
    assert reflectivity(curved, 1500) == -30.0


def test_no_reflection_is_minus_infinity():
    assert reflectivity(GenericLoss(SpectralCurve.flat(-3.0)), 1550) == -math.inf
    assert reflectivity(Isolator(SpectralCurve.flat(0.0), SpectralCurve.flat(-30.0)), 1550) == -math.inf


def test_fiber_scales_with_length():
    att = SpectralCurve([1300, 1550], [-0.35, -0.2])
    assert transmittance(FiberSegment(att, 10.0), F, 1550) == pytest.approx(-2.0)
    assert transmittance(FiberSegment(att, 0.0), R, 1300) == 0.0


def test_coupler_arms():
    c = Coupler(-3.0103, -3.0103, -0.2)
    assert c.through_db == pytest.approx(-3.2103)
    assert c.tap_db == pytest.approx(-3.2103)
    with pytest.raises(ValueError):
        Coupler(-1.0, -1.0)


def test_passive_components_reject_gain():
    with pytest.raises(ValueError):
        Isolator(SpectralCurve.flat(0.5), SpectralCurve.flat(-30.0))
    with pytest.raises(ValueError):
        Connector(reflectivity_db=3.0)


@settings(max_examples=300, deadline=None)
@given(st.floats(-80, 0), st.floats(1000, 2000))
def test_reciprocal_kinds_ignore_direction(loss, lam):
    for comp in (GenericLoss(SpectralCurve.flat(loss)), Connector(-14.0, loss),
                 FiberSegment(SpectralCurve.flat(loss), 0.5), Filter(1550, 4, max(loss, -1), -60)):
        assert transmittance(comp, F, lam) == transmittance(comp, R, lam)


def test_fixture_isolators_reverse_below_forward(curve):
    for n in (1, 2, 3):
        iso = Isolator(curve(f"iso{n}_forward"), curve(f"iso{n}_reverse"))
        lo = max(iso.forward.lo, iso.reverse.lo)
        hi = min(iso.forward.hi, iso.reverse.hi)
        lam = lo
        while lam <= hi:
            assert transmittance(iso, R, lam) <= transmittance(iso, F, lam)
            lam += 5


# --- datasheets ---------------------------------------------------------------

def test_datasheet_flags_iso3_isolation(config):
    cfg = config("components")
    found = validate_against_datasheet(cfg.components["iso3"], cfg.claims["iso3"])
    assert [v.quantity for v in found] == ["isolation"]
    assert found[0].measured_db == pytest.approx(35.0, abs=0.01)


def test_datasheet_passes_iso1_and_iso2(config):
    cfg = config("components")
    for cid in ("iso1", "iso2"):
        assert validate_against_datasheet(cfg.components[cid], cfg.claims[cid]) == []


def test_datasheet_flags_circulator_insertion(config):
    cfg = config("components")
    found = validate_against_datasheet(cfg.components["circ"], cfg.claims["circ"])
    assert {v.quantity for v in found} == {"insertion loss"}
    assert sorted(round(v.measured_db, 1) for v in found) == [2.0, 2.8]


def test_datasheet_return_loss_only_when_configured():
    iso = Isolator(SpectralCurve.flat(0.0), SpectralCurve.flat(-60.0),
                   reflection=SpectralCurve.flat(-40.0))
    claim = DatasheetClaim(1550, min_return_loss_db=55)
    assert [v.quantity for v in validate_against_datasheet(iso, claim)] == ["return loss"]
    bare = Isolator(SpectralCurve.flat(0.0), SpectralCurve.flat(-60.0))
    assert validate_against_datasheet(bare, claim) == []


def test_iso2_double_pass_anchor(curve):
    from trojanrisk.spectral import double_pass

    assert double_pass(curve("iso2_forward"), curve("iso2_reverse"))(1550) == pytest.approx(-45.0, abs=1e-9)
