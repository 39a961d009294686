import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import linear_interp_by_hand
from trojanrisk.errors import DuplicateWavelength, MalformedRow, NoOverlap, OutOfRange, TooFewPoints
from trojanrisk.spectral import (
    ClampWarning,
    SpectralCurve,
    compose_serial,
    double_pass,
    emit_csv,
    interpolate_db,
    normalize_to_reference,
    parse_csv,
)


def test_interpolate_midpoint():
    c = SpectralCurve([1000, 2000], [-10, -20])
    assert interpolate_db(c, 1500) == -15.0


def test_interpolate_three_point_curve():
    c = SpectralCurve([1300, 1310, 1320], [-3, -5, -4])
    expected = linear_interp_by_hand(1300, -3, 1310, -5, 1305)
    assert expected == -4.0
    assert interpolate_db(c, 1305) == expected


def test_interpolate_exact_at_grid_points():
    wl = [1000.0, 1100.5, 1333.3, 1550.0]
    val = [-0.123456789, -7.5, -3.3, -50.000001]
    c = SpectralCurve(wl, val)
    for w, v in zip(wl, val):
        assert interpolate_db(c, w) == v


def test_out_of_range_raises_and_clamp_warns():
    c = SpectralCurve([1000, 2000], [-10, -20], label="iso")
    with pytest.raises(OutOfRange):
        interpolate_db(c, 999.9)
    with pytest.warns(ClampWarning, match="iso"):
        assert interpolate_db(c, 2500, clamp=True) == -20.0
    with pytest.warns(ClampWarning):
        assert interpolate_db(c, 10, clamp=True) == -10.0


@pytest.mark.parametrize("wl, val", [
    ([1000], [-1]),
    ([1000, 1000], [-1, -2]),
    ([1000, 900], [-1, -2]),
    ([1000, 1100], [-1, float("nan")]),
])
def test_construction_invariants(wl, val):
    with pytest.raises(ValueError):
        SpectralCurve(wl, val)


def test_passive_rejects_gain():
    with pytest.raises(ValueError, match="passive"):
        SpectralCurve([1000, 1100], [-1, 0.5], passive=True)
    SpectralCurve([1000, 1100], [-1, 0.5])


def test_curves_are_immutable():
    c = SpectralCurve([1000, 1100], [-1, -2])
    with pytest.raises(ValueError):
        c.values_db[0] = 3.0


def test_normalize_self_is_zero():
    c = SpectralCurve([1000, 1100, 1200], [-20, -25, -30])
    n = normalize_to_reference(c, c)
    assert np.all(n.values_db == 0)


def test_normalize_subtracts():
    raw = SpectralCurve.flat(-50.0)
    ref = SpectralCurve.flat(-10.0)
    assert interpolate_db(normalize_to_reference(raw, ref), 1550) == -40.0


def test_normalize_keeps_raw_grid_inside_overlap():
    raw = SpectralCurve([900, 1000, 1100, 1200, 1300], [-1, -2, -3, -4, -5])
    ref = SpectralCurve([950, 1250], [0, -3])
    n = normalize_to_reference(raw, ref)
    assert list(n.wavelengths_nm) == [1000, 1100, 1200]


def test_normalize_disjoint():
    a = SpectralCurve([1000, 1100], [0, 0], label="a")
    b = SpectralCurve([1200, 1300], [0, 0], label="b")
    with pytest.raises(NoOverlap, match=r"1000.*1100.*1200.*1300"):
        normalize_to_reference(a, b)


def test_fixture_normalization_reproduces_iso1(data_dir, curve):
    from trojanrisk.spectral import read_csv

    raw = read_csv(data_dir / "raw" / "raw_iso1_reverse.csv")
    ref = read_csv(data_dir / "raw" / "supercontinuum.csv")
    n = normalize_to_reference(raw, ref)
    assert interpolate_db(n, 1550) == pytest.approx(-50.0, abs=2.0)
    iso = curve("iso1_reverse")
    for lam in n.wavelengths_nm:
        assert n(lam) == pytest.approx(iso(lam), abs=1e-9)


def test_compose_sixty_db_budget():
    total = compose_serial([SpectralCurve.flat(-14.0), SpectralCurve.flat(-46.0)])
    assert np.all(total.values_db == -60.0)


def test_compose_single_and_sum():
    c = SpectralCurve([1000, 1100], [-1, -2])
    assert compose_serial([c]) is c
    total = compose_serial([SpectralCurve.flat(v) for v in (-3, -3, -4)])
    assert np.allclose(total.values_db, -10.0)


def test_compose_grid_is_union_inside_overlap():
    a = SpectralCurve([1000, 1200, 1400], [0, -2, 0])
    b = SpectralCurve([1100, 1300, 1500], [-1, -1, -1])
    t = compose_serial([a, b])
    assert list(t.wavelengths_nm) == [1100, 1200, 1300, 1400]
    assert t(1100) == -2.0 and t(1200) == -3.0


def test_double_pass_identity_forward():
    rev = SpectralCurve([1000, 1300, 1600], [-20, -30, -50])
    dp = double_pass(SpectralCurve.flat(0.0), rev)
    assert dp.allclose(rev)


def test_double_pass_fixtures(curve):
    iso1 = double_pass(curve("iso1_forward"), curve("iso1_reverse"))
    assert iso1(1550) <= -50.0
    circ = double_pass(curve("circ_1to2"), curve("circ_2to1"))
    window = (circ.wavelengths_nm >= 1280) & (circ.wavelengths_nm <= 1330)
    assert circ.values_db[window].max() == pytest.approx(-25.0, abs=3.0)


# --- CSV ---------------------------------------------------------------------

def test_parse_sorts_rows():
    c = parse_csv("wavelength_nm,value_db\n1550,-50\n1310,-20\n")
    assert list(c.wavelengths_nm) == [1310, 1550]
    assert list(c.values_db) == [-20, -50]


def test_parse_comments_blank_lines_and_crlf():
    c = parse_csv("# a comment\r\n\r\nwavelength_nm,value_db\r\n# inline\r\n1000,-1\r\n1100,-2.5\r\n")
    assert len(c) == 2 and c(1100) == -2.5


def test_round_trip_formatting():
    text = "wavelength_nm,value_db\n1310.0,-20.0\n1550.0,-50.125\n"
    assert emit_csv(parse_csv(text)) == text
    messy = "wavelength_nm,value_db\n1550,-50.125\n1310 , -20\n"
    assert emit_csv(parse_csv(messy)) == text


@pytest.mark.parametrize("text, exc", [
    ("wavelength_nm,value_db\n1550,-50\n1550,-40\n", DuplicateWavelength),
    ("wavelength_nm,value_db\n1550,-50\n", TooFewPoints),
    ("wavelength_nm,value_db\n1550,-50,3\n1600,-1\n", MalformedRow),
    ("wavelength_nm,value_db\n1550,abc\n1600,-1\n", MalformedRow),
    ("wl,db\n1550,-50\n1600,-1\n", MalformedRow),
    ("", MalformedRow),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_csv(text)


# --- properties ------------------------------------------------------------------

finite_db = st.floats(min_value=-120, max_value=20, allow_nan=False)


@st.composite
def curves(draw, lo=1000.0, hi=1800.0):
    n = draw(st.integers(min_value=2, max_value=12))
    inner = draw(st.lists(st.floats(min_value=lo + 1, max_value=hi - 1), min_size=n - 2,
                          max_size=n - 2, unique=True))
    wl = sorted({lo, hi, *inner})
    vals = draw(st.lists(finite_db, min_size=len(wl), max_size=len(wl)))
    return SpectralCurve(wl, vals)


@settings(max_examples=300, deadline=None)
@given(c=curves(), frac=st.floats(min_value=0, max_value=1))
def test_interpolation_bounded_by_neighbours(c, frac):
    lam = c.lo + frac * (c.hi - c.lo)
    v = interpolate_db(c, lam)
    i = min(max(np.searchsorted(c.wavelengths_nm, lam) - 1, 0), len(c) - 2)
    lo_v, hi_v = sorted(c.values_db[i:i + 2])
    assert lo_v - 1e-9 <= v <= hi_v + 1e-9


def _same(a: SpectralCurve, b: SpectralCurve) -> bool:
    return a.allclose(b, atol=1e-9)


@settings(max_examples=1000, deadline=None)
@given(a=curves(), b=curves(), c=curves())
def test_compose_commutative_and_associative(a, b, c):
    assert _same(compose_serial([a, b]), compose_serial([b, a]))
    left = compose_serial([compose_serial([a, b]), c])
    right = compose_serial([a, compose_serial([b, c])])
    assert _same(left, right)
    assert _same(left, compose_serial([a, b, c]))


@settings(max_examples=1000, deadline=None)
@given(a=curves(), ref=curves())
def test_normalization_round_trip(a, ref):
    combined = compose_serial([a, ref])
    back = normalize_to_reference(combined, ref)
    for lam, v in zip(back.wavelengths_nm, back.values_db):
        assert math.isclose(v, interpolate_db(a, lam), abs_tol=1e-9)


@settings(max_examples=1000, deadline=None)
@given(f=curves(), r=curves())
def test_double_pass_symmetric(f, r):
    assert _same(double_pass(f, r), double_pass(r, f))


@settings(max_examples=200, deadline=None)
@given(c=curves())
def test_csv_round_trip_property(c):
    back = parse_csv(emit_csv(c))
    assert np.allclose(back.wavelengths_nm, c.wavelengths_nm, rtol=0, atol=1e-9)
    assert np.allclose(back.values_db, c.values_db, rtol=0, atol=1e-9)
