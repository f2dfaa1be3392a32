import pytest
from hypothesis import given, settings, strategies as st

from doublebracket.diagram import Annulus, connected_sum_split, r1_insert, r2_insert
from doublebracket.invariant import (
    HLinearityError, WeightError, alexander_state_poly, bracket, default_scheme, double_bracket, half_to_t,
    jones_in_t, jones_poly, load_weight_scheme, normalizer, reference_sum, w_poly, wh_poly,
)
from doublebracket.invariant.engine import double_sum
from doublebracket.polyring import LaurentPoly, invert_xy, parse_poly
from doublebracket.states import enumerate_alexander_states, enumerate_smoothings

from conftest import corpus, kink, load

x, y, t = (LaurentPoly.var(v) for v in "xyt")

# W of the right trefoil at z = 1 with h forgotten, as printed.
TREFOIL_H = x ** 4 + x ** 2 * y ** 2 + y ** 4
TREFOIL_P = sum((LaurentPoly.monomial(1, x=-k, y=-k) for k in (10, 8, 4)), LaurentPoly())
ONE_CROSSING = parse_poly("(x^2 + y^2 - 2*i*x*y*t)*|a+b| + (2 + i*x*y^-1*t + i*x^-1*y*t)*|a-b|")


def test_trefoil_golden(trefoil):
    assert w_poly(trefoil, set_z_1=True, h_mode="forget").value == TREFOIL_H * TREFOIL_P


def test_left_trefoil_golden(trefoil_left):
    assert w_poly(trefoil_left, set_z_1=True, h_mode="forget").value == invert_xy(TREFOIL_H * TREFOIL_P)


def test_one_crossing_golden(one_crossing):
    res = wh_poly(one_crossing, set_z_1=True, count_states=True)
    assert res.value == ONE_CROSSING
    assert res.state_count == (4, 2)


def test_trefoil_sum_over_24_double_states(trefoil):
    d = trefoil.as_classical()
    total = LaurentPoly()
    n = 0
    for ts in enumerate_alexander_states(d):
        for s in enumerate_smoothings(d):
            total = total + double_bracket(d, ts, s)
            n += 1
    assert n == 24
    value = (normalizer(d.writhe()) * total).substitute({"z": 1, "h": 1})
    assert value == TREFOIL_H * TREFOIL_P


@pytest.mark.parametrize("variant, factor", [
    ("+R", "x^2*y^2*z^-2"), ("+L", "x^2*y^2*z^-2"), ("-R", "x^-2*y^-2*z^2"), ("-L", "x^-2*y^-2*z^2"),
])
def test_r1_multiplier(trefoil, variant, factor):
    d = trefoil.as_classical()
    for e in d.edges():
        k = r1_insert(d, e, variant)
        assert reference_sum(k) == parse_poly(factor) * reference_sum(d)


def test_r1_multiplier_torus(one_crossing):
    k = r1_insert(one_crossing, 1, "+R")
    assert reference_sum(k) == parse_poly("x^2*y^2*z^-2") * reference_sum(one_crossing)


SMALL = [p for p in corpus("knots") + corpus("classical") + corpus("split") + corpus("torus")
         if load(p.parent.name, p.stem).n <= 7]


@pytest.mark.parametrize("path", SMALL, ids=lambda p: p.stem)
def test_dp_matches_brute_force(path):
    d = load(path.parent.name, path.stem)
    assert double_sum(d, default_scheme()) == reference_sum(d)


@pytest.mark.parametrize("path", corpus("knots") + corpus("classical"), ids=lambda p: p.stem)
def test_structure(path):
    d = load(path.parent.name, path.stem)
    w = w_poly(d).value
    assert w.homogeneous_degree("xyz") == 0
    assert w.degrees("h") == {1}


def test_torus_homogeneity():
    # every cell has degree +-2, so only the full writhe cancels the degree exactly
    for path in corpus("torus"):
        d = load("torus", path.stem)
        assert wh_poly(d, writhe="full").value.homogeneous_degree("xyz") == 0
        mixed = d.writhe() - d.self_writhe()
        assert wh_poly(d).value.homogeneous_degree("xyz") == 2 * mixed


def test_split_vanishes():
    for path in corpus("split"):
        assert w_poly(load("split", path.stem)).value.is_zero()


def test_h_forget_rejects_non_meridian(trefoil):
    # stars in the central and outer faces: the axis threads the trefoil twice
    center = max(trefoil.faces, key=len)
    outer = next(f for f in trefoil.faces if len(f) == len(center) and f.id != center.id)
    d = trefoil.with_ambient(Annulus(center.corners[0], outer.corners[0]))
    assert not d.stars_adjacent()
    assert w_poly(d).value.degrees("h") - {1}
    with pytest.raises(HLinearityError):
        w_poly(d, h_mode="forget")
    with pytest.raises(ValueError):
        w_poly(d, h_mode="sometimes")


def test_h_linearity_error_type():
    assert issubclass(HLinearityError, ValueError)


def test_torus_modes_refuse_wrong_ambient(trefoil, one_crossing):
    with pytest.raises(ValueError):
        wh_poly(trefoil)
    with pytest.raises(ValueError):
        w_poly(one_crossing)


def test_self_and_full_writhe_differ_by_a_monomial():
    for path in corpus("torus"):
        d = load("torus", path.stem)
        a, b = wh_poly(d, writhe="self").value, wh_poly(d, writhe="full").value
        shift = d.writhe() - d.self_writhe()
        assert a == b * normalizer(-shift)


def test_mirror_inverts(trefoil):
    d = load("knots", "5_2")
    assert w_poly(d.mirror(), set_z_1=True, h_mode="forget").value == invert_xy(
        w_poly(d, set_z_1=True, h_mode="forget").value)


# --- weight table ---------------------------------------------------------------


def test_weight_table_shape():
    w = default_scheme()
    assert len(w.double) == 8
    assert load_weight_scheme(w.to_text()).double == w.double


def test_empty_weight_table_rejected():
    with pytest.raises(WeightError):
        load_weight_scheme("")


def test_weight_table_rejects_polynomials():
    text = default_scheme().to_text().replace("cell IN A = x^2", "cell IN A = x^2 + y")
    with pytest.raises(WeightError, match="monomial"):
        load_weight_scheme(text)


# --- Alexander and Jones on the same machinery ------------------------------------


def test_alexander_trefoil(trefoil):
    assert alexander_state_poly(trefoil) == t - 1 + t ** -1
    assert alexander_state_poly(trefoil, variable="s") == parse_poly("s^2 - 1 + s^-2")


def test_alexander_kink_is_a_unit():
    assert alexander_state_poly(kink()).is_unit_monomial()


def test_alexander_split_vanishes():
    k = kink()
    assert alexander_state_poly(connected_sum_split(k, k)).is_zero()
    for path in corpus("split"):
        assert alexander_state_poly(load("split", path.stem)).is_zero()


def test_half_to_t():
    assert half_to_t(parse_poly("s - s^-1")) == parse_poly("1 - t^-1")
    with pytest.raises(ValueError):
        half_to_t(parse_poly("s + 1"))


def test_jones_unknot_and_trefoils(trefoil, trefoil_left):
    assert jones_poly(kink()) == LaurentPoly.const(1)
    assert jones_poly(trefoil) == parse_poly("-A^-16 + A^-12 + A^-4")
    # A = t^(-1/4): the right trefoil is t + t^3 - t^4
    assert jones_in_t(jones_poly(trefoil)) == parse_poly("-t^4 + t^3 + t")
    assert jones_in_t(jones_poly(trefoil_left)) == parse_poly("-t^-4 + t^-3 + t^-1")


def test_jones_mirror(trefoil):
    d = load("knots", "6_2")
    assert jones_poly(d.mirror()) == jones_poly(d).substitute({"A": LaurentPoly.var("A", -1)})


def test_bracket_of_kink():
    # <kink> = -A^{+-3}
    assert bracket(kink()) in (parse_poly("-A^3"), parse_poly("-A^-3"))


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(corpus("knots")[:12]), st.integers(0, 50), st.integers(1, 2))
def test_r2_insertion_keeps_w(path, pick, over):
    d = load("knots", path.stem).as_classical()
    f = [f for f in d.faces if len(f) >= 2][pick % sum(1 for f in d.faces if len(f) >= 2)]
    c1, c2 = f.corners[0], f.corners[1]
    assert w_poly(r2_insert(d, c1, c2, over)).value == w_poly(d).value
