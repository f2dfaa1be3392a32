import pytest
from hypothesis import given, settings, strategies as st

from doublebracket.diagram import (
    Annulus, Diagram, DiagramError, PDParseError, Sphere, Torus, faces, format_pd, from_pd, parse_pd, writhe,
)

from conftest import CORPUS, corpus, kink, load

ALL = corpus("knots") + corpus("classical") + corpus("split") + corpus("torus")


def test_trefoil_counts(trefoil):
    assert trefoil.n == 3
    assert len(trefoil.edges()) == 6
    assert len(faces(trefoil)) == 5
    assert writhe(trefoil) == 3
    assert set(trefoil.signs) == {1}


def test_left_trefoil_writhe(trefoil_left):
    assert writhe(trefoil_left) == -3


def test_kink_faces():
    d = kink()
    assert d.n == 1
    assert len(faces(d)) == 3


def test_one_crossing_has_one_face(one_crossing):
    assert isinstance(one_crossing.ambient, Torus)
    assert len(faces(one_crossing)) == 1
    assert sorted(one_crossing.component_classes()) == [(0, 1), (1, 0)]


@pytest.mark.parametrize("path", ALL, ids=lambda p: p.stem)
def test_euler_count(path):
    d = load(path.parent.name, path.stem)
    expected = d.n if isinstance(d.ambient, Torus) else d.n + 2
    assert len(d.faces) == expected
    corners = [c for f in d.faces for c in f.corners]
    assert sorted(corners) == sorted((c, k) for c in range(d.n) for k in range(4))


@pytest.mark.parametrize("path", ALL, ids=lambda p: p.stem)
def test_format_round_trip(path):
    d = load(path.parent.name, path.stem)
    again = parse_pd(format_pd(d))
    assert again.canonical() == d.canonical()
    assert again.ambient == d.ambient


def test_torus_face_boundaries_are_null_homologous():
    for path in corpus("torus"):
        d = load("torus", path.stem)
        total = [0, 0]
        for p, q in (d.edge_class(e) for e in d.edges()):
            total[0] += p
            total[1] += q
        assert tuple(total) == tuple(map(sum, zip(*d.component_classes())))


def test_split_stars_adjacent():
    for path in corpus("split"):
        d = load("split", path.stem)
        assert isinstance(d.ambient, Annulus)
        assert d.stars_adjacent()


def test_classical_default_stars_adjacent(trefoil):
    d = trefoil.as_classical()
    assert d.stars_adjacent()
    assert len(set(d.star_faces())) == 2


def test_mirror(trefoil, trefoil_left):
    assert trefoil.mirror().canonical() == trefoil_left.canonical()
    assert trefoil.mirror().mirror().canonical() == trefoil.canonical()


def test_parse_errors_carry_location():
    with pytest.raises(PDParseError, match="no crossings"):
        parse_pd("")
    with pytest.raises(PDParseError) as err:
        parse_pd("X1 u_in=1 o_out=1 u_out=2 o_in=2\nX2 u_in=2 o_out=1 u_out=1 o_in=2\n")
    assert err.value.line >= 1


def test_slot_used_twice_rejected():
    with pytest.raises(DiagramError):
        from_pd([(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 3)])


def test_disconnected_rejected():
    with pytest.raises(DiagramError, match="disconnected"):
        from_pd([(1, 2, 2, 1), (3, 4, 4, 3)])


def test_annulus_stars_must_differ(trefoil):
    c = trefoil.default_stars().origin
    with pytest.raises(DiagramError):
        trefoil.with_ambient(Annulus(c, c))


def test_corpus_is_bundled():
    assert len(corpus("knots")) == 35
    assert len(corpus("split")) >= 10
    assert (CORPUS / "torus" / "one_crossing.pd").exists()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(corpus("knots")))
def test_crossing_count_matches_name(path):
    d = load("knots", path.stem)
    assert d.n == int(path.stem.split("_")[0])
    assert isinstance(d.ambient, Sphere)
    assert len(d.components) == 1
