import pytest
from hypothesis import given, settings, strategies as st

from doublebracket.diagram import (
    Annulus, Move, MoveError, Torus, apply_move, bigons, connected_sum_split, monogons, r1_insert, r1_remove,
    r2_insert, r2_remove, r3, random_move_sequence, random_walk, replay, triangles,
)
from doublebracket.invariant import w_poly

from conftest import corpus, kink, load


def _r2_site(d):
    f = max(d.faces, key=len)
    return f.corners[0], f.corners[1]


def test_r1_insert_then_remove(trefoil):
    for variant in ("+R", "+L", "-R", "-L"):
        e = trefoil.edges()[0]
        k = r1_insert(trefoil, e, variant)
        assert k.n == 4
        assert k.writhe() == trefoil.writhe() + (1 if variant[0] == "+" else -1)
        loops = monogons(k)
        assert loops
        back = r1_remove(k, loops[0])
        assert back.canonical() == trefoil.canonical()


def test_r2_insert_counts_and_removal(trefoil):
    c1, c2 = _r2_site(trefoil)
    for over in (1, 2):
        d = r2_insert(trefoil, c1, c2, over)
        assert d.n == trefoil.n + 2
        assert len(d.faces) == len(trefoil.faces) + 2
        assert d.writhe() == trefoil.writhe()
        assert any(r2_remove(d, b).canonical() == trefoil.canonical() for b in bigons(d))


def test_r3_keeps_counts():
    seen = 0
    for _, d in random_walk(load("knots", "5_2").as_classical(), 150, 4):
        for corner in triangles(d):
            try:
                e = r3(d, corner)
            except MoveError:
                continue
            assert e.n == d.n
            assert len(e.faces) == len(d.faces)
            assert sorted(e.signs) == sorted(d.signs)
            seen += 1
    assert seen > 0


def test_move_errors(trefoil):
    with pytest.raises(MoveError):
        r1_insert(trefoil, 99, "+R")
    with pytest.raises(MoveError):
        r1_insert(trefoil, 1, "sideways")
    with pytest.raises(MoveError):
        apply_move(trefoil, Move("R4", ()))


def test_random_sequence_contract(trefoil):
    assert random_move_sequence(trefoil, 0, 3) == []
    a = random_move_sequence(trefoil, 50, 7)
    assert a == random_move_sequence(trefoil, 50, 7)
    assert len(a) == 50
    assert a != random_move_sequence(trefoil, 50, 8)


def test_random_walk_every_step_valid(trefoil):
    d0 = trefoil.as_classical()
    steps = list(random_walk(d0, 50, 7))
    assert len(steps) == 50
    for _, d in steps:
        assert len(d.faces) == d.n + 2
        assert d.stars_adjacent()
    kinds = {mv.kind for mv, _ in steps}
    assert {"R1+", "R2+"} <= kinds


def test_replay_reproduces_walk(trefoil):
    d0 = trefoil.as_classical()
    steps = list(random_walk(d0, 30, 11))
    final = replay(d0, [mv for mv, _ in steps])[-1]
    assert final.canonical() == steps[-1][1].canonical()


def test_walk_covers_all_variants():
    variants = set()
    for path in corpus("knots")[:10]:
        for mv, _ in random_walk(load("knots", path.stem).as_classical(), 200, 1):
            variants.add(mv.kind if mv.kind == "R3" else (mv.kind, mv.variant))
    for v in ("+R", "+L", "-R", "-L"):
        assert ("R1+", v) in variants
    assert "R3" in variants
    assert {k for k, *_ in (v for v in variants if isinstance(v, tuple))} >= {"R1+", "R1-", "R2+", "R2-"}


def test_torus_walk_preserves_component_classes(one_crossing):
    before = sorted(one_crossing.component_classes())
    for _, d in random_walk(one_crossing, 60, 2):
        assert isinstance(d.ambient, Torus)
        assert len(d.faces) == d.n
        assert sorted(d.component_classes()) == before


def test_split_construction_shapes(trefoil):
    k = kink()
    d = connected_sum_split(k, k)
    assert d.n == 4
    assert isinstance(d.ambient, Annulus)
    assert len(d.components) == 2
    assert connected_sum_split(trefoil, None) is trefoil
    s = connected_sum_split(trefoil, k)
    assert s.n == trefoil.n + 1 + 2
    assert w_poly(s).value.is_zero()


def test_split_rejects_torus(one_crossing, trefoil):
    with pytest.raises(MoveError):
        connected_sum_split(one_crossing, trefoil)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(corpus("knots")[:20]), st.sampled_from(corpus("knots")[:20]))
def test_random_split_pairs_vanish(a, b):
    d = connected_sum_split(load("knots", a.stem), load("knots", b.stem))
    assert w_poly(d).value.is_zero()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_walks_are_seed_deterministic(seed):
    d = kink().as_classical()
    a = [str(mv) for mv, _ in random_walk(d, 15, seed)]
    b = [str(mv) for mv, _ in random_walk(d, 15, seed)]
    assert a == b
