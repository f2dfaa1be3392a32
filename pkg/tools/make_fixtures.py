"""Regenerate the hand-made fixtures: trefoils, torus diagrams and split links.

Development helper only::

    python tools/make_fixtures.py src/doublebracket/data/corpus
"""

import itertools
import math
import sys
from pathlib import Path

from doublebracket.diagram import Diagram, DiagramError, Torus, connected_sum_split, format_pd, from_pd, read_pd
from doublebracket.invariant import wh_poly
from doublebracket.states import enumerate_alexander_states

TREFOIL = [(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)]


def classical(out: Path):
    out.mkdir(parents=True, exist_ok=True)
    right = from_pd(TREFOIL, name="trefoil_right")
    (out / "trefoil_right.pd").write_text(format_pd(right, [
        "Right-handed trefoil, standard PD [[1,5,2,4],[3,1,4,6],[5,3,6,2]]; all crossings positive.",
    ]))
    left = right.mirror()
    left = Diagram(left.slots, left.signs, left.ambient, left.labels, "trefoil_left")
    (out / "trefoil_left.pd").write_text(format_pd(left, ["Mirror image of trefoil_right.pd."]))


def _spanning(vectors):
    g = 0
    for u, v in itertools.combinations(vectors, 2):
        g = math.gcd(g, u[0] * v[1] - u[1] * v[0])
    return g == 1


def _classes(d: Diagram):
    """First edge-class assignment (tree edges zero, others in {-1,0,1}^2) making a cellular torus map."""
    tree, seen = [], {0}
    frontier = True
    while frontier:
        frontier = False
        for e, (tail, head) in sorted(d.ends.items()):
            if (tail[0] in seen) != (head[0] in seen):
                tree.append(e)
                seen |= {tail[0], head[0]}
                frontier = True
    free = [e for e in sorted(d.ends) if e not in tree]
    box = [(p, q) for p in (-1, 0, 1) for q in (-1, 0, 1)]
    for combo in itertools.product(box, repeat=len(free)):
        if not _spanning(combo):
            continue
        cls = {e: v for e, v in zip(free, combo) if v != (0, 0)}
        try:
            t = Diagram(d.slots, d.signs, Torus.of(cls), d.labels)
        except DiagramError:
            continue
        if all(c != (0, 0) for c in t.component_classes()):
            return t
    return None


def torus_maps(n: int):
    """All torus diagrams with ``n`` crossings up to isomorphism, with a class assignment."""
    edges = [e for e in range(1, 2 * n + 1) for _ in range(2)]
    seen, out = set(), []
    for perm in sorted(set(itertools.permutations(edges))):
        slots = tuple(tuple(perm[4 * c:4 * c + 4]) for c in range(n))
        for signs in itertools.product((1, -1), repeat=n):
            try:
                bare = Diagram(slots, signs, Torus(()))
            except DiagramError:
                continue
            key = bare.canonical()
            if key in seen:
                continue
            seen.add(key)
            t = _classes(bare)
            if t is not None:
                out.append(t)
    return out


def torus(out: Path):
    out.mkdir(parents=True, exist_ok=True)
    fig = Diagram(((1, 2, 1, 2),), (1,), Torus.of({1: (1, 0), 2: (0, 1)}), name="one_crossing")
    (out / "one_crossing.pd").write_text(format_pd(fig, [
        "Two curves a (edge 1, class a=(1,0)) and b (edge 2, class b=(0,1)) meeting in one",
        "positive crossing, a over b.  Eight double states.",
    ]))
    values, per_count = set(), {}
    maps = torus_maps(2)
    # one map whose total class is even, so some states have two non-contractible circles
    even = next(t for t in maps if all(sum(v) % 2 == 0 for v in zip(*t.component_classes())))
    for t in [even] + maps:
        value = wh_poly(t).value
        k = len(t.components)
        if value in values or (per_count.get(k, 0) >= 2 and t is not even):
            continue
        values.add(value)
        per_count[k] = per_count.get(k, 0) + 1
        name = f"torus2_{len(values)}"
        t = Diagram(t.slots, t.signs, t.ambient, t.labels, name)
        states = len(enumerate_alexander_states(t))
        (out / f"{name}.pd").write_text(format_pd(t, [
            f"Two-crossing torus map from an exhaustive search; {states} Alexander states,",
            f"{len(t.components)} component(s).",
        ]))


SPLIT_PAIRS = [
    ("3_1", "3_1"), ("3_1", "4_1"), ("4_1", "3_1"), ("3_1", "5_1"), ("5_2", "3_1"),
    ("4_1", "4_1"), ("3_1", "6_1"), ("6_2", "3_1"), ("4_1", "5_2"), ("5_1", "4_1"),
    ("trefoil_left", "trefoil_right"), ("trefoil_right", "6_3"),
]


def split(root: Path):
    out = root / "split"
    out.mkdir(parents=True, exist_ok=True)

    def load(name):
        p = root / "knots" / f"{name}.pd"
        return read_pd(p if p.exists() else root / "classical" / f"{name}.pd")

    for a, b in SPLIT_PAIRS:
        d = connected_sum_split(load(a), load(b))
        d = Diagram(d.slots, d.signs, d.ambient, d.labels, f"split_{a}_{b}")
        (out / f"split_{a}__{b}.pd").write_text(format_pd(d, [
            f"Split link: {a} round the axis, {b} in a ball beside it, joined by a",
            "Reidemeister II clasp so the diagram is connected.  W vanishes.",
        ]))


def main(root):
    root = Path(root)
    classical(root / "classical")
    torus(root / "torus")
    split(root)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/doublebracket/data/corpus")
