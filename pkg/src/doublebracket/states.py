"""Alexander states, smoothing states and their resolved circles.

Smoothings are named in bracket convention: the A-smoothing opens a channel
between the two quadrants swept when the over-strand is turned
counterclockwise onto the under-strand.  In orientation terms the A-smoothing
of a positive crossing is the oriented one (its channel joins IN and OUT) and
the A-smoothing of a negative crossing is the unoriented one.

A smoothing replaces each crossing by two arcs.  The arc joining slot ``k``
to slot ``k + 1`` cups quadrant ``k``; walking it from ``k`` to ``k + 1`` keeps
that quadrant on the right.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterator

from .diagram.model import Annulus, Diagram, Slot, Torus
from .polyring import canonical_class

CONTRACTIBLE, CORE, TORUS_CLASS = "contractible", "core", "class"


@dataclass(frozen=True)
class AlexanderState:
    """``dots[c]`` is the quadrant index holding crossing ``c``'s dot."""

    dots: tuple[int, ...]

    def faces(self, d: Diagram) -> tuple[int, ...]:
        return tuple(d.face_of((c, k)) for c, k in enumerate(self.dots))


@dataclass(frozen=True)
class SmoothingState:
    choice: tuple[str, ...]

    def __str__(self):
        return "".join(self.choice)


@dataclass(frozen=True)
class StateCircle:
    """``arcs`` lists ``(crossing, entry slot, exit slot)`` in traversal order."""

    id: int
    arcs: tuple[tuple[int, int, int], ...]
    kind: str = CONTRACTIBLE
    homology: tuple[int, int] = (0, 0)
    weight: int | None = None

    @property
    def contractible(self) -> bool:
        return self.kind == CONTRACTIBLE


@dataclass(frozen=True)
class ResolvedCircles:
    circles: tuple[StateCircle, ...]
    fragment_map: dict = field(compare=False)  # slot -> circle id

    def counts(self) -> tuple[int, int]:
        """(contractible, non-contractible)."""
        nc = sum(1 for c in self.circles if c.contractible)
        return nc, len(self.circles) - nc


# --- smoothing geometry ---------------------------------------------------------


def oriented_smoothing(sign: int, letter: str) -> str:
    """'V' (oriented) or 'H' for a bracket letter at a crossing of the given sign."""
    return "V" if (letter == "A") == (sign > 0) else "H"


def cupped_quadrants(d: Diagram, c: int, letter: str) -> tuple[int, int]:
    kind = oriented_smoothing(d.signs[c], letter)
    wanted = ("LEFT", "RIGHT") if kind == "V" else ("IN", "OUT")
    return tuple(k for k in range(4) if d.quadrant_geometry((c, k)) in wanted)


# --- enumeration ----------------------------------------------------------------


def star_faces(d: Diagram) -> tuple[int, ...]:
    if isinstance(d.ambient, Torus):
        return ()
    if isinstance(d.ambient, Annulus):
        return d.star_faces()
    return d.as_classical().star_faces()


def incidence(d: Diagram, stars=None) -> tuple[list[int], list[list[int]]]:
    """Non-star faces and the crossing x face matrix of quadrant multiplicities."""
    stars = set(star_faces(d) if stars is None else stars)
    cols = [f.id for f in d.faces if f.id not in stars]
    pos = {f: j for j, f in enumerate(cols)}
    mat = [[0] * len(cols) for _ in range(d.n)]
    for c in range(d.n):
        for k in range(4):
            f = d.face_of((c, k))
            if f in pos:
                mat[c][pos[f]] += 1
    return cols, mat


def enumerate_alexander_states(d: Diagram, stars=None) -> list[AlexanderState]:
    """All dot placements with exactly one dot in every non-star face (backtracking)."""
    stars = set(star_faces(d) if stars is None else stars)
    free = [f.id for f in d.faces if f.id not in stars]
    if len(free) != d.n:
        return []
    options = [[k for k in range(4) if d.face_of((c, k)) not in stars] for c in range(d.n)]
    out: list[AlexanderState] = []
    used: set[int] = set()
    cur = [0] * d.n

    def place(c):
        if c == d.n:
            out.append(AlexanderState(tuple(cur)))
            return
        for k in options[c]:
            f = d.face_of((c, k))
            if f in used:
                continue
            used.add(f)
            cur[c] = k
            place(c + 1)
            used.discard(f)

    place(0)
    return out


def enumerate_smoothings(d: Diagram | int) -> Iterator[SmoothingState]:
    """All 2^n states, streamed in binary-counter order (crossing 0 is the slowest digit)."""
    n = d if isinstance(d, int) else d.n
    for bits in itertools.product("AB", repeat=n):
        yield SmoothingState(bits)


# --- resolution -----------------------------------------------------------------


def resolve(d: Diagram, s: SmoothingState) -> ResolvedCircles:
    mate: dict[Slot, Slot] = {}
    for c, letter in enumerate(s.choice):
        for k in cupped_quadrants(d, c, letter):
            a, b = (c, k), (c, (k + 1) % 4)
            mate[a], mate[b] = b, a
    seen: dict[Slot, int] = {}
    circles = []
    for c in range(d.n):
        for k in range(4):
            start = (c, k)
            if start in seen:
                continue
            cid = len(circles)
            arcs = []
            cur = start
            while cur not in seen:
                nxt = mate[cur]
                seen[cur] = seen[nxt] = cid
                arcs.append((cur[0], cur[1], nxt[1]))
                cur = d.partner[nxt]
            circles.append(StateCircle(cid, tuple(arcs)))
    return ResolvedCircles(tuple(circles), seen)


def dual_path_edges(d: Diagram) -> set[int]:
    """Edges crossed an odd number of times by a dual path from the origin star to the infinity star."""
    amb = d.ambient if isinstance(d.ambient, Annulus) else d.default_stars()
    src, dst = d.face_of(amb.origin), d.face_of(amb.inf)
    adj: dict[int, list[tuple[int, int]]] = {}
    for e in d.ends:
        left, right = d.edge_faces(e)
        adj.setdefault(left, []).append((right, e))
        adj.setdefault(right, []).append((left, e))
    prev = {src: None}
    queue = deque([src])
    while queue:
        f = queue.popleft()
        if f == dst:
            break
        for g, e in sorted(adj.get(f, [])):
            if g not in prev:
                prev[g] = (f, e)
                queue.append(g)
    flags: set[int] = set()
    f = dst
    while prev[f] is not None:
        f, e = prev[f]
        flags ^= {e}
    return flags


def _arc_edge_steps(d: Diagram, circle: StateCircle):
    """(edge, +1/-1) for every edge leaving an arc along the traversal."""
    for c, _, out in circle.arcs:
        s = (c, out)
        yield d.edge_at(s), (-1 if d.is_in(s) else 1)


def classify_circles(d: Diagram, r: ResolvedCircles) -> ResolvedCircles:
    amb = d.ambient
    out = []
    if isinstance(amb, Torus):
        for circ in r.circles:
            p = q = 0
            for e, sgn in _arc_edge_steps(d, circ):
                a, b = d.edge_class(e)
                p += sgn * a
                q += sgn * b
            cls = canonical_class(p, q)
            kind = CONTRACTIBLE if cls == (0, 0) else TORUS_CLASS
            out.append(replace(circ, kind=kind, homology=cls))
    else:
        flags = dual_path_edges(d)
        for circ in r.circles:
            odd = sum(1 for e, _ in _arc_edge_steps(d, circ) if e in flags) % 2
            out.append(replace(circ, kind=CORE if odd else CONTRACTIBLE))
    return ResolvedCircles(tuple(out), r.fragment_map)


@dataclass(frozen=True)
class CountingDot:
    crossing: int
    circle: int
    side: str  # "right" or "left"


def counting_dots(d: Diagram, t: AlexanderState, s: SmoothingState, r: ResolvedCircles) -> list[CountingDot]:
    """Dots whose quadrant is cupped by an arc of the smoothing, with their nearest circle and side."""
    out = []
    for c, k in enumerate(t.dots):
        if k not in cupped_quadrants(d, c, s.choice[c]):
            continue
        cid = r.fragment_map[(c, k)]
        circ = r.circles[cid]
        side = None
        for cc, a, b in circ.arcs:
            if cc != c:
                continue
            if (a, b) == (k, (k + 1) % 4):
                side = "right"
            elif (a, b) == ((k + 1) % 4, k):
                side = "left"
        assert side is not None, "cupping arc not found on its circle"
        out.append(CountingDot(c, cid, side))
    return out


def circle_weight(r: ResolvedCircles, dots: list[CountingDot]) -> ResolvedCircles:
    tally = [0] * len(r.circles)
    for dot in dots:
        tally[dot.circle] += 1 if dot.side == "right" else -1
    circles = tuple(replace(c, weight=abs(tally[c.id])) for c in r.circles)
    return ResolvedCircles(circles, r.fragment_map)


def double_state_circles(d: Diagram, t: AlexanderState, s: SmoothingState) -> ResolvedCircles:
    r = classify_circles(d, resolve(d, s))
    return circle_weight(r, counting_dots(d, t, s, r))


def dump_double_state(d: Diagram, t: AlexanderState, s: SmoothingState) -> str:
    """Plain-text census of one double state (used by golden tests)."""
    r = double_state_circles(d, t, s)
    lines = ["dots: " + " ".join(f"{d.labels[c]}:{d.quadrant_label((c, k))}@f{d.face_of((c, k))}" for c, k in enumerate(t.dots))]
    lines.append(f"smoothing: {s}")
    for circ in r.circles:
        cls = f" class={circ.homology}" if circ.kind == TORUS_CLASS else ""
        lines.append(f"circle {circ.id}: {circ.kind}{cls} v={circ.weight} arcs={len(circ.arcs)}")
    return "\n".join(lines)
