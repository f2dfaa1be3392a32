"""Reidemeister rewrites on diagrams, plus seeded random move sequences.

Every move returns a fresh :class:`Diagram`.  Sites are given in terms of the
input diagram (crossing indices and corners), so a recorded sequence can be
replayed from the same start.

Star faces are transported by anchoring each star at a corner of a crossing the
move leaves alone; a move that cannot do so, or that would destroy a star
region, raises :class:`MoveError`.  On the torus, edge classes are kept
consistent by a vertex gauge: adding ``phi(head) - phi(tail)`` to every edge
changes no circle class, and lets the local edges of a bigon or triangle be
zeroed before they are rewired.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .model import Annulus, Diagram, DiagramError, Slot, Sphere, Torus, slot_is_in, slot_is_over


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class Move:
    """``kind`` is one of R1+, R1-, R2+, R2-, R3; ``variant`` tags the sub-case."""

    kind: str
    site: tuple
    variant: str = ""

    def __str__(self):
        v = f"[{self.variant}]" if self.variant else ""
        return f"{self.kind}{v}@{self.site}"


def _add(u, v, s=1):
    return (u[0] + s * v[0], u[1] + s * v[1])


class _Builder:
    def __init__(self, d: Diagram):
        self.d = d
        self.signs = list(d.signs)
        self.link: dict[Slot, Slot] = dict(d.partner)
        self.torus = isinstance(d.ambient, Torus)
        self.cls: dict[Slot, tuple[int, int]] = {}
        if self.torus:
            for e, (tail, _) in d.ends.items():
                self.cls[tail] = d.edge_class(e)
        self.removed: set[int] = set()
        self.anchors: tuple | None = None
        if isinstance(d.ambient, Annulus):
            self.anchors = (d.ambient.origin, d.ambient.inf)

    def add(self, sign: int) -> int:
        self.signs.append(sign)
        return len(self.signs) - 1

    def connect(self, a: Slot, b: Slot, cls=(0, 0)):
        self.link[a] = b
        self.link[b] = a
        tail = a if not self.is_in(a) else b
        if self.is_in(a) == self.is_in(b):
            raise MoveError("rewiring broke the orientation")
        if self.torus:
            self.cls[tail] = cls

    def is_in(self, s: Slot) -> bool:
        return slot_is_in(self.signs[s[0]], s[1])

    def tail_class(self, s: Slot) -> tuple[int, int]:
        """Class of the edge through slot ``s``, along its orientation."""
        tail = s if not self.is_in(s) else self.link[s]
        return self.cls.get(tail, (0, 0))

    def gauge(self, phi: dict[int, tuple[int, int]]):
        if not self.torus:
            return
        for tail, head in list((s, self.link[s]) for s in self.link if not self.is_in(s)):
            a, b = phi.get(tail[0], (0, 0)), phi.get(head[0], (0, 0))
            self.cls[tail] = _add(_add(self.cls.get(tail, (0, 0)), b), a, -1)

    def reanchor(self, avoid: set[int], dead_faces: set[int] = frozenset()):
        """Move star anchors off the crossings in ``avoid``."""
        if self.anchors is None:
            return
        d = self.d
        out = []
        for cr in self.anchors:
            f = d.face_of(cr)
            if f in dead_faces:
                raise MoveError("move would destroy a star region")
            if cr[0] in avoid:
                alt = [c for c in d.faces[f].corners if c[0] not in avoid]
                if not alt:
                    raise MoveError("no anchor left for a star face")
                cr = alt[0]
            out.append(cr)
        self.anchors = tuple(out)

    def build(self) -> Diagram:
        keep = [c for c in range(len(self.signs)) if c not in self.removed]
        new_index = {c: i for i, c in enumerate(keep)}
        eid: dict[Slot, int] = {}
        nxt = 1
        for c in keep:
            for k in range(4):
                s = (c, k)
                if self.is_in(s) or s in eid:
                    continue
                cur = s
                while cur not in eid:
                    eid[cur] = nxt
                    head = self.link[cur]
                    eid[head] = nxt
                    nxt += 1
                    cur = (head[0], (head[1] + 2) % 4)
        try:
            slots = tuple(tuple(eid[(c, k)] for k in range(4)) for c in keep)
        except KeyError as err:
            raise MoveError(f"dangling slot {err}") from None
        signs = tuple(self.signs[c] for c in keep)
        amb = self.d.ambient
        if self.torus:
            amb = Torus.of({eid[t]: v for t, v in self.cls.items() if t[0] in new_index and v != (0, 0)})
        elif self.anchors is not None:
            o, i = self.anchors
            amb = Annulus((new_index[o[0]], o[1]), (new_index[i[0]], i[1]))
        else:
            amb = Sphere()
        try:
            return Diagram(slots, signs, amb, None, self.d.name)
        except DiagramError as err:
            raise MoveError(f"rewrite produced an invalid diagram: {err}") from None


# --- R1 ----------------------------------------------------------------------

R1_VARIANTS = ("+R", "+L", "-R", "-L")


def r1_insert(d: Diagram, edge: int, variant: str) -> Diagram:
    """Add a kink on ``edge``; variant is sign plus side (``+R``, ``+L``, ``-R``, ``-L``)."""
    if variant not in R1_VARIANTS:
        raise MoveError(f"unknown R1 variant {variant!r}")
    if edge not in d.ends:
        raise MoveError(f"no edge {edge}")
    b = _Builder(d)
    tail, head = d.ends[edge]
    cls = b.cls.get(tail, (0, 0))
    c = b.add(1 if variant[0] == "+" else -1)
    # (entry slot, loop from, loop to, exit slot)
    entry, lo, li, exit_ = {"+R": (3, 1, 0, 2), "+L": (0, 2, 3, 1), "-R": (0, 2, 1, 3), "-L": (1, 3, 0, 2)}[variant]
    b.connect(tail, (c, entry), cls)
    b.connect((c, lo), (c, li))
    b.connect((c, exit_), head)
    return b.build()


def monogons(d: Diagram) -> list[tuple[int, int]]:
    return [f.corners[0] for f in d.faces if len(f) == 1]


def r1_remove(d: Diagram, corner: tuple[int, int]) -> Diagram:
    c, k = corner[0], corner[1] % 4
    if d.partner.get((c, (k + 1) % 4)) != (c, k):
        raise MoveError(f"corner {corner} is not a monogon")
    if d.n < 2:
        raise MoveError("cannot remove the last crossing")
    x, y = d.partner[(c, (k + 2) % 4)], d.partner[(c, (k + 3) % 4)]
    if x[0] == c:
        raise MoveError("kink closes on itself")
    b = _Builder(d)
    b.reanchor({c}, {d.face_of((c, k))})
    total = _add(_add(b.tail_class((c, (k + 2) % 4)), b.tail_class((c, (k + 3) % 4))), b.tail_class((c, k)))
    b.removed.add(c)
    b.connect(x, y, total)
    return b.build()


# --- R2 ----------------------------------------------------------------------


def _walk_value(d: Diagram, corner) -> tuple[int, int]:
    s = (corner[0], (corner[1] + 1) % 4)
    v = d.edge_class(d.edge_at(s))
    return v if not d.is_in(s) else (-v[0], -v[1])


def _r2_wire(b: _Builder, step1: Slot, step2: Slot, over: int, classes=None) -> tuple[int, int]:
    """Push strand 2 across strand 1 through the face to the right of both walk steps.

    ``step`` is the slot where the walk leaves a crossing; the walk runs from
    that slot to its partner.
    """
    pre1, post1 = step1, b.link[step1]
    pre2, post2 = step2, b.link[step2]
    match1 = not b.is_in(pre1)  # walking with the orientation
    match2 = not b.is_in(pre2)
    # counterclockwise rays at each new crossing, in walk terms
    low_rays = ("1f", "2b", "1b", "2f")
    high_rays = ("2b", "1f", "2f", "1b")

    def is_in_ray(r):
        match = match1 if r[0] == "1" else match2
        return (r[1] == "b") == match

    def place(rays):
        under = "2" if over == 1 else "1"
        start = next(i for i, r in enumerate(rays) if r[0] == under and is_in_ray(r))
        rot = rays[start:] + rays[:start]
        sign = 1 if not is_in_ray(rot[1]) else -1
        return rot, sign

    low_rot, low_sign = place(low_rays)
    high_rot, high_sign = place(high_rays)
    cl, ch = b.add(low_sign), b.add(high_sign)
    lo = {r: (cl, i) for i, r in enumerate(low_rot)}
    hi = {r: (ch, i) for i, r in enumerate(high_rot)}
    pieces = classes or {}
    # pieces are given in walk direction; flip to edge orientation
    orient = lambda v, m: v if m else (-v[0], -v[1])
    b.link.pop(pre1, None), b.link.pop(pre2, None)
    b.connect(pre1, lo["1b"], orient(pieces.get("a1", (0, 0)), match1))
    b.connect(lo["1f"], hi["1b"], orient(pieces.get("b1", (0, 0)), match1))
    b.connect(hi["1f"], post1, orient(pieces.get("c1", (0, 0)), match1))
    b.connect(pre2, hi["2b"], orient(pieces.get("a2", (0, 0)), match2))
    b.connect(hi["2f"], lo["2b"], orient(pieces.get("b2", (0, 0)), match2))
    b.connect(lo["2f"], post2, orient(pieces.get("c2", (0, 0)), match2))
    return cl, ch


def r2_insert(d: Diagram, corner1, corner2, over: int = 1) -> Diagram:
    """Push the edge after ``corner2`` across the edge after ``corner1`` (same face)."""
    corner1 = (corner1[0], corner1[1] % 4)
    corner2 = (corner2[0], corner2[1] % 4)
    f = d.face_of(corner1)
    if d.face_of(corner2) != f:
        raise MoveError("R2 corners lie in different faces")
    s1 = (corner1[0], (corner1[1] + 1) % 4)
    s2 = (corner2[0], (corner2[1] + 1) % 4)
    if d.edge_at(s1) == d.edge_at(s2):
        raise MoveError("R2 needs two distinct edges")
    if over not in (1, 2):
        raise MoveError("over must be 1 or 2")
    b = _Builder(d)
    classes = None
    if b.torus:
        corners = d.faces[f].corners
        i1, i2 = corners.index(corner1), corners.index(corner2)
        sigma = (0, 0)
        j = (i1 + 1) % len(corners)
        while j != i2:
            sigma = _add(sigma, _walk_value(d, corners[j]))
            j = (j + 1) % len(corners)
        w1, w2 = _walk_value(d, corner1), _walk_value(d, corner2)
        a2 = (-sigma[0] - w1[0], -sigma[1] - w1[1])
        classes = {"c1": w1, "a2": a2, "c2": _add(w2, a2, -1)}
    _r2_wire(b, s1, s2, over, classes)
    return b.build()


def r2_variant(d: Diagram, corner1, corner2, over: int) -> str:
    s1 = (corner1[0], (corner1[1] + 1) % 4)
    s2 = (corner2[0], (corner2[1] + 1) % 4)
    # both walks keep the face on their right, so equal orientation flags mean opposite strands
    same = d.is_in(s1) != d.is_in(s2)
    return ("IIa" if same else "IIb") + f"/over{over}"


def bigons(d: Diagram) -> list[tuple[int, int]]:
    out = []
    for f in d.faces:
        if len(f) == 2 and f.corners[0][0] != f.corners[1][0]:
            (c1, k1), (c2, k2) = f.corners
            if slot_is_over(k1 + 1) == slot_is_over(k2):
                out.append(f.corners[0])
    return out


def r2_remove(d: Diagram, corner) -> Diagram:
    c1, k1 = corner[0], corner[1] % 4
    f = d.face_of((c1, k1))
    face = d.faces[f]
    if len(face) != 2:
        raise MoveError(f"corner {corner} is not in a bigon")
    (c2, k2), = [cr for cr in face.corners if cr != (c1, k1)]
    if c2 == c1:
        raise MoveError("bigon must span two crossings")
    if slot_is_over(k1 + 1) != slot_is_over(k2):
        raise MoveError("bigon strands alternate; not a Reidemeister II bigon")
    if d.n <= 2:
        raise MoveError("cannot remove the last crossings")
    xa, ya = d.partner[(c1, (k1 + 3) % 4)], d.partner[(c2, (k2 + 2) % 4)]
    xb, yb = d.partner[(c2, (k2 + 3) % 4)], d.partner[(c1, (k1 + 2) % 4)]
    if {xa[0], ya[0], xb[0], yb[0]} & {c1, c2}:
        raise MoveError("bigon strands close up locally")
    b = _Builder(d)
    star_faces = set(d.star_faces())
    if f in star_faces:
        raise MoveError("bigon is a star region")
    ends = {d.face_of((c1, (k1 + 2) % 4)), d.face_of((c2, (k2 + 2) % 4))}
    if len(star_faces & ends) == 2:
        raise MoveError("removal would merge the two star regions")
    b.reanchor({c1, c2})
    # zero the bigon sides: phi(c2) chosen so the alpha side carries no class
    e_alpha = (c1, (k1 + 1) % 4)
    v = b.tail_class(e_alpha)
    if b.is_in(e_alpha):  # alpha side runs c2 -> c1
        b.gauge({c2: v})
    else:
        b.gauge({c2: (-v[0], -v[1])})
    ca = _add(b.tail_class((c1, (k1 + 3) % 4)), b.tail_class((c2, (k2 + 2) % 4)))
    cb = _add(b.tail_class((c2, (k2 + 3) % 4)), b.tail_class((c1, (k1 + 2) % 4)))
    b.removed.update({c1, c2})
    b.connect(xa, ya, ca)
    b.connect(xb, yb, cb)
    return b.build()


# --- R3 ----------------------------------------------------------------------


def _triangle(d: Diagram, corner):
    f = d.faces[d.face_of(corner)]
    if len(f) != 3 or len({c for c, _ in f.corners}) != 3:
        return None
    sides = []
    cs = f.corners
    for i in range(3):
        (p, kp), (q, kq) = cs[i], cs[(i + 1) % 3]
        sides.append(((p, (kp + 1) % 4), (q, kq)))
    heights = [(slot_is_over(a[1]), slot_is_over(b_[1])) for a, b_ in sides]
    if (True, True) not in heights or (False, False) not in heights:
        return None
    return f, sides


def triangles(d: Diagram) -> list[tuple[int, int]]:
    return [f.corners[0] for f in d.faces if len(f) == 3 and _triangle(d, f.corners[0])]


def r3_variant(d: Diagram, corner) -> str:
    tri = _triangle(d, corner)
    if tri is None:
        return ""
    signs = {d.signs[c] for c, _ in tri[0].corners}
    return "positive" if signs == {1} else ("negative" if signs == {-1} else "mixed")


def r3(d: Diagram, corner) -> Diagram:
    tri = _triangle(d, corner)
    if tri is None:
        raise MoveError(f"corner {corner} is not an R3 triangle")
    face, sides = tri
    if face.id in d.star_faces():
        raise MoveError("triangle is a star region")
    crossings = {c for c, _ in face.corners}
    b = _Builder(d)
    b.reanchor(crossings)
    if b.torus:
        phi = {face.corners[0][0]: (0, 0)}
        for a, h in sides[:2]:
            v = b.tail_class(a)
            # new class = v + phi(head) - phi(tail), forced to zero
            if b.is_in(a):  # the side runs h -> a
                phi[h[0]] = _add(phi[a[0]], v)
            else:
                phi[h[0]] = _add(phi[a[0]], v, -1)
        b.gauge(phi)
    remap: dict[Slot, Slot] = {}
    inner = []
    for a, h in sides:
        # p1 is the crossing the strand meets first along its orientation
        p1_out, p2_in = (h, a) if b.is_in(a) else (a, h)
        p1_in = (p1_out[0], (p1_out[1] + 2) % 4)
        p2_out = (p2_in[0], (p2_in[1] + 2) % 4)
        remap[p1_in] = p2_in
        remap[p2_out] = p1_out
        inner.append((p2_out, p1_in))
    outer = {}
    for u in remap:
        if b.is_in(u):
            continue
        v = b.link[u]
        outer[(u, v)] = b.cls.get(u, (0, 0))
    for u in list(b.link):
        v = b.link[u]
        if not b.is_in(u) and u not in remap and v in remap:
            outer[(u, v)] = b.cls.get(u, (0, 0))
    for s in list(remap):
        b.link.pop(s, None)
        b.cls.pop(s, None)
    for (u, v), cls in outer.items():
        b.connect(remap.get(u, u), remap.get(v, v), cls)
    for u, v in inner:
        b.connect(u, v, (0, 0))
    return b.build()


# --- dispatch -----------------------------------------------------------------


def apply_move(d: Diagram, move: Move) -> Diagram:
    kind, site = move.kind, move.site
    if kind == "R1+":
        return r1_insert(d, *site)
    if kind == "R1-":
        return r1_remove(d, site)
    if kind == "R2+":
        return r2_insert(d, *site)
    if kind == "R2-":
        return r2_remove(d, site)
    if kind == "R3":
        return r3(d, site)
    raise MoveError(f"unknown move kind {kind!r}")


def _candidates(d: Diagram, kind: str, rng: random.Random) -> list[Move]:
    if kind == "R1+":
        e = rng.choice(d.edges())
        v = rng.choice(R1_VARIANTS)
        return [Move("R1+", (e, v), v)]
    if kind == "R1-":
        return [Move("R1-", c, "") for c in monogons(d)]
    if kind == "R2-":
        return [Move("R2-", c, "") for c in bigons(d)]
    if kind == "R3":
        return [Move("R3", c, r3_variant(d, c)) for c in triangles(d)]
    if kind == "R2+":
        faces = [f for f in d.faces if len(f) >= 2]
        out = []
        for _ in range(8):
            f = rng.choice(faces)
            c1, c2 = rng.sample(f.corners, 2)
            over = rng.choice((1, 2))
            out.append(Move("R2+", (c1, c2, over), r2_variant(d, c1, c2, over)))
        return out
    raise ValueError(kind)


def random_walk(d: Diagram, count: int, seed: int, cap: int | None = None, floor: int = 1):
    """Yield ``(move, diagram_after)`` for ``count`` validated random moves.

    Insertions are suppressed at ``cap`` crossings and deletions below ``floor``.
    """
    rng = random.Random(seed)
    cap = cap if cap is not None else d.n + 4
    cur = d
    done = 0
    attempts = 0
    while done < count:
        attempts += 1
        if attempts > 200 * (count + 1):
            raise RuntimeError("random move generator stalled")
        weights = {"R3": 4.0, "R2-": 1.5, "R1-": 1.0, "R1+": 1.0, "R2+": 1.5}
        if cur.n >= cap:
            weights["R1+"] = weights["R2+"] = 0.0
        elif cur.n + 2 > cap:
            weights["R2+"] = 0.0
        if cur.n <= floor:
            weights["R1-"] = weights["R2-"] = 0.0
        kinds = [k for k, w in weights.items() if w > 0]
        kind = rng.choices(kinds, [weights[k] for k in kinds])[0]
        cands = _candidates(cur, kind, rng)
        rng.shuffle(cands)
        for mv in cands:
            try:
                nxt = apply_move(cur, mv)
            except MoveError:
                continue
            if nxt.n < floor:
                continue
            yield mv, nxt
            cur = nxt
            done += 1
            break


def random_move_sequence(d: Diagram, count: int, seed: int, cap: int | None = None) -> list[Move]:
    return [mv for mv, _ in random_walk(d, count, seed, cap)]


def replay(d: Diagram, moves) -> list[Diagram]:
    out = [d]
    for mv in moves:
        out.append(apply_move(out[-1], mv))
    return out


# --- split links ------------------------------------------------------------


def disjoint_builder(d1: Diagram, d2: Diagram) -> tuple[_Builder, int]:
    off = d1.n
    b = _Builder(d1)
    b.signs.extend(d2.signs)
    for s, t in d2.partner.items():
        b.link[(s[0] + off, s[1])] = (t[0] + off, t[1])
    return b, off


def connected_sum_split(d1: Diagram, d2: Diagram | None) -> Diagram:
    """Connected diagram of the split link d1 (round the axis) and d2 (in a ball beside it).

    d2 is drawn inside the infinity face of d1 with its own infinity face
    merged into d1's, so it does not wind round the axis.  A Reidemeister II
    clasp joins an edge of d1's infinity face to an edge of d2's infinity
    face.  The stars stay where d1 had them.
    """
    if d2 is None:
        return d1
    if isinstance(d1.ambient, Torus) or isinstance(d2.ambient, Torus):
        raise MoveError("split construction is defined for annulus diagrams")
    d1 = d1 if isinstance(d1.ambient, Annulus) else d1.as_classical()
    d2 = d2 if isinstance(d2.ambient, Annulus) else d2.as_classical()
    b, off = disjoint_builder(d1, d2)
    inf1 = d1.faces[d1.face_of(d1.ambient.inf)].corners[0]
    inf2 = d2.faces[d2.face_of(d2.ambient.inf)].corners[0]
    s1 = (inf1[0], (inf1[1] + 1) % 4)
    s2 = (inf2[0] + off, (inf2[1] + 1) % 4)
    _r2_wire(b, s1, s2, over=1)
    b.anchors = (d1.ambient.origin, d1.ambient.inf)
    return b.build()
