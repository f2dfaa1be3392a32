"""Oriented link diagrams as combinatorial maps.

A crossing owns four half-edge slots numbered counterclockwise, slot 0 being
the incoming under-strand.  Slot roles follow from the sign::

    positive: (u_in, o_out, u_out, o_in)
    negative: (u_in, o_in, u_out, o_out)

Quadrant ``k`` of a crossing is the corner between slot ``k`` and slot
``k + 1``.  Faces are traced by the corner successor
``(c, k) -> partner(c, k + 1)``, which walks every face with the face on the
right-hand side.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

Slot = tuple[int, int]
Corner = tuple[int, int]

IN, OUT, OI, UI = "IN", "OUT", "OI", "UI"
QUADRANT_LABELS = (IN, OUT, OI, UI)


class DiagramError(ValueError):
    """Invalid diagram data.  ``crossing`` names the offending crossing when known."""

    def __init__(self, message: str, crossing: str | None = None):
        super().__init__(message if crossing is None else f"{message} (crossing {crossing})")
        self.crossing = crossing


def slot_is_in(sign: int, k: int) -> bool:
    k %= 4
    if k == 0:
        return True
    if k == 2:
        return False
    return (k == 1) == (sign < 0)


def slot_is_over(k: int) -> bool:
    return k % 2 == 1


def slot_role(sign: int, k: int) -> str:
    return ("o_" if slot_is_over(k) else "u_") + ("in" if slot_is_in(sign, k) else "out")


def quadrant_label(sign: int, k: int) -> str:
    a, b = slot_is_in(sign, k), slot_is_in(sign, k + 1)
    if a and b:
        return IN
    if not a and not b:
        return OUT
    # mixed quadrant: named after the over-slot bounding it
    over = k if slot_is_over(k) else (k + 1) % 4
    return OI if slot_is_in(sign, over) else UI


def quadrant_index(sign: int, label: str) -> int:
    for k in range(4):
        if quadrant_label(sign, k) == label:
            return k
    raise DiagramError(f"unknown quadrant label {label!r}")


# --- ambient annotations -----------------------------------------------------


@dataclass(frozen=True)
class Sphere:
    kind = "sphere"


@dataclass(frozen=True)
class Annulus:
    """Star faces named by one of their corners."""

    origin: Corner
    inf: Corner
    kind = "annulus"


@dataclass(frozen=True)
class Torus:
    """Edge homology classes, each given along the edge's orientation."""

    classes: tuple[tuple[int, tuple[int, int]], ...] = ()
    kind = "torus"

    @classmethod
    def of(cls, mapping: Mapping[int, tuple[int, int]]) -> "Torus":
        return cls(tuple(sorted((e, (int(p), int(q))) for e, (p, q) in mapping.items() if (p, q) != (0, 0))))

    def as_dict(self) -> dict[int, tuple[int, int]]:
        return dict(self.classes)


Ambient = Sphere | Annulus | Torus


@dataclass(frozen=True)
class Face:
    id: int
    corners: tuple[Corner, ...]

    def __len__(self):
        return len(self.corners)


@dataclass(frozen=True, eq=False)
class Diagram:
    """Immutable diagram.  ``slots[c][k]`` is the edge at slot ``k`` of crossing ``c``."""

    slots: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]
    ambient: Ambient = field(default_factory=Sphere)
    labels: tuple[str, ...] | None = None
    name: str = ""

    def __post_init__(self):
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(str(c + 1) for c in range(len(self.slots))))
        self._validate()

    # --- basic structure ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.slots)

    def __len__(self):
        return self.n

    @cached_property
    def ends(self) -> dict[int, tuple[Slot, Slot]]:
        """edge -> (tail slot, head slot); tail is an out-slot, head an in-slot."""
        seen: dict[int, list[Slot]] = {}
        for c, row in enumerate(self.slots):
            for k, e in enumerate(row):
                seen.setdefault(e, []).append((c, k))
        out = {}
        for e, where in seen.items():
            if len(where) != 2:
                c = where[0][0]
                raise DiagramError(f"edge {e} used {len(where)} times (dangling or duplicated half-edge)", self.labels[c])
            a, b = where
            a_in = slot_is_in(self.signs[a[0]], a[1])
            b_in = slot_is_in(self.signs[b[0]], b[1])
            if a_in == b_in:
                raise DiagramError(f"orientation conflict on edge {e}: both ends are {'in' if a_in else 'out'}-slots", self.labels[b[0]])
            out[e] = (b, a) if a_in else (a, b)
        return out

    @cached_property
    def partner(self) -> dict[Slot, Slot]:
        p = {}
        for tail, head in self.ends.values():
            p[tail] = head
            p[head] = tail
        return p

    def edge_at(self, s: Slot) -> int:
        return self.slots[s[0]][s[1]]

    def is_in(self, s: Slot) -> bool:
        return slot_is_in(self.signs[s[0]], s[1])

    def edges(self) -> list[int]:
        return sorted(self.ends)

    # --- faces ---------------------------------------------------------------

    @cached_property
    def _face_data(self) -> tuple[tuple[Face, ...], dict[Corner, int]]:
        fid: dict[Corner, int] = {}
        faces = []
        for c in range(self.n):
            for k in range(4):
                if (c, k) in fid:
                    continue
                corners = []
                cur = (c, k)
                while cur not in fid:
                    fid[cur] = len(faces)
                    corners.append(cur)
                    cur = self.partner[(cur[0], (cur[1] + 1) % 4)]
                faces.append(Face(len(faces), tuple(corners)))
        return tuple(faces), fid

    @property
    def faces(self) -> tuple[Face, ...]:
        return self._face_data[0]

    def face_of(self, corner: Corner) -> int:
        return self._face_data[1][(corner[0], corner[1] % 4)]

    def edge_faces(self, e: int) -> tuple[int, int]:
        """(left face, right face) of edge ``e`` seen along its orientation."""
        c, s = self.ends[e][0]
        return self.face_of((c, s)), self.face_of((c, s - 1))

    def quadrant_label(self, corner: Corner) -> str:
        """Orientation-derived label of a quadrant: IN, OUT, OI or UI."""
        return quadrant_label(self.signs[corner[0]], corner[1])

    def quadrant_geometry(self, corner: Corner) -> str:
        """IN, OUT, LEFT or RIGHT relative to the strand orientations.

        RIGHT means the quadrant runs from an in-slot counterclockwise to an
        out-slot.  For a positive crossing LEFT is OI and RIGHT is UI.
        """
        c, k = corner
        a, b = self.is_in((c, k)), self.is_in((c, k + 1))
        return {(True, True): "IN", (False, False): "OUT", (True, False): "RIGHT", (False, True): "LEFT"}[(a, b)]

    # --- components, writhe -----------------------------------------------

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Edge sequences of link components, each starting at its smallest edge."""
        comp_of: dict[int, int] = {}
        comps = []
        for start in sorted(self.ends):
            if start in comp_of:
                continue
            seq = []
            e = start
            while e not in comp_of:
                comp_of[e] = len(comps)
                seq.append(e)
                c, k = self.ends[e][1]
                e = self.slots[c][(k + 2) % 4]
            comps.append(tuple(seq))
        return tuple(comps)

    @cached_property
    def component_of_edge(self) -> dict[int, int]:
        return {e: i for i, comp in enumerate(self.components) for e in comp}

    def writhe(self) -> int:
        return sum(self.signs)

    def self_writhe(self) -> int:
        """Sum of signs over crossings whose two strands lie on the same component."""
        cmp = self.component_of_edge
        return sum(s for row, s in zip(self.slots, self.signs) if cmp[row[0]] == cmp[row[1]])

    # --- stars -------------------------------------------------------------

    def default_stars(self) -> Annulus:
        """Origin left of the first edge of the first component, infinity to its right."""
        e = self.components[0][0]
        c, s = self.ends[e][0]
        return Annulus((c, s % 4), (c, (s - 1) % 4))

    def star_faces(self) -> tuple[int, ...]:
        amb = self.ambient
        if isinstance(amb, Annulus):
            return (self.face_of(amb.origin), self.face_of(amb.inf))
        return ()

    def stars_adjacent(self) -> bool:
        stars = self.star_faces()
        if len(stars) != 2:
            return False
        a, b = stars
        return any({l, r} == {a, b} for l, r in map(self.edge_faces, self.ends))

    def with_ambient(self, ambient: Ambient) -> "Diagram":
        return Diagram(self.slots, self.signs, ambient, self.labels, self.name)

    def as_classical(self) -> "Diagram":
        """Annulus diagram with adjacent stars (the default pair unless stars are already set)."""
        if isinstance(self.ambient, Annulus):
            return self
        return self.with_ambient(self.default_stars())

    def mirror(self) -> "Diagram":
        """Switch every crossing (same projection, over and under exchanged)."""
        slots = tuple((r[3], r[0], r[1], r[2]) if s > 0 else (r[1], r[2], r[3], r[0]) for r, s in zip(self.slots, self.signs))
        signs = tuple(-s for s in self.signs)
        amb = self.ambient
        if isinstance(amb, Annulus):
            shift = [1 if s > 0 else -1 for s in self.signs]
            rot = lambda cr: (cr[0], (cr[1] + shift[cr[0]]) % 4)
            amb = Annulus(rot(amb.origin), rot(amb.inf))
        return Diagram(slots, signs, amb, self.labels, self.name)

    # --- torus ------------------------------------------------------------

    def edge_class(self, e: int) -> tuple[int, int]:
        if isinstance(self.ambient, Torus):
            return self.ambient.as_dict().get(e, (0, 0))
        return (0, 0)

    def face_class(self, f: int) -> tuple[int, int]:
        """Signed sum of edge classes around a face boundary."""
        p = q = 0
        for c, k in self.faces[f].corners:
            s = (c, (k + 1) % 4)
            a, b = self.edge_class(self.edge_at(s))
            sgn = -1 if self.is_in(s) else 1
            p += sgn * a
            q += sgn * b
        return (p, q)

    def component_classes(self) -> list[tuple[int, int]]:
        out = []
        for comp in self.components:
            cl = [self.edge_class(e) for e in comp]
            out.append((sum(a for a, _ in cl), sum(b for _, b in cl)))
        return out

    # --- validation ---------------------------------------------------------

    def _validate(self):
        n = len(self.slots)
        if n == 0:
            raise DiagramError("no crossings")
        if len(self.signs) != n or len(self.labels) != n:
            raise DiagramError("signs/labels do not match the crossing list")
        for c, s in enumerate(self.signs):
            if s not in (1, -1):
                raise DiagramError(f"bad sign {s}", self.labels[c])
            if len(self.slots[c]) != 4:
                raise DiagramError("a crossing needs exactly four slots", self.labels[c])
        self.ends  # noqa: B018 - pairing and orientation checks
        self._check_connected()
        nf = len(self.faces)
        amb = self.ambient
        if isinstance(amb, Torus):
            if nf != n:
                raise DiagramError(f"torus diagram must have {n} faces, traced {nf}")
            unknown = set(amb.as_dict()) - set(self.ends)
            if unknown:
                raise DiagramError(f"class given for unknown edge(s) {sorted(unknown)}")
            for f in range(nf):
                if self.face_class(f) != (0, 0):
                    c = self.faces[f].corners[0][0]
                    raise DiagramError(f"face {f} has non-null boundary class {self.face_class(f)}", self.labels[c])
        else:
            if nf != n + 2:
                raise DiagramError(f"planar diagram must have {n + 2} faces, traced {nf} (not a planar map)")
        if isinstance(amb, Annulus):
            for cr in (amb.origin, amb.inf):
                if not (0 <= cr[0] < n and 0 <= cr[1] < 4):
                    raise DiagramError(f"star corner {cr} does not exist")
            if self.face_of(amb.origin) == self.face_of(amb.inf):
                raise DiagramError("origin and infinity star must be different faces")

    def _check_connected(self):
        n = len(self.slots)
        seen = {0}
        queue = deque([0])
        while queue:
            c = queue.popleft()
            for k in range(4):
                c2 = self.partner[(c, k)][0]
                if c2 not in seen:
                    seen.add(c2)
                    queue.append(c2)
        if len(seen) != n:
            bad = min(set(range(n)) - seen)
            raise DiagramError("diagram is disconnected", self.labels[bad])

    # --- identity -----------------------------------------------------------

    def key(self):
        """Structural identity (used for equality and hashing)."""
        return (self.slots, self.signs, self.ambient)

    def canonical(self):
        """Relabelling-invariant form: the least encoding over all starting crossings."""
        best = None
        for start in range(self.n):
            order = {start: 0}
            queue = deque([start])
            while queue:
                c = queue.popleft()
                for k in range(4):
                    c2 = self.partner[(c, k)][0]
                    if c2 not in order:
                        order[c2] = len(order)
                        queue.append(c2)
            inv = sorted(order, key=order.get)
            rows = tuple(
                (self.signs[c],) + tuple((order[self.partner[(c, k)][0]], self.partner[(c, k)][1]) for k in range(4))
                for c in inv
            )
            amb = self.ambient
            if isinstance(amb, Annulus):
                def face_key(cr):
                    return min((order[c], k) for c, k in self.faces[self.face_of(cr)].corners)
                extra = ("annulus", face_key(amb.origin), face_key(amb.inf))
            elif isinstance(amb, Torus):
                extra = ("torus",) + tuple(
                    sorted(((order[t[0]], t[1]), self.edge_class(e)) for e, (t, _) in self.ends.items())
                )
            else:
                extra = ("sphere",)
            enc = (rows, extra)
            if best is None or enc < best:
                best = enc
        return best

    def isomorphic(self, other: "Diagram") -> bool:
        return self.n == other.n and self.canonical() == other.canonical()

    def __eq__(self, other):
        return isinstance(other, Diagram) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        nm = f" {self.name!r}" if self.name else ""
        return f"<Diagram{nm} n={self.n} writhe={self.writhe()} {self.ambient.kind}>"


def from_pd(pd, ambient: Ambient | None = None, name: str = "") -> Diagram:
    """Build a diagram from a standard PD code (4-tuples counterclockwise from the incoming under-strand).

    The over-strand direction is not encoded in plain PD; it is recovered by
    propagating orientations along strands, falling back to consecutive edge
    labels for components that never pass under a crossing.
    """
    pd = [tuple(x) for x in pd]
    n = len(pd)
    where: dict[int, list[Slot]] = {}
    for c, row in enumerate(pd):
        if len(row) != 4:
            raise DiagramError("PD entries need four edges", str(c + 1))
        for k, e in enumerate(row):
            where.setdefault(e, []).append((c, k))
    partner = {}
    for e, w in where.items():
        if len(w) != 2:
            raise DiagramError(f"edge {e} used {len(w)} times", str(w[0][0] + 1))
        partner[w[0]], partner[w[1]] = w[1], w[0]
    isin: dict[Slot, bool] = {}
    for c in range(n):
        isin[(c, 0)] = True
        isin[(c, 2)] = False

    def propagate():
        stack = list(isin)
        while stack:
            s = stack.pop()
            v = isin[s]
            for t_, val in ((partner[s], not v), ((s[0], (s[1] + 2) % 4), not v)):
                if t_ in isin:
                    if isin[t_] != val:
                        raise DiagramError("inconsistent strand orientation", str(t_[0] + 1))
                else:
                    isin[t_] = val
                    stack.append(t_)

    propagate()
    for c in range(n):
        if (c, 1) not in isin:
            a, b = pd[c][1], pd[c][3]
            # over-strand only component: use edge numbering, b -> d means d = b + 1
            isin[(c, 1)] = not (b == a + 1 or (a > b + 1))
            propagate()
    signs = tuple(-1 if isin[(c, 1)] else 1 for c in range(n))
    return Diagram(tuple(pd), signs, ambient or Sphere(), None, name)


def to_pd(d: Diagram) -> list[tuple[int, int, int, int]]:
    return [tuple(r) for r in d.slots]
