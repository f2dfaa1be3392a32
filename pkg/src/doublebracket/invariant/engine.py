"""Frontier dynamic programme for the double state sum.

Crossings are absorbed one at a time.  After each step the partial double
states are grouped by what the rest of the diagram can still see:

* which open faces already hold a dot (a bitmask), and
* how the smoothing arcs absorbed so far pair up the open half-edges, each
  path carrying the data needed to classify the circle it will close into
  (dual-path parity on the annulus; homology class and signed counting-dot
  tally on the torus).

Monomials are packed into a single integer so that multiplying a whole partial
sum by a crossing weight is one integer shift per term.  Closed contractible
circles are only counted; the powers of ``d`` are expanded at the end.
"""

from __future__ import annotations

from collections import defaultdict

from ..diagram.model import Annulus, Diagram, Torus
from ..polyring import LaurentPoly, Monomial, UNITS, canonical_class
from ..states import cupped_quadrants, dual_path_edges, oriented_smoothing, star_faces
from .weights import WeightScheme


class WeightLawError(RuntimeError):
    """Non-contractible circles of one double state disagree in class or weight."""


def crossing_order(d: Diagram) -> list[int]:
    """Greedy order keeping the frontier small."""
    done: list[int] = [0]
    seen = {0}
    while len(done) < d.n:
        best, best_key = None, None
        for c in range(d.n):
            if c in seen:
                continue
            inside = sum(1 for k in range(4) if d.partner[(c, k)][0] in seen or d.partner[(c, k)][0] == c)
            key = (inside, -c)
            if best_key is None or key > best_key:
                best, best_key = c, key
        done.append(best)
        seen.add(best)
    return done


class _Packer:
    """Affine packing of (x, y, z, i-power, #contractible, #core) into one int."""

    def __init__(self, n: int, emax: int):
        self.off = n * emax + 2
        self.R = 2 * self.off + 1
        self.U = 3 * n + 4
        self.C = n + 3
        self.base = self.pack(0, 0, 0, 0, 0, 0)

    def delta(self, ex, ey, ez, u, nc, nh):
        R, U, C = self.R, self.U, self.C
        return ((((ex * R + ey) * R + ez) * U + u) * C + nc) * C + nh

    def pack(self, ex, ey, ez, u, nc, nh):
        o = self.off
        return self.delta(ex + o, ey + o, ez + o, u, nc, nh)

    def unpack(self, key):
        key, nh = divmod(key, self.C)
        key, nc = divmod(key, self.C)
        key, u = divmod(key, self.U)
        key, ez = divmod(key, self.R)
        ex, ey = divmod(key, self.R)
        o = self.off
        return ex - o, ey - o, ez - o, u, nc, nh


def double_sum(d: Diagram, scheme: WeightScheme, d_exponent: str = "literal") -> LaurentPoly:
    """Unnormalised sum over all double states of the crossing weights times circle factors.

    Annulus diagrams get ``d^(#contractible) h^(#core)``; torus diagrams get
    ``d^(#contractible) |class|^s t^v``.  ``d_exponent="total-1"`` uses
    ``d^(#circles - 1)`` instead (planar conventions only).
    """
    torus = isinstance(d.ambient, Torus)
    if not torus and not isinstance(d.ambient, Annulus):
        d = d.as_classical()
    n = d.n
    stars = set(star_faces(d))
    order = crossing_order(d)
    pos = {c: i for i, c in enumerate(order)}
    packer = _Packer(n, max(2, scheme.max_exponent()))

    closes_at: list[list[int]] = [[] for _ in range(n)]
    for f in d.faces:
        if f.id not in stars:
            closes_at[max(pos[c] for c, _ in f.corners)].append(f.id)

    # per-edge attribute, looked up by the half-edge a traversal leaves through
    if torus:
        leave = {}
        for e, (tail, head) in d.ends.items():
            p, q = d.edge_class(e)
            leave[tail] = (p, q)
            leave[head] = (-p, -q)
    else:
        flags = dual_path_edges(d)
        leave = {s: (1 if d.edge_at(s) in flags else 0) for s in d.partner}

    states: dict = {((), 0, ()): {packer.base: 1}}
    processed: set[int] = set()
    cache: dict = {}

    for step, c in enumerate(order):
        processed.add(c)
        sign = d.signs[c]
        options = []  # (letter, quadrant k, packed delta, cupped dot or -1, face bit)
        for letter in "AB":
            cup = cupped_quadrants(d, c, letter)
            oriented = oriented_smoothing(sign, letter)
            for k in range(4):
                f = d.face_of((c, k))
                if f in stars:
                    continue
                ex, ey, ez, u = scheme.packed_double(sign, d.quadrant_geometry((c, k)), oriented)
                options.append((letter, cup, k, packer.delta(ex, ey, ez, u, 0, 0), k if (torus and k in cup) else -1, 1 << f))
        closing_mask = 0
        for f in closes_at[step]:
            closing_mask |= 1 << f
        new_states: dict = {}
        for (match, mask, nonc), value in states.items():
            for letter, cup, k, wdelta, dotq, bit in options:
                if mask & bit:
                    continue
                nmask = mask | bit
                if nmask & closing_mask != closing_mask:
                    continue
                nmask &= ~closing_mask
                ck = (match, c, letter, dotq)
                res = cache.get(ck)
                if res is None:
                    res = _absorb(d, match, c, cup, dotq, processed, leave, torus)
                    cache[ck] = res
                nmatch, dnc, dnh, closed = res
                if closed:
                    nn = tuple(sorted(nonc + closed))
                else:
                    nn = nonc
                key = (nmatch, nmask, nn)
                delta = wdelta + packer.delta(0, 0, 0, 0, dnc, dnh)
                tgt = new_states.get(key)
                if tgt is None:
                    new_states[key] = {kk + delta: v for kk, v in value.items()}
                else:
                    for kk, v in value.items():
                        kk += delta
                        tgt[kk] = tgt.get(kk, 0) + v
        states = new_states
        cache.clear()

    return _finish(d, states, packer, torus, d_exponent, scheme)


def _absorb(d, match, c, cup, dotq, processed, leave, torus):
    """Glue crossing ``c``'s two smoothing arcs onto the open paths."""
    segs = [list(p) for p in match]
    for j in cup:
        a, b = (c, j), (c, (j + 1) % 4)
        if torus:
            segs.append([a, b, (0, 0, 1 if j == dotq else 0)])
        else:
            segs.append([a, b, 0])
    at = {}
    for i, (a, b, _) in enumerate(segs):
        at[a] = (i, 0)
        at[b] = (i, 1)
    partner = d.partner
    used = [False] * len(segs)

    def walk(h):
        """Follow from half-edge ``h`` (entering its segment) to the next open end or back to start."""
        acc = (0, 0, 0) if torus else 0
        cur = h
        while True:
            i, side = at[cur]
            used[i] = True
            a, b, attr = segs[i]
            if side == 0:
                other = b
                acc = _plus(acc, attr, 1, torus)
            else:
                other = a
                acc = _plus(acc, attr, -1, torus)
            p = partner[other]
            if p[0] not in processed:
                return other, acc
            acc = _edge(acc, leave[other], torus)
            if p == h:
                return None, acc
            cur = p

    paths = []
    for h in list(at):
        if partner[h][0] in processed:
            continue
        i, _ = at[h]
        if used[i]:
            continue
        end, acc = walk(h)
        paths.append(_canon(h, end, acc, torus))
    dnc = dnh = 0
    closed = []
    for i, seg in enumerate(segs):
        if used[i]:
            continue
        _, acc = walk(seg[0])
        if torus:
            p, q, v = acc
            cls = canonical_class(p, q)
            if cls == (0, 0):
                dnc += 1
            else:
                closed.append((cls, abs(v)))
        elif acc:
            dnh += 1
        else:
            dnc += 1
    return tuple(sorted(paths)), dnc, dnh, tuple(closed)


def _plus(acc, attr, s, torus):
    if torus:
        return (acc[0] + s * attr[0], acc[1] + s * attr[1], acc[2] + s * attr[2])
    return acc ^ attr


def _edge(acc, val, torus):
    if torus:
        return (acc[0] + val[0], acc[1] + val[1], acc[2])
    return acc ^ val


def _canon(a, b, acc, torus):
    if a <= b:
        return (a, b, acc)
    if torus:
        return (b, a, (-acc[0], -acc[1], -acc[2]))
    return (b, a, acc)


def _finish(d, states, packer, torus, d_exponent, scheme):
    by_factor: dict = defaultdict(lambda: defaultdict(int))
    for (match, mask, nonc), value in states.items():
        assert not match and not mask
        if nonc:
            classes = {cls for cls, _ in nonc}
            weights = {v for _, v in nonc}
            if len(classes) > 1 or len(weights) > 1:
                raise WeightLawError(f"non-contractible circles disagree: {sorted(nonc)}")
            extra = (nonc[0][0], len(nonc), nonc[0][1])
        else:
            extra = None
        acc = by_factor[extra]
        for k, v in value.items():
            acc[k] += v
    dpoly = scheme.d_double
    dpow: dict[int, LaurentPoly] = {}
    total = LaurentPoly()
    for extra, terms in by_factor.items():
        grouped: dict[int, dict] = defaultdict(dict)
        for key, coeff in terms.items():
            if not coeff:
                continue
            ex, ey, ez, u, nc, nh = packer.unpack(key)
            if d_exponent == "total-1":
                nc = nc + nh - 1
            mono = Monomial.of(x=ex, y=ey, z=ez, h=0 if torus else nh)
            g = grouped[nc]
            g[mono] = g.get(mono, UNITS[0] * 0) + UNITS[u % 4] * coeff
        part = LaurentPoly()
        for nc, terms_ in grouped.items():
            if nc not in dpow:
                dpow[nc] = dpoly ** nc
            part = part + LaurentPoly(terms_) * dpow[nc]
        if extra is not None:
            cls, s, v = extra
            part = part * LaurentPoly.monomial(1, classes={cls: s}, t=v)
        total = total + part
    return total
