"""Invariance harness, factorization, independent oracles and the conjecture check."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO, Iterable, Sequence

from .diagram.model import Diagram, Torus
from .diagram.moves import Move, apply_move, random_walk
from .invariant.core import alexander_state_poly, default_scheme, jones_poly, w_poly, wh_poly
from .invariant.weights import WeightScheme
from .polyring import (
    I, ONE, UNITS, GaussianInt, LaurentPoly, Monomial, PolyError, exponent_matrix, from_exponent_matrix,
    gaussian_gcd, matrix_rank, normalize_unit,
)
from .states import incidence, star_faces

# --- reports ------------------------------------------------------------------


@dataclass
class InvarianceReport:
    diagram: str
    which: str
    seed: int
    moves: list[str] = field(default_factory=list)
    values: list[LaurentPoly] = field(default_factory=list)
    violation_step: int | None = None

    @property
    def verdict(self) -> str:
        return "invariant" if self.violation_step is None else f"violation({self.violation_step})"

    @property
    def ok(self) -> bool:
        return self.violation_step is None

    def to_json(self) -> dict:
        distinct = []
        for v in self.values:
            if v not in distinct:
                distinct.append(v)
        return {
            "diagram": self.diagram,
            "which": self.which,
            "seed": self.seed,
            "moves": self.moves,
            "verdict": self.verdict,
            "steps": len(self.values) - 1,
            "values": [v.to_text() for v in distinct],
        }


@dataclass
class FactorizationReport:
    rank: int
    H: LaurentPoly | None = None
    P: LaurentPoly | None = None
    unit: GaussianInt = ONE  # H was scaled by this unit
    shift: int = 0  # and by (xy)^shift
    diagram: str = ""
    W: LaurentPoly | None = None
    H_special: LaurentPoly | None = None  # H(x, i x^-1)
    alexander: LaurentPoly | None = None  # Delta(x^4)
    match_unit: tuple[GaussianInt, int] | None = None  # H_special = u x^k Delta(x^4)

    @property
    def factorizable(self) -> bool:
        return self.rank == 1

    @property
    def alexander_match(self) -> bool | None:
        if self.alexander is None:
            return None
        return self.match_unit is not None

    def to_json(self) -> dict:
        out = {"diagram": self.diagram, "rank": self.rank, "factorizable": self.factorizable}
        if self.W is not None:
            out["W"] = self.W.to_text()
        if self.factorizable:
            out.update(H=self.H.pretty(), P=self.P.pretty(), unit=str(self.unit), shift=self.shift)
        if self.alexander is not None:
            out["H_special"] = self.H_special.pretty() if self.H_special is not None else None
            out["alexander"] = self.alexander.pretty()
            out["alexander_match"] = self.alexander_match
            if self.match_unit is not None:
                out["match_unit"] = {"unit": str(self.match_unit[0]), "x_shift": self.match_unit[1]}
        return out


def write_jsonl(reports: Iterable, stream: IO[str]) -> None:
    for r in reports:
        stream.write(json.dumps(r.to_json(), sort_keys=True) + "\n")


# --- invariance -----------------------------------------------------------------


def _invariant(which: str, scheme: WeightScheme, writhe: str):
    if which == "W":
        return lambda d: w_poly(d, scheme).value
    if which == "WH":
        return lambda d: wh_poly(d, scheme, writhe=writhe).value
    raise ValueError(f"which must be W or WH, not {which!r}")


def check_invariance(d: Diagram, move_count: int, seed: int, which: str | None = None,
                     scheme: WeightScheme | None = None, moves: Sequence[Move] | None = None,
                     cap: int | None = None, writhe: str = "self") -> InvarianceReport:
    """Apply a seeded random move sequence (or ``moves``) and compare the invariant after every step.

    Stops at the first step whose value differs from the starting value.
    """
    scheme = scheme or default_scheme()
    if which is None:
        which = "WH" if isinstance(d.ambient, Torus) else "W"
    f = _invariant(which, scheme, writhe)
    report = InvarianceReport(d.name, which, seed)
    ref = f(d)
    report.values.append(ref)
    if moves is not None:
        steps = []
        cur = d
        for mv in moves:
            cur = apply_move(cur, mv)
            steps.append((mv, cur))
    else:
        steps = random_walk(d, move_count, seed, cap)
    for i, (mv, nd) in enumerate(steps, 1):
        report.moves.append(str(mv))
        v = f(nd)
        report.values.append(v)
        if v != ref:
            report.violation_step = i
            break
    return report


# --- unit-normalized comparison ----------------------------------------------------


def _lowest(p: LaurentPoly):
    return min(p.items(), key=lambda mc: (mc[0].exps, mc[0].classes))


def match_up_to_unit(p: LaurentPoly, q: LaurentPoly) -> tuple[GaussianInt, Monomial] | None:
    """``(u, m)`` with ``p == u * m * q`` for a Gaussian unit ``u`` and monomial ``m``, else None."""
    if p.is_zero() or q.is_zero():
        return (ONE, Monomial.of()) if p.is_zero() and q.is_zero() else None
    (mp, cp), (mq, cq) = _lowest(p), _lowest(q)
    m = mp * mq.inverse()
    for u in UNITS:
        if u * cq == cp and q.shift(m) * LaurentPoly.const(u) == p:
            return u, m
    return None


# --- factorization ------------------------------------------------------------------


def _content(values) -> GaussianInt:
    g = GaussianInt()
    for v in values:
        g = gaussian_gcd(g, v)
    return g


def rank1_factorization(p: LaurentPoly) -> FactorizationReport:
    """Split ``p(x, y)`` as H(x, y) * P(xy) with H homogeneous, when the exponent matrix has rank 1.

    H is the primitive part of a column of the matrix, scaled by a unit so its
    highest x-power term has a coefficient with positive real part and
    shifted by a power of xy so its lowest y-power is 0.  P takes whatever is
    left, so ``H * P == p`` exactly.
    """
    if p.is_zero():
        raise PolyError("cannot factor the zero polynomial")
    mat = exponent_matrix(p)
    rank = matrix_rank(mat)
    if rank != 1:
        return FactorizationReport(rank)
    rows = sorted({r for r, _ in mat})
    cols = sorted({s for _, s in mat})
    s0, r0 = cols[0], rows[0]
    column = {r: mat[(r, s0)] for r in rows if (r, s0) in mat}
    g = _content(column.values())
    top = column[max(column)].divmod_exact(g)
    _, u = normalize_unit(top)
    column = {r: (c.divmod_exact(g)) * u for r, c in column.items()}
    H = from_exponent_matrix({(r, s0): c for r, c in column.items()})
    shift = -min(m.exponent("y") for m, _ in H.items())
    H = H.shift(Monomial.of(x=shift, y=shift))
    # row r0 of the matrix is column[r0] times the coefficient profile of P
    row = {s: mat[(r0, s)] for s in cols if (r0, s) in mat}
    lead = column[r0]
    P_terms = {}
    for s, c in row.items():
        j = (s - s0) // 2 - shift
        P_terms[Monomial.of(x=j, y=j)] = c.divmod_exact(lead)
    P = LaurentPoly(P_terms)
    assert H * P == p, "rank-1 reconstruction failed"
    return FactorizationReport(rank, H, P, u, shift)


# --- Alexander determinant oracle ---------------------------------------------------

# Alexander's own corner labels.  Walking along the under-strand, the corner on
# the left before the crossing gets t, the one on the left after it -t, and on
# the right -1 before and 1 after.  Slot 0 is always the incoming under-strand,
# so the labels depend only on the quadrant index.  Entries are (coefficient,
# t exponent).
DET_TABLE = {3: (1, 1), 2: (-1, 1), 0: (-1, 0), 1: (1, 0)}


def _div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact quotient of univariate Laurent polynomials in t."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    bt = max(b.items(), key=lambda mc: mc[0].exponent("t"))
    q = LaurentPoly()
    rem = a
    lo_b = min(b.degrees("t"))
    budget = (max(a.degrees("t")) - min(a.degrees("t")) + 2) if not a.is_zero() else 0
    while not rem.is_zero():
        budget -= 1
        if budget < 0 or min(rem.degrees("t")) < min(a.degrees("t")) - (max(b.degrees("t")) - lo_b):
            raise PolyError("inexact polynomial division")
        rt = max(rem.items(), key=lambda mc: mc[0].exponent("t"))
        coeff = rt[1].divmod_exact(bt[1])
        term = LaurentPoly.monomial(coeff, t=rt[0].exponent("t") - bt[0].exponent("t"))
        q = q + term
        rem = rem - term * b
    return q


def determinant(matrix: list[list[LaurentPoly]]) -> LaurentPoly:
    """Fraction-free (Bareiss) determinant over Z[i][t, t^-1]."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return LaurentPoly.const(1)
    sign = 1
    prev = LaurentPoly.const(1)
    for k in range(n - 1):
        piv = next((r for r in range(k, n) if not m[r][k].is_zero()), None)
        if piv is None:
            return LaurentPoly()
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _div_exact(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev)
            m[i][k] = LaurentPoly()
        prev = m[k][k]
    return m[n - 1][n - 1] * LaurentPoly.const(sign)


def alexander_matrix(d: Diagram, table=None) -> tuple[list[int], list[list[LaurentPoly]]]:
    """Crossings x non-star faces; entry = sum of the quadrant monomials of that crossing in that face."""
    table = DET_TABLE if table is None else table
    stars = set(star_faces(d))
    cols = [f.id for f in d.faces if f.id not in stars]
    pos = {f: j for j, f in enumerate(cols)}
    mat = [[LaurentPoly() for _ in cols] for _ in range(d.n)]
    for c in range(d.n):
        for k in range(4):
            f = d.face_of((c, k))
            if f in pos:
                coeff, e = table[k]
                mat[c][pos[f]] = mat[c][pos[f]] + LaurentPoly.monomial(coeff, t=e)
    return cols, mat


def alexander_det_oracle(d: Diagram) -> LaurentPoly:
    """Alexander polynomial as the determinant of the crossing/face matrix."""
    if isinstance(d.ambient, Torus):
        raise ValueError("the determinant oracle is for annulus or classical diagrams")
    cols, mat = alexander_matrix(d)
    if len(cols) != d.n:
        return LaurentPoly()
    return determinant(mat)


def permanent(matrix: Sequence[Sequence[int]]) -> int:
    """Permanent of a square integer matrix by Ryser's inclusion-exclusion formula."""
    n = len(matrix)
    if n == 0:
        return 1
    if any(len(r) != n for r in matrix):
        return 0
    total = 0
    for size in range(1, n + 1):
        for cols in itertools.combinations(range(n), size):
            prod = 1
            for row in matrix:
                s = sum(row[j] for j in cols)
                if not s:
                    prod = 0
                    break
                prod *= s
            total += (-1) ** size * prod
    return (-1) ** n * total


def state_permanent(d: Diagram) -> int:
    cols, mat = incidence(d)
    if len(cols) != d.n:
        return 0
    return permanent(mat)


# --- Jones skein oracle -------------------------------------------------------------

# A raw diagram here is (crossings, loops): crossings is a sorted tuple of
# (sign, (e0, e1, e2, e3)) with slots counterclockwise from the incoming
# under-strand, loops the number of crossingless circles.  No connectivity is
# assumed, so smoothing may split the diagram.

_DELTA = LaurentPoly.monomial(-1, A=2) + LaurentPoly.monomial(-1, A=-2)


class SkeinBudgetError(RuntimeError):
    pass


def _in_slots(sign: int) -> tuple[int, int]:
    return (0, 3) if sign > 0 else (0, 1)


def _heads(crossings):
    """edge -> (crossing index, slot) where the edge ends."""
    out = {}
    for c, (sign, slots) in enumerate(crossings):
        for k in _in_slots(sign):
            out[slots[k]] = (c, k)
    return out


def _traverse(crossings):
    """Visit order of (crossing, slot) passages, components taken by least edge label."""
    heads = _heads(crossings)
    seen_edges = set()
    order = []
    for start in sorted(heads):
        if start in seen_edges:
            continue
        e = start
        while e not in seen_edges:
            seen_edges.add(e)
            c, k = heads[e]
            order.append((c, k))
            e = crossings[c][1][(k + 2) % 4]
    return order


def _switch(entry):
    sign, s = entry
    if sign > 0:
        return (-1, (s[3], s[0], s[1], s[2]))
    return (1, (s[1], s[2], s[3], s[0]))


def _smooth(crossings, loops, c):
    """Oriented smoothing of crossing ``c``: each incoming strand turns onto the adjacent outgoing one."""
    sign, s = crossings[c]
    if sign > 0:
        pairs = [(s[0], s[1]), (s[3], s[2])]
    else:
        pairs = [(s[0], s[3]), (s[1], s[2])]
    parent = {}

    def find(e):
        while parent.get(e, e) != e:
            e = parent[e]
        return e

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    rest = [entry for i, entry in enumerate(crossings) if i != c]
    used = {e for _, slots in rest for e in slots}
    roots = {find(e) for e in s}
    members = {r: {e for e in s if find(e) == r} for r in roots}
    new_loops = sum(1 for r in roots if not (members[r] & used))
    rest = [(sg, tuple(find(e) for e in slots)) for sg, slots in rest]
    return tuple(rest), loops + new_loops


def _canonical(crossings):
    """Relabel edges in order of first appearance along the traversal."""
    order = _traverse(crossings)
    label = {}
    for c, k in order:
        e = crossings[c][1][k]
        if e not in label:
            label[e] = len(label) + 1
    return tuple(sorted((sg, tuple(label[e] for e in slots)) for sg, slots in crossings))


def jones_skein_oracle(d: Diagram, budget: int = 200000) -> LaurentPoly:
    """Jones polynomial in A (unknot = 1) by the skein relation

        A^4 V(L+) - A^-4 V(L-) = (A^-2 - A^2) V(L0),

    switching the first crossing met from below until the diagram is
    descending, where V = delta^(components - 1).
    """
    crossings = tuple(sorted((d.signs[c], d.slots[c]) for c in range(d.n)))
    calls = [0]

    @lru_cache(maxsize=None)
    def value(cr):
        calls[0] += 1
        if calls[0] > budget:
            raise SkeinBudgetError(f"skein recursion exceeded {budget} calls")
        first = {}
        bad = None
        for c, k in _traverse(cr):
            if c in first:
                continue
            first[c] = k
            if k == 0:  # met on the under-strand first
                bad = c
                break
        if bad is None:
            return _DELTA ** (_components(cr) - 1)
        switched = list(cr)
        switched[bad] = _switch(cr[bad])
        smooth, loops = _smooth(cr, 0, bad)
        v_switch = value(_canonical(tuple(switched)))
        v_smooth = _with_loops(value(_canonical(smooth)) if smooth else None, loops, smooth)
        corr = LaurentPoly.monomial(1, A=-2) - LaurentPoly.monomial(1, A=2)
        if cr[bad][0] > 0:
            return LaurentPoly.monomial(1, A=-8) * v_switch + LaurentPoly.monomial(1, A=-4) * corr * v_smooth
        return LaurentPoly.monomial(1, A=8) * v_switch - LaurentPoly.monomial(1, A=4) * corr * v_smooth

    return value(_canonical(crossings))


def _components(crossings) -> int:
    heads = _heads(crossings)
    seen, count = set(), 0
    for start in heads:
        if start in seen:
            continue
        count += 1
        e = start
        while e not in seen:
            seen.add(e)
            c, k = heads[e]
            e = crossings[c][1][(k + 2) % 4]
    return count


def _with_loops(v, loops, crossings):
    """Adding a disjoint crossingless circle multiplies V by delta."""
    if not crossings:
        return _DELTA ** (loops - 1)
    return v * _DELTA ** loops


# --- conjecture -----------------------------------------------------------------------


def conjecture_check(d: Diagram, scheme: WeightScheme | None = None) -> FactorizationReport:
    """Factor W(x, y, 1) and compare H(x, i x^-1) with Delta(x^4) up to a unit and a power of x."""
    if isinstance(d.ambient, Torus):
        raise ValueError("the conjecture concerns classical links")
    W = w_poly(d, scheme, set_z_1=True, h_mode="forget").value
    delta = alexander_det_oracle(d).substitute({"t": LaurentPoly.monomial(1, x=4)})
    if W.is_zero():
        rep = FactorizationReport(0, diagram=d.name, W=W, alexander=delta)
        rep.match_unit = (ONE, 0) if delta.is_zero() else None
        return rep
    rep = rank1_factorization(W)
    rep.diagram, rep.W, rep.alexander = d.name, W, delta
    if rep.factorizable:
        rep.H_special = rep.H.substitute({"y": LaurentPoly.monomial(I, x=-1)})
        found = match_up_to_unit(rep.H_special, delta)
        if found is not None:
            rep.match_unit = (found[0], found[1].exponent("x"))
    return rep


def alexander_oracle_match(d: Diagram) -> tuple[GaussianInt, Monomial] | None:
    """Unit relating the state-sum Alexander polynomial to the determinant, or None."""
    return match_up_to_unit(alexander_state_poly(d), alexander_det_oracle(d))


def jones_oracle_match(d: Diagram) -> bool:
    return jones_poly(d) == jones_skein_oracle(d)


__all__ = [
    "DET_TABLE", "FactorizationReport", "InvarianceReport", "SkeinBudgetError", "alexander_det_oracle",
    "alexander_matrix", "alexander_oracle_match", "check_invariance", "conjecture_check", "determinant",
    "jones_oracle_match", "jones_skein_oracle", "match_up_to_unit", "permanent", "rank1_factorization",
    "state_permanent", "write_jsonl",
]
