"""The double bracket, the invariants built from it, and the classical state sums."""

from __future__ import annotations

from dataclasses import dataclass

from ..diagram.model import Annulus, Diagram, Sphere, Torus
from ..polyring import LaurentPoly, Monomial
from ..states import (
    AlexanderState,
    SmoothingState,
    classify_circles,
    counting_dots,
    circle_weight,
    cupped_quadrants,
    enumerate_alexander_states,
    enumerate_smoothings,
    oriented_smoothing,
    resolve,
)
from .engine import WeightLawError, double_sum
from .weights import WeightScheme, load_weight_scheme


class HLinearityError(ValueError):
    """``forget h`` was requested but some term does not have h-degree exactly 1."""


@dataclass(frozen=True)
class InvariantResult:
    value: LaurentPoly
    mode: str
    state_count: tuple[int, int]
    writhe: int

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "writhe": self.writhe,
            "stateCount": list(self.state_count),
            "value": self.value.to_json(),
            "text": self.value.to_text(),
        }


_DEFAULT: WeightScheme | None = None


def default_scheme() -> WeightScheme:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_weight_scheme()
    return _DEFAULT


def _annulus(d: Diagram) -> Diagram:
    if isinstance(d.ambient, Torus):
        raise ValueError("expected a classical or annulus diagram, got a torus diagram")
    return d if isinstance(d.ambient, Annulus) else d.as_classical()


def crossing_factor(d: Diagram, t: AlexanderState, s: SmoothingState, w: WeightScheme) -> LaurentPoly:
    out = LaurentPoly.const(1)
    for c, k in enumerate(t.dots):
        sign = d.signs[c]
        out = out * w.double_weight(sign, d.quadrant_geometry((c, k)), oriented_smoothing(sign, s.choice[c]))
    return out


def double_bracket(d: Diagram, t: AlexanderState, s: SmoothingState, w: WeightScheme | None = None,
                   d_exponent: str = "literal") -> LaurentPoly:
    """<D,T,S>: crossing monomials times d^(#contractible) h^(#core)."""
    w = w or default_scheme()
    d = _annulus(d)
    r = classify_circles(d, resolve(d, s))
    nc, nh = r.counts()
    if d_exponent == "total-1":
        nc = nc + nh - 1
    return crossing_factor(d, t, s, w) * w.d_double ** nc * LaurentPoly.var("h", nh)


def double_bracket_h(d: Diagram, t: AlexanderState, s: SmoothingState, w: WeightScheme | None = None) -> LaurentPoly:
    """Torus double bracket: crossing monomials times d^(#contractible) |C|^s t^v."""
    w = w or default_scheme()
    r = classify_circles(d, resolve(d, s))
    r = circle_weight(r, counting_dots(d, t, s, r))
    nc, _ = r.counts()
    nonc = [c for c in r.circles if not c.contractible]
    value = crossing_factor(d, t, s, w) * w.d_double ** nc
    if nonc:
        classes = {c.homology for c in nonc}
        weights = {c.weight for c in nonc}
        if len(classes) != 1 or len(weights) != 1:
            raise WeightLawError(f"non-contractible circles disagree: {[(c.homology, c.weight) for c in nonc]}")
        value = value * LaurentPoly.monomial(1, classes={nonc[0].homology: len(nonc)}, t=weights.pop())
    return value


def reference_sum(d: Diagram, w: WeightScheme | None = None, d_exponent: str = "literal") -> LaurentPoly:
    """Unnormalised double sum by direct enumeration: outer loop over T, inner loop over S."""
    w = w or default_scheme()
    torus = isinstance(d.ambient, Torus)
    if not torus:
        d = _annulus(d)
    total = LaurentPoly()
    for t in enumerate_alexander_states(d):
        for s in enumerate_smoothings(d):
            if torus:
                total = total + double_bracket_h(d, t, s, w)
            else:
                total = total + double_bracket(d, t, s, w, d_exponent)
    return total


def normalizer(exponent: int) -> LaurentPoly:
    """(x y z^-1)^(-2 * exponent)."""
    return LaurentPoly.monomial(1, x=-2 * exponent, y=-2 * exponent, z=2 * exponent)


def _sum(d, w, engine, d_exponent):
    if engine == "brute":
        return reference_sum(d, w, d_exponent)
    if engine in ("dp", "auto"):
        return double_sum(d, w, d_exponent)
    raise ValueError(f"unknown engine {engine!r}")


def _state_count(d: Diagram) -> tuple[int, int]:
    return (len(enumerate_alexander_states(d)), 2 ** d.n)


def w_poly(d: Diagram, w: WeightScheme | None = None, *, set_z_1: bool = False, h_mode: str = "keep",
           engine: str = "auto", d_exponent: str = "literal", count_states: bool = False) -> InvariantResult:
    """W_L = (x y z^-1)^(-2 writhe) times the double sum, for annulus (or classical) diagrams."""
    w = w or default_scheme()
    d = _annulus(d)
    value = normalizer(d.writhe()) * _sum(d, w, engine, d_exponent)
    if h_mode == "forget":
        bad = sorted({m.exponent("h") for m, _ in value.items()} - {1})
        if bad:
            raise HLinearityError(f"h-degrees {bad} present; the diagram is not in meridian position")
        value = value.substitute({"h": 1})
    elif h_mode != "keep":
        raise ValueError(f"h_mode must be keep or forget, not {h_mode!r}")
    if set_z_1:
        value = value.substitute({"z": 1})
    mode = "classical" if h_mode == "forget" else "annulus"
    counts = _state_count(d) if count_states else (-1, 2 ** d.n)
    return InvariantResult(value, mode, counts, d.writhe())


def wh_poly(d: Diagram, w: WeightScheme | None = None, *, set_z_1: bool = False, writhe: str = "self",
            engine: str = "auto", count_states: bool = False) -> InvariantResult:
    """Refined invariant of a torus diagram.

    ``writhe="self"`` normalises by the writhe of self-crossings only (crossings
    between two different components are left out); ``"full"`` uses the whole
    writhe.
    """
    w = w or default_scheme()
    if not isinstance(d.ambient, Torus):
        raise ValueError("wh_poly needs a torus diagram")
    wr = d.self_writhe() if writhe == "self" else d.writhe()
    if writhe not in ("self", "full"):
        raise ValueError(f"writhe must be self or full, not {writhe!r}")
    value = normalizer(wr) * _sum(d, w, engine, "literal")
    if set_z_1:
        value = value.substitute({"z": 1})
    counts = _state_count(d) if count_states else (-1, 2 ** d.n)
    return InvariantResult(value, "torus", counts, wr)


# --- classical polynomials on the same machinery --------------------------------


def alexander_state_poly(d: Diagram, w: WeightScheme | None = None, variable: str = "t") -> LaurentPoly:
    """Sum over Alexander states of the product of quadrant monomials.

    The cells live in s = t^(1/2).  With ``variable="t"`` the result is
    rewritten in t; for an even number of components every exponent of s is
    odd, and the sum is first divided by s (a unit, so the class up to units is
    unchanged).
    """
    w = w or default_scheme()
    d = _annulus(d)
    total = LaurentPoly()
    for st in enumerate_alexander_states(d):
        term = LaurentPoly.const(1)
        for c, k in enumerate(st.dots):
            term = term * w.alex_weight(d.signs[c], d.quadrant_geometry((c, k)))
        total = total + term
    if variable == "s":
        return total
    if variable != "t":
        raise ValueError(f"variable must be s or t, not {variable!r}")
    return half_to_t(total)


def half_to_t(p: LaurentPoly) -> LaurentPoly:
    """Rewrite a polynomial in s = t^(1/2) of uniform parity in t, dropping a factor s if odd."""
    parities = {m.exponent("s") % 2 for m, _ in p.items()}
    if len(parities) > 1:
        raise ValueError("mixed parity in s; not a Conway-normalised Alexander sum")
    shift = parities.pop() if parities else 0
    return LaurentPoly({Monomial.of(t=(m.exponent("s") - shift) // 2): c for m, c in p.items()})


def bracket(d: Diagram) -> LaurentPoly:
    """Kauffman bracket sum_S A^(#A - #B) d^(|S| - 1), with d = -A^2 - A^-2."""
    dpoly = LaurentPoly.monomial(-1, A=2) + LaurentPoly.monomial(-1, A=-2)
    powers: dict[int, int] = {}
    for s in enumerate_smoothings(d):
        a = sum(1 for ch in s.choice if ch == "A")
        key = (2 * a - d.n, len(resolve(d, s).circles) - 1)
        powers[key] = powers.get(key, 0) + 1
    total = LaurentPoly()
    cache: dict[int, LaurentPoly] = {}
    for (ea, nd), cnt in powers.items():
        if nd not in cache:
            cache[nd] = dpoly ** nd
        total = total + LaurentPoly.monomial(cnt, A=ea) * cache[nd]
    return total


def jones_poly(d: Diagram) -> LaurentPoly:
    """(-A)^(-3 writhe) times the bracket, normalised so the unknot gives 1."""
    wr = d.writhe()
    sign = -1 if wr % 2 else 1
    return bracket(d) * LaurentPoly.monomial(sign, A=-3 * wr)


def jones_in_t(p: LaurentPoly) -> LaurentPoly:
    """Rewrite a polynomial in A^4 as one in t via A = t^(-1/4)."""
    terms = {}
    for m, c in p.items():
        e = m.exponent("A")
        if e % 4:
            raise ValueError("A-exponent not divisible by 4; not a knot Jones polynomial in t")
        terms[Monomial.of(t=-e // 4)] = c
    return LaurentPoly(terms)
