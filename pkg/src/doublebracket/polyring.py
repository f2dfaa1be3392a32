"""Exact multivariate Laurent polynomials over the Gaussian integers.

Variables are drawn from a fixed alphabet (``x, y, z, h, A, t``).  A monomial may
additionally carry formal homology-class symbols ``|m a + n b|`` which behave as
opaque multiplicative generators: they never cancel against the ordinary
variables and a class is identified with its negative.

Everything here is immutable and exact; there is no floating point anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

VARIABLES = ("x", "y", "z", "h", "A", "t", "s")
_VAR_INDEX = {v: i for i, v in enumerate(VARIABLES)}
_NVARS = len(VARIABLES)


class PolyError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class GaussianInt:
    re: int = 0
    im: int = 0

    @classmethod
    def coerce(cls, value) -> "GaussianInt":
        if isinstance(value, GaussianInt):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a Gaussian integer")
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, complex):
            re_, im_ = value.real, value.imag
            if re_ != int(re_) or im_ != int(im_):
                raise PolyError(f"{value!r} is not a Gaussian integer")
            return cls(int(re_), int(im_))
        if isinstance(value, tuple) and len(value) == 2:
            return cls(int(value[0]), int(value[1]))
        raise TypeError(f"cannot interpret {value!r} as a Gaussian integer")

    def __add__(self, other):
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussianInt.coerce(other) - self

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other):
        o = GaussianInt.coerce(other)
        return GaussianInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.re or self.im)

    def conj(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def is_unit(self) -> bool:
        return self.norm() == 1

    def divmod_exact(self, other) -> "GaussianInt":
        """Exact quotient; raises if ``other`` does not divide ``self``."""
        o = GaussianInt.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        num = self * o.conj()
        if num.re % n or num.im % n:
            raise PolyError(f"{self} is not divisible by {o}")
        return GaussianInt(num.re // n, num.im // n)

    def floordiv_round(self, other) -> "GaussianInt":
        # nearest-integer quotient, used by the Euclidean algorithm
        o = GaussianInt.coerce(other)
        n = o.norm()
        num = self * o.conj()
        return GaussianInt(_round_div(num.re, n), _round_div(num.im, n))

    def __str__(self):
        return f"({self.re},{self.im})"


def _round_div(a: int, n: int) -> int:
    return (2 * a + n) // (2 * n)


UNITS = (GaussianInt(1, 0), GaussianInt(0, 1), GaussianInt(-1, 0), GaussianInt(0, -1))
ONE = UNITS[0]
I = UNITS[1]


def gaussian_gcd(a: GaussianInt, b: GaussianInt) -> GaussianInt:
    a, b = GaussianInt.coerce(a), GaussianInt.coerce(b)
    while b:
        q = a.floordiv_round(b)
        a, b = b, a - q * b
    return normalize_unit(a)[0]


def normalize_unit(g: GaussianInt) -> tuple[GaussianInt, GaussianInt]:
    """Return ``(g * u, u)`` with ``u`` a unit such that ``g*u`` has re > 0, im >= 0."""
    if not g:
        return g, ONE
    for u in UNITS:
        c = g * u
        if c.re > 0 and c.im >= 0:
            return c, u
    raise AssertionError("unreachable")


def canonical_class(m: int, n: int) -> tuple[int, int]:
    """Sign-canonical form of the class ``m a + n b``: first nonzero coordinate positive."""
    if m < 0 or (m == 0 and n < 0):
        return (-m, -n)
    return (m, n)


def format_class(cls: tuple[int, int]) -> str:
    m, n = cls
    parts = []
    for coef, name in ((m, "a"), (n, "b")):
        if coef == 0:
            continue
        mag = "" if abs(coef) == 1 else str(abs(coef))
        sign = "-" if coef < 0 else ("+" if parts else "")
        parts.append(f"{sign}{mag}{name}")
    return "|" + ("".join(parts) or "0") + "|"


_CLASS_RE = re.compile(r"^\|\s*(?:([+-]?\d*)\s*a)?\s*(?:([+-]?\s*\d*)\s*b)?\s*\|$")


def parse_class(text: str) -> tuple[int, int]:
    m = _CLASS_RE.match(text.replace(" ", ""))
    if not m or (m.group(1) is None and m.group(2) is None):
        raise PolyError(f"bad homology class {text!r}")

    def coef(s):
        if s is None:
            return 0
        s = s.replace(" ", "")
        if s in ("", "+"):
            return 1
        if s == "-":
            return -1
        return int(s)

    return canonical_class(coef(m.group(1)), coef(m.group(2)))


@dataclass(frozen=True, slots=True, order=True)
class Monomial:
    """Exponent vector over ``VARIABLES`` plus sorted ``((m, n), exponent)`` class factors."""

    exps: tuple[int, ...] = (0,) * _NVARS
    classes: tuple[tuple[tuple[int, int], int], ...] = ()

    @classmethod
    def of(cls, classes: Mapping[tuple[int, int], int] | None = None, **powers: int) -> "Monomial":
        exps = [0] * _NVARS
        for name, e in powers.items():
            if name not in _VAR_INDEX:
                raise PolyError(f"unknown variable {name!r}")
            exps[_VAR_INDEX[name]] = e
        return cls(tuple(exps), _canon_classes((classes or {}).items()))

    def __mul__(self, other: "Monomial") -> "Monomial":
        exps = tuple(a + b for a, b in zip(self.exps, other.exps))
        if not other.classes:
            return Monomial(exps, self.classes)
        if not self.classes:
            return Monomial(exps, other.classes)
        return Monomial(exps, _canon_classes(self.classes + other.classes))

    def inverse(self) -> "Monomial":
        return Monomial(tuple(-e for e in self.exps), tuple((c, -e) for c, e in self.classes))

    def exponent(self, var: str) -> int:
        return self.exps[_VAR_INDEX[var]]

    def degree(self, variables: Iterable[str]) -> int:
        return sum(self.exps[_VAR_INDEX[v]] for v in variables)

    def is_one(self) -> bool:
        return not any(self.exps) and not self.classes

    def render(self) -> list[str]:
        out = [f"{v}^{e}" for v, e in zip(VARIABLES, self.exps) if e]
        for c, e in self.classes:
            out.append(format_class(c) if e == 1 else f"{format_class(c)}^{e}")
        return out


def _canon_classes(items) -> tuple:
    acc: dict[tuple[int, int], int] = {}
    for c, e in items:
        c = canonical_class(*c)
        if c == (0, 0):
            raise PolyError("the zero class is not a valid class symbol")
        acc[c] = acc.get(c, 0) + e
    return tuple(sorted((c, e) for c, e in acc.items() if e))


ONE_MONOMIAL = Monomial()


class LaurentPoly:
    """Immutable Laurent polynomial; ``terms`` maps Monomial -> nonzero GaussianInt."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, GaussianInt] = {}
        for m, c in (terms or {}).items():
            c = GaussianInt.coerce(c)
            if c:
                prev = clean.get(m)
                c = c if prev is None else prev + c
                if c:
                    clean[m] = c
                else:
                    clean.pop(m, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c=1) -> "LaurentPoly":
        return cls({ONE_MONOMIAL: c})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "LaurentPoly":
        return cls({Monomial.of(**{name: power}): 1})

    @classmethod
    def monomial(cls, coeff=1, classes=None, **powers) -> "LaurentPoly":
        return cls({Monomial.of(classes, **powers): coeff})

    @classmethod
    def homclass(cls, m: int, n: int) -> "LaurentPoly":
        return cls({Monomial.of({(m, n): 1}): 1})

    @property
    def terms(self) -> Mapping[Monomial, GaussianInt]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.const(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.const(GaussianInt.coerce(other))

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self._terms)
        for m, c in o._terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            c = GaussianInt.coerce(other)
            if not c:
                return LaurentPoly()
            return LaurentPoly._raw({m: v * c for m, v in self._terms.items()})
        out: dict[Monomial, GaussianInt] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                s = out.get(m)
                s = c1 * c2 if s is None else s + c1 * c2
                out[m] = s
        return LaurentPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit_monomial(self) -> bool:
        return self.is_monomial() and next(iter(self._terms.values())).is_unit()

    def inverse(self) -> "LaurentPoly":
        if not self.is_unit_monomial():
            raise PolyError(f"{self} is not invertible")
        (m, c), = self._terms.items()
        return LaurentPoly._raw({m.inverse(): c.conj()})

    def variables(self) -> set[str]:
        used = set()
        for m in self._terms:
            used.update(v for v, e in zip(VARIABLES, m.exps) if e)
        return used

    def has_classes(self) -> bool:
        return any(m.classes for m in self._terms)

    def coefficient(self, monomial: Monomial) -> GaussianInt:
        return self._terms.get(monomial, GaussianInt())

    def degrees(self, var: str) -> set[int]:
        return {m.exponent(var) for m in self._terms}

    def map_monomials(self, fn) -> "LaurentPoly":
        return LaurentPoly({fn(m): c for m, c in self._terms.items()})

    def sorted_terms(self) -> list[tuple[Monomial, GaussianInt]]:
        return sorted(self._terms.items(), key=lambda mc: (tuple(-e for e in mc[0].exps), mc[0].classes))

    def to_text(self) -> str:
        """Deterministic machine form, e.g. ``(0,-2)*x^1*y^1*t^1*|a+b|``."""
        if not self._terms:
            return "0"
        return " + ".join("*".join([str(c)] + m.render()) for m, c in self.sorted_terms())

    def pretty(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            body = "*".join(m.render())
            coef = _pretty_coeff(c)
            if body:
                if coef == "1":
                    term = body
                elif coef == "-1":
                    term = "-" + body
                else:
                    term = f"{coef}*{body}"
            else:
                term = coef
            out.append(term)
        s = " + ".join(out)
        return s.replace("+ -", "- ")

    def __repr__(self):
        return f"LaurentPoly({self.pretty()})"

    __str__ = pretty

    def to_json(self) -> list[dict]:
        rows = []
        for m, c in self.sorted_terms():
            row = {"re": c.re, "im": c.im, "exps": {v: e for v, e in zip(VARIABLES, m.exps) if e}}
            if len(m.classes) == 1 and m.classes[0][1] == 1:
                row["class"] = list(m.classes[0][0])
            elif m.classes:
                row["classes"] = [[c_[0], c_[1], e] for c_, e in m.classes]
            rows.append(row)
        return rows

    @classmethod
    def from_json(cls, rows: list[dict]) -> "LaurentPoly":
        terms: dict[Monomial, GaussianInt] = {}
        for row in rows:
            classes: dict = {}
            if "class" in row:
                classes[tuple(row["class"][:2])] = 1
            for m, n, e in row.get("classes", []):
                classes[(m, n)] = classes.get((m, n), 0) + e
            mono = Monomial.of(classes, **row.get("exps", {}))
            terms[mono] = terms.get(mono, GaussianInt()) + GaussianInt(row["re"], row["im"])
        return cls(terms)

    # --- structural operations --------------------------------------------

    def substitute(self, bindings: Mapping[str, object]) -> "LaurentPoly":
        """Substitute variables by polynomials.

        A binding used at a negative exponent must be an invertible monomial
        (unit coefficient); ``1`` is always allowed.
        """
        if not bindings:
            return self
        idx = {}
        for var, val in bindings.items():
            if var not in _VAR_INDEX:
                raise PolyError(f"unknown variable {var!r}")
            idx[_VAR_INDEX[var]] = self._coerce(val)
        cache: dict[tuple[int, int], LaurentPoly] = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                base = idx[i]
                if e < 0 and not base.is_unit_monomial():
                    raise PolyError(f"cannot substitute non-invertible {base} for {VARIABLES[i]}^{e}")
                cache[key] = base ** e
            return cache[key]

        result = LaurentPoly()
        acc: dict[Monomial, GaussianInt] = {}
        for m, c in self._terms.items():
            rest = list(m.exps)
            factor = LaurentPoly.const(c)
            for i in idx:
                e = rest[i]
                if e:
                    factor = factor * power(i, e)
                    rest[i] = 0
            base = Monomial(tuple(rest), m.classes)
            for m2, c2 in factor._terms.items():
                mm = base * m2
                acc[mm] = acc.get(mm, GaussianInt()) + c2
        result = LaurentPoly(acc)
        return result

    def invert_xy(self) -> "LaurentPoly":
        ix, iy = _VAR_INDEX["x"], _VAR_INDEX["y"]

        def flip(m: Monomial) -> Monomial:
            e = list(m.exps)
            e[ix], e[iy] = -e[ix], -e[iy]
            return Monomial(tuple(e), m.classes)

        return LaurentPoly._raw({flip(m): c for m, c in self._terms.items()})

    def homogeneous_degree(self, variables: Iterable[str]) -> int | None:
        variables = tuple(variables)
        degs = {m.degree(variables) for m in self._terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def shift(self, monomial: Monomial) -> "LaurentPoly":
        return LaurentPoly._raw({m * monomial: c for m, c in self._terms.items()})


def _imag(b: int) -> str:
    return "i" if b == 1 else f"{b}*i"


def _pretty_coeff(c: GaussianInt) -> str:
    if c.im == 0:
        return str(c.re)
    if c.re == 0:
        return "-" + _imag(-c.im) if c.im < 0 else _imag(c.im)
    return f"({c.re}{'+' if c.im > 0 else '-'}{_imag(abs(c.im))})"


def substitute(p: LaurentPoly, bindings: Mapping[str, object]) -> LaurentPoly:
    return p.substitute(bindings)


def invert_xy(p: LaurentPoly) -> LaurentPoly:
    return p.invert_xy()


def homogeneous_degree(p: LaurentPoly, variables: Iterable[str]) -> int | None:
    return p.homogeneous_degree(variables)


x = LaurentPoly.var("x")
y = LaurentPoly.var("y")
z = LaurentPoly.var("z")
h = LaurentPoly.var("h")
A = LaurentPoly.var("A")
t = LaurentPoly.var("t")
s = LaurentPoly.var("s")
i = LaurentPoly.const(I)


def d_double() -> LaurentPoly:
    """The circle value ``i x y z^-2 - i x^-1 y^-1 z^2`` of the double model."""
    return LaurentPoly.monomial(I, x=1, y=1, z=-2) + LaurentPoly.monomial(-I, x=-1, y=-1, z=2)


def d_bracket() -> LaurentPoly:
    return LaurentPoly.monomial(-1, A=2) + LaurentPoly.monomial(-1, A=-2)


# --- exponent matrix ---------------------------------------------------------


def exponent_matrix(p: LaurentPoly) -> dict[tuple[int, int], GaussianInt]:
    """Re-index an {x, y}-polynomial: coefficient of x^a y^b sits at (a - b, a + b)."""
    extra = p.variables() - {"x", "y"}
    if extra or p.has_classes():
        raise PolyError(f"exponent_matrix needs a polynomial in x, y only (found {sorted(extra)})")
    return {(m.exponent("x") - m.exponent("y"), m.exponent("x") + m.exponent("y")): c for m, c in p.items()}


def from_exponent_matrix(matrix: Mapping[tuple[int, int], GaussianInt]) -> LaurentPoly:
    terms = {}
    for (r, s), c in matrix.items():
        if (r + s) % 2:
            raise PolyError(f"row {r} and column {s} have different parity")
        terms[Monomial.of(x=(r + s) // 2, y=(s - r) // 2)] = c
    return LaurentPoly(terms)


def gaussian_rank(rows: list[list[GaussianInt]]) -> int:
    """Rank over Q(i) by fraction-free (Bareiss-style) elimination in Z[i]."""
    m = [list(map(GaussianInt.coerce, r)) for r in rows]
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    rank = 0
    prev = ONE
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                m[r][c] = (m[r][c] * m[rank][col] - m[rank][c] * m[r][col]).divmod_exact(prev)
            m[r][col] = GaussianInt()
        prev = m[rank][col]
        rank += 1
        if rank == nrows:
            break
    return rank


def matrix_rank(matrix: Mapping[tuple[int, int], GaussianInt]) -> int:
    rows = sorted({r for r, _ in matrix})
    cols = sorted({c for _, c in matrix})
    dense = [[matrix.get((r, c), GaussianInt()) for c in cols] for r in rows]
    return gaussian_rank(dense)


# --- text parsing ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(\|[^|]*\||[A-Za-z]|\d+|\^|\*|\+|-|\(|\)|,)")


def parse_poly(text: str) -> LaurentPoly:
    """Parse ``i * x^1 * y^-1 + 2 - |a+b|`` style expressions (sums of products)."""
    text = text.strip()
    if text == "0":
        return LaurentPoly()
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyError(f"unexpected character at column {pos + 1} in {text!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return _Parser(tokens, text).parse()


class _Parser:
    def __init__(self, tokens, text):
        self.toks = tokens
        self.k = 0
        self.text = text

    def peek(self):
        return self.toks[self.k] if self.k < len(self.toks) else None

    def take(self, expect=None):
        tok = self.peek()
        if tok is None or (expect is not None and tok != expect):
            raise PolyError(f"expected {expect or 'token'} in {self.text!r}, got {tok!r}")
        self.k += 1
        return tok

    def parse(self) -> LaurentPoly:
        result = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            nxt = self.term()
            result = result + nxt if op == "+" else result - nxt
        if self.peek() is not None:
            raise PolyError(f"trailing input {self.peek()!r} in {self.text!r}")
        return result

    def term(self) -> LaurentPoly:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        result = self.factor()
        while self.peek() == "*":
            self.take()
            result = result * self.factor()
        return result * sign

    def exponent(self) -> int:
        if self.peek() != "^":
            return 1
        self.take()
        sign = 1
        if self.peek() in ("-", "+"):
            sign = -1 if self.take() == "-" else 1
        tok = self.take()
        if not tok.isdigit():
            raise PolyError(f"bad exponent {tok!r} in {self.text!r}")
        return sign * int(tok)

    def factor(self) -> LaurentPoly:
        tok = self.take()
        if tok.isdigit():
            return LaurentPoly.const(int(tok))
        if tok == "(":
            # either a grouped expression or an (re,im) coefficient pair
            start = self.k
            try:
                re_ = self._signed_int()
                self.take(",")
                im_ = self._signed_int()
                self.take(")")
                return LaurentPoly.const(GaussianInt(re_, im_))
            except PolyError:
                self.k = start
            inner = []
            depth = 1
            while depth:
                t_ = self.take()
                depth += {"(": 1, ")": -1}.get(t_, 0)
                if depth:
                    inner.append(t_)
            sub = _Parser(inner, self.text).parse()
            e = self.exponent()
            return sub ** e
        if tok.startswith("|"):
            base = LaurentPoly.homclass(*parse_class(tok))
            return base ** self.exponent()
        if tok == "i":
            return LaurentPoly.const(I)
        if tok in _VAR_INDEX:
            return LaurentPoly.var(tok, self.exponent())
        raise PolyError(f"unexpected token {tok!r} in {self.text!r}")

    def _signed_int(self) -> int:
        sign = 1
        if self.peek() in ("-", "+"):
            sign = -1 if self.take() == "-" else 1
        tok = self.take()
        if not tok.isdigit():
            raise PolyError("not an integer")
        return sign * int(tok)
