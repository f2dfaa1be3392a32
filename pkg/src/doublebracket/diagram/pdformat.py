"""Reader and writer for the annotated PD text format.

::

    # trefoil, right-handed
    X1 u_in=1 o_out=5 u_out=2 o_in=4
    X2 u_in=3 o_out=1 u_out=4 o_in=6
    X3 u_in=5 o_out=3 u_out=6 o_in=2
    ambient annulus origin=(1,OI) inf=(1,UI)

Each crossing lists its four edge ends counterclockwise starting at ``u_in``;
the sign is read off from whether ``o_out`` (positive) or ``o_in`` (negative)
comes second.  An optional ``sign=+1`` token is cross-checked.  Torus
diagrams follow ``ambient torus`` with ``edge <id> class=<p>,<q>`` lines.
"""

from __future__ import annotations

import re

from .model import QUADRANT_LABELS, Annulus, Diagram, DiagramError, Sphere, Torus, quadrant_index, slot_role


class PDParseError(DiagramError):
    def __init__(self, message: str, line: int, column: int, source: str = "<pd>"):
        self.line = line
        self.column = column
        self.source = source
        ValueError.__init__(self, f"{source}:{line}:{column}: {message}")
        self.crossing = None


_ROLES_POS = ("u_in", "o_out", "u_out", "o_in")
_ROLES_NEG = ("u_in", "o_in", "u_out", "o_out")
_TOKEN = re.compile(r"\S+")
_KV = re.compile(r"^([a-z_]+)=(.+)$")
_INT = re.compile(r"^[+-]?\d+$")
_CORNER = re.compile(r"^\(\s*X?([A-Za-z0-9_]+)\s*,\s*([A-Za-z]+|\d)\s*\)$")


def parse_pd(text: str, source: str = "<pd>") -> Diagram:
    crossings: list[tuple[str, tuple[int, ...], int]] = []
    ambient_kind = None
    ambient_args: dict[str, tuple[str, int, int]] = {}
    classes: dict[int, tuple[int, int]] = {}
    name = ""

    def fail(msg, ln, col):
        raise PDParseError(msg, ln, col, source)

    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]
        if not toks:
            continue
        head, col = toks[0]
        if head == "name":
            name = line[line.index("name") + 4:].strip()
        elif head.startswith("X") and len(head) > 1:
            if ambient_kind is not None:
                fail("crossing after the ambient block", ln, col)
            label = head[1:]
            if not re.fullmatch(r"[A-Za-z0-9_]+", label):
                fail(f"bad crossing id {label!r}", ln, col + 1)
            if any(lab == label for lab, _, _ in crossings):
                fail(f"duplicate crossing id {label!r}", ln, col)
            roles, declared = [], None
            for tok, tcol in toks[1:]:
                m = _KV.match(tok)
                if not m:
                    fail(f"expected role=<edge>, got {tok!r}", ln, tcol)
                key, val = m.groups()
                if key == "sign":
                    if val not in ("+1", "-1", "1", "+", "-"):
                        fail(f"bad sign {val!r}", ln, tcol)
                    declared = -1 if val.startswith("-") else 1
                    continue
                if key not in _ROLES_POS:
                    fail(f"unknown role {key!r}", ln, tcol)
                if not _INT.match(val):
                    fail(f"edge id must be an integer, got {val!r}", ln, tcol + len(key) + 1)
                roles.append((key, int(val), tcol))
            keys = tuple(k for k, _, _ in roles)
            if keys == _ROLES_POS:
                sign = 1
            elif keys == _ROLES_NEG:
                sign = -1
            else:
                where = toks[1][1] if len(toks) > 1 else col
                fail(f"roles must be listed counterclockwise from u_in as {' '.join(_ROLES_POS)} "
                     f"or {' '.join(_ROLES_NEG)}, got {' '.join(keys) or 'nothing'}", ln, where)
            if declared is not None and declared != sign:
                fail(f"declared sign {declared:+d} contradicts the slot order (sign {sign:+d})", ln, col)
            crossings.append((label, tuple(e for _, e, _ in roles), sign))
        elif head == "ambient":
            if ambient_kind is not None:
                fail("second ambient block", ln, col)
            if len(toks) < 2:
                fail("ambient needs sphere, annulus or torus", ln, col)
            ambient_kind, kcol = toks[1]
            if ambient_kind not in ("sphere", "annulus", "torus"):
                fail(f"unknown ambient {ambient_kind!r}", ln, kcol)
            rest = line[kcol - 1 + len(ambient_kind):]
            if ambient_kind == "annulus":
                for m in re.finditer(r"(\w+)\s*=\s*(\([^)]*\))", rest):
                    ambient_args[m.group(1)] = (m.group(2), ln, kcol + len(ambient_kind) + m.start() + 1)
                missing = {"origin", "inf"} - set(ambient_args)
                if missing:
                    fail(f"annulus needs origin=(..) and inf=(..); missing {sorted(missing)}", ln, kcol)
                extra = set(ambient_args) - {"origin", "inf"}
                if extra:
                    fail(f"unexpected annulus argument(s) {sorted(extra)}", ln, kcol)
            elif rest.strip():
                fail(f"unexpected text after 'ambient {ambient_kind}'", ln, kcol + len(ambient_kind) + 1)
        elif head == "edge":
            if ambient_kind != "torus":
                fail("edge class lines belong to an 'ambient torus' block", ln, col)
            if len(toks) != 3:
                fail("expected: edge <id> class=<p>,<q>", ln, col)
            eid, ecol = toks[1]
            if not _INT.match(eid):
                fail(f"bad edge id {eid!r}", ln, ecol)
            m = re.fullmatch(r"class=([+-]?\d+),([+-]?\d+)", toks[2][0])
            if not m:
                fail(f"bad class {toks[2][0]!r}", ln, toks[2][1])
            if int(eid) in classes:
                fail(f"duplicate class for edge {eid}", ln, ecol)
            classes[int(eid)] = (int(m.group(1)), int(m.group(2)))
        else:
            fail(f"unexpected token {head!r}", ln, col)

    if not crossings:
        raise PDParseError("no crossings", 1, 1, source)

    labels = tuple(lab for lab, _, _ in crossings)
    index = {lab: c for c, lab in enumerate(labels)}
    slots = tuple(s for _, s, _ in crossings)
    signs = tuple(sg for _, _, sg in crossings)

    def corner(spec):
        text_, ln, col = spec
        m = _CORNER.match(text_)
        if not m:
            fail(f"bad face spec {text_!r}; expected (<crossing>,<quadrant>)", ln, col)
        lab, q = m.groups()
        if lab not in index:
            fail(f"unknown crossing {lab!r} in face spec", ln, col)
        c = index[lab]
        if q.isdigit():
            return (c, int(q))
        if q not in QUADRANT_LABELS:
            fail(f"unknown quadrant {q!r}", ln, col)
        return (c, quadrant_index(signs[c], q))

    if ambient_kind == "annulus":
        ambient = Annulus(corner(ambient_args["origin"]), corner(ambient_args["inf"]))
    elif ambient_kind == "torus":
        ambient = Torus.of(classes)
    else:
        ambient = Sphere()
    try:
        return Diagram(slots, signs, ambient, labels, name)
    except PDParseError:
        raise
    except DiagramError as err:
        ln = 1
        if err.crossing is not None:
            for i, raw in enumerate(text.splitlines(), 1):
                if re.match(rf"\s*X{re.escape(err.crossing)}\b", raw):
                    ln = i
                    break
        raise PDParseError(str(err), ln, 1, source) from err


def read_pd(path) -> Diagram:
    with open(path, encoding="utf-8") as fh:
        return parse_pd(fh.read(), str(path))


def format_pd(d: Diagram, comments: list[str] | tuple[str, ...] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    if d.name:
        lines.append(f"name {d.name}")
    for lab, row, sign in zip(d.labels, d.slots, d.signs):
        lines.append(f"X{lab} " + " ".join(f"{slot_role(sign, k)}={row[k]}" for k in range(4)))
    amb = d.ambient
    if isinstance(amb, Annulus):
        spec = lambda cr: f"({d.labels[cr[0]]},{d.quadrant_label(cr)})"
        lines.append(f"ambient annulus origin={spec(amb.origin)} inf={spec(amb.inf)}")
    elif isinstance(amb, Torus):
        lines.append("ambient torus")
        for e, (p, q) in sorted(amb.as_dict().items()):
            lines.append(f"edge {e} class={p},{q}")
    else:
        lines.append("ambient sphere")
    return "\n".join(lines) + "\n"
