"""Crossing weight tables, loaded from a small text fixture."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from importlib import resources

from ..diagram.model import IN, OI, OUT, UI, QUADRANT_LABELS
from ..polyring import GaussianInt, LaurentPoly, PolyError, d_bracket, d_double, parse_poly

# geometric quadrant type -> label of that quadrant at a positive crossing
GEOMETRY_LABEL = {"IN": IN, "OUT": OUT, "LEFT": OI, "RIGHT": UI}
_UNIT_POWER = {GaussianInt(1, 0): 0, GaussianInt(0, 1): 1, GaussianInt(-1, 0): 2, GaussianInt(0, -1): 3}


class WeightError(ValueError):
    pass


@dataclass(frozen=True)
class WeightScheme:
    double: dict  # (label, "A"|"B") -> monomial, positive crossing
    alex: dict  # label -> monomial in s = t^(1/2), positive crossing
    version: str = "1"

    @property
    def d_double(self) -> LaurentPoly:
        return d_double()

    @property
    def d_bracket(self) -> LaurentPoly:
        return d_bracket()

    def double_weight(self, sign: int, geometry: str, oriented: str) -> LaurentPoly:
        """Weight of a dot in a quadrant of the given geometry under a V (oriented) or H splitting."""
        cell = self.double[(GEOMETRY_LABEL[geometry], "A" if oriented == "V" else "B")]
        return cell if sign > 0 else cell.inverse()

    def alex_weight(self, sign: int, geometry: str) -> LaurentPoly:
        cell = self.alex[GEOMETRY_LABEL[geometry]]
        return cell if sign > 0 else cell.inverse()

    def packed_double(self, sign: int, geometry: str, oriented: str) -> tuple[int, int, int, int]:
        """(x, y, z exponents, power of i) of a double weight."""
        (m, c), = self.double_weight(sign, geometry, oriented).items()
        return (m.exponent("x"), m.exponent("y"), m.exponent("z"), _UNIT_POWER[c])

    def max_exponent(self) -> int:
        return max(abs(e) for cell in self.double.values() for m, _ in cell.items() for e in m.exps)

    def to_text(self) -> str:
        lines = [f"version {self.version}"]
        for (lab, s), mono in sorted(self.double.items(), key=lambda kv: (QUADRANT_LABELS.index(kv[0][0]), kv[0][1])):
            lines.append(f"cell {lab} {s} = {mono.pretty()}")
        for lab in QUADRANT_LABELS:
            lines.append(f"alex {lab} = {self.alex[lab].pretty()}")
        return "\n".join(lines) + "\n"

    def perturbed(self, label: str, letter: str, factor: LaurentPoly) -> "WeightScheme":
        table = dict(self.double)
        table[(label, letter)] = table[(label, letter)] * factor
        return WeightScheme(table, self.alex, self.version + "-perturbed")


_CELL = re.compile(r"^cell\s+(IN|OUT|OI|UI)\s+([AB])\s*=\s*(.+)$")
_ALEX = re.compile(r"^alex\s+(IN|OUT|OI|UI)\s*=\s*(.+)$")


def load_weight_scheme(source: str | None = None) -> WeightScheme:
    """Parse fixture text.  ``None`` loads the bundled table (or ``$DOUBLEBRACKET_WEIGHTS``)."""
    if source is None:
        path = os.environ.get("DOUBLEBRACKET_WEIGHTS")
        if path:
            with open(path, encoding="utf-8") as fh:
                source = fh.read()
        else:
            source = resources.files("doublebracket").joinpath("data", "weights.txt").read_text("utf-8")
    double, alex, version = {}, {}, "1"
    for ln, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("version"):
            version = line.split(None, 1)[1] if " " in line else ""
            continue
        m = _CELL.match(line)
        a = _ALEX.match(line)
        if not m and not a:
            raise WeightError(f"line {ln}: cannot parse {raw.strip()!r}")
        try:
            value = parse_poly((m or a).groups()[-1])
        except PolyError as err:
            raise WeightError(f"line {ln}: {err}") from None
        if not value.is_unit_monomial():
            raise WeightError(f"line {ln}: {value} is not a monomial with unit coefficient")
        if m:
            key = (m.group(1), m.group(2))
            if key in double:
                raise WeightError(f"line {ln}: duplicate cell {key}")
            if value.variables() - {"x", "y", "z"}:
                raise WeightError(f"line {ln}: double cells use x, y, z only")
            double[key] = value
        else:
            if a.group(1) in alex:
                raise WeightError(f"line {ln}: duplicate alex cell {a.group(1)}")
            if value.variables() - {"s"}:
                raise WeightError(f"line {ln}: Alexander cells use s = t^(1/2) only")
            alex[a.group(1)] = value
    missing = [f"cell {q} {s}" for q in QUADRANT_LABELS for s in "AB" if (q, s) not in double]
    missing += [f"alex {q}" for q in QUADRANT_LABELS if q not in alex]
    if missing:
        raise WeightError("missing " + ", ".join(missing))
    return WeightScheme(double, alex, version)
