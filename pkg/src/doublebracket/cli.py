"""Command-line front end.

    doublebracket compute [--mode classical|annulus|torus] FILE...
    doublebracket verify [--moves N] [--seed S] FILE...
    doublebracket conjecture [FILE|DIR ...]
    doublebracket oracle [FILE|DIR ...]

Exit codes: 0 success, 1 invariance or oracle failure, 2 bad input, 3 a term of
h-degree other than 1 when h is forgotten.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from pathlib import Path

from .diagram import Annulus, Diagram, DiagramError, Torus, read_pd
from .invariant import HLinearityError, WeightError, load_weight_scheme, w_poly, wh_poly
from .invariant.engine import WeightLawError
from .verify import (
    SkeinBudgetError, alexander_det_oracle, alexander_oracle_match, check_invariance, conjecture_check,
    jones_oracle_match, state_permanent,
)
from .states import enumerate_alexander_states

DEFAULT_SEED = 1
DEFAULT_MOVES = 200
FIXTURE_ENV = "DOUBLEBRACKET_FIXTURES"


class InputError(Exception):
    """Reported with exit status 2."""


def fixture_root() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("doublebracket").joinpath("data", "corpus")))


def _resolve(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    alt = fixture_root() / arg
    if alt.exists():
        return alt
    raise InputError(f"{arg}: no such file")


def collect(args: list[str], default: str | None = None) -> list[Path]:
    """Expand files and directories (recursively, ``*.pd``) into a sorted file list."""
    if not args and default is not None:
        args = [default]
    out: list[Path] = []
    for a in args:
        p = _resolve(a)
        if p.is_dir():
            out.extend(sorted(p.rglob("*.pd")))
        else:
            out.append(p)
    if not out:
        raise InputError("no diagrams given (empty table)")
    return out


def load(path: Path, max_crossings: int) -> Diagram:
    try:
        d = read_pd(path)
    except DiagramError as err:
        raise InputError(str(err)) from None
    except OSError as err:
        raise InputError(f"{path}: {err.strerror}") from None
    if d.n > max_crossings:
        raise InputError(f"{path}: {d.n} crossings exceeds --max-crossings {max_crossings}")
    if not d.name:
        d = Diagram(d.slots, d.signs, d.ambient, d.labels, path.stem)
    return d


def prepare(d: Diagram, mode: str | None, star_edge: int | None) -> tuple[Diagram, str]:
    """Check the requested mode against the ambient block and fix the stars."""
    torus = isinstance(d.ambient, Torus)
    if mode is None:
        mode = "torus" if torus else "annulus" if isinstance(d.ambient, Annulus) else "classical"
    if (mode == "torus") != torus:
        raise InputError(f"{d.name}: --mode {mode} does not match the diagram's {d.ambient.kind} ambient")
    if mode == "annulus" and not isinstance(d.ambient, Annulus):
        raise InputError(f"{d.name}: --mode annulus needs an annulus ambient block")
    if star_edge is not None:
        if mode == "torus":
            raise InputError("--star-edge applies to classical and annulus diagrams")
        if star_edge not in d.ends:
            raise InputError(f"{d.name}: no edge {star_edge}")
        c, s = d.ends[star_edge][0]
        d = d.with_ambient(Annulus((c, s % 4), (c, (s - 1) % 4)))
    elif mode == "classical":
        d = d.as_classical()
    return d, mode


def _scheme(args):
    path = args.weights or os.environ.get("DOUBLEBRACKET_WEIGHTS")
    if not path:
        return load_weight_scheme()
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise InputError(f"{path}: {err.strerror}") from None
    try:
        return load_weight_scheme(text)
    except WeightError as err:
        raise InputError(f"{path}: {err}") from None


def _pmap(fn, items, workers: int):
    """Map in order; ``workers > 1`` uses a process pool (results keep input order)."""
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


def _emit(args, payload: dict, text: str) -> None:
    print(json.dumps(payload, sort_keys=True) if args.json else text)


# --- commands ---------------------------------------------------------------------


def _compute_one(job):
    d, mode, opts, scheme = job
    t0 = time.perf_counter()
    if mode == "torus":
        res = wh_poly(d, scheme, set_z_1=opts["set_z_1"], writhe=opts["writhe"], count_states=True)
    else:
        h_mode = opts["h_mode"] or ("forget" if mode == "classical" else "keep")
        res = w_poly(d, scheme, set_z_1=opts["set_z_1"], h_mode=h_mode, count_states=True)
        res = type(res)(res.value, mode, res.state_count, res.writhe)
    return res, time.perf_counter() - t0


def cmd_compute(args) -> int:
    scheme = _scheme(args)
    jobs = []
    for p in collect(args.inputs):
        d, mode = prepare(load(p, args.max_crossings), args.mode, args.star_edge)
        jobs.append((d, mode, {"set_z_1": args.set_z_1, "h_mode": args.h_mode, "writhe": args.writhe}, scheme))
    results = _pmap(_compute_one, jobs, args.workers)
    for (d, *_), (res, elapsed) in zip(jobs, results):
        payload = dict(res.to_json(), diagram=d.name, crossings=d.n)
        nt, ns = res.state_count
        text = (f"{d.name}: {res.value.pretty()}\n"
                f"  mode={res.mode} writhe={res.writhe} |T|={nt} 2^n={ns}")
        _emit(args, payload, text)
        print(f"{d.name}: {elapsed:.3f} s", file=sys.stderr)
    return 0


def _verify_one(job):
    d, moves, seed, scheme, writhe = job
    return check_invariance(d, moves, seed, scheme=scheme, writhe=writhe)


def cmd_verify(args) -> int:
    scheme = _scheme(args)
    jobs = []
    for p in collect(args.inputs):
        d, _ = prepare(load(p, args.max_crossings), args.mode, args.star_edge)
        jobs.append((d, args.moves, args.seed, scheme, args.writhe))
    if not args.json:
        print(f"seed={args.seed} moves={args.moves}")
    failed = 0
    for rep in _pmap(_verify_one, jobs, args.workers):
        failed += not rep.ok
        text = f"{rep.diagram}: {rep.which} {rep.verdict} after {len(rep.moves)} moves"
        if not rep.ok:
            text += f"\n  move {rep.violation_step}: {rep.moves[-1]}\n  before: {rep.values[0].pretty()}\n  after:  {rep.values[-1].pretty()}"
        _emit(args, rep.to_json(), text)
    if not args.json:
        print(f"summary: {len(jobs) - failed}/{len(jobs)} invariant")
    return 1 if failed else 0


def _conjecture_one(job):
    d, scheme = job
    return conjecture_check(d, scheme)


def cmd_conjecture(args) -> int:
    scheme = _scheme(args)
    jobs = []
    for p in collect(args.inputs, default="knots"):
        d, _ = prepare(load(p, args.max_crossings), "classical", args.star_edge)
        jobs.append((d, scheme))
    reports = _pmap(_conjecture_one, jobs, args.workers)
    rank1 = matched = 0
    for rep in reports:
        rank1 += rep.factorizable
        matched += bool(rep.alexander_match)
        if rep.factorizable:
            text = f"{rep.diagram}: rank 1  H = {rep.H.pretty()}  P = {rep.P.pretty()}"
        else:
            text = f"{rep.diagram}: rank {rep.rank}  ** no factorization **"
        text += "  Alexander " + ("match" if rep.alexander_match else "** MISMATCH **")
        _emit(args, rep.to_json(), text)
    summary = {"diagrams": len(reports), "rank1": rank1, "alexander_match": matched}
    _emit(args, {"summary": summary},
          f"summary: {len(reports)} diagrams, {rank1} rank-1 factorizations, {matched} Alexander matches")
    return 0


def _oracle_one(d: Diagram) -> dict:
    out = {"diagram": d.name}
    unit = alexander_oracle_match(d)
    out["alexander"] = unit is not None
    out["alexander_unit"] = None if unit is None else [str(unit[0]), unit[1].exponent("t")]
    out["alexander_det"] = alexander_det_oracle(d).to_text()
    try:
        out["jones"] = jones_oracle_match(d)
    except SkeinBudgetError:
        out["jones"] = None
    out["permanent"] = state_permanent(d) == len(enumerate_alexander_states(d))
    return out


def cmd_oracle(args) -> int:
    ds = []
    for p in collect(args.inputs, default="knots"):
        d, mode = prepare(load(p, args.max_crossings), args.mode, args.star_edge)
        if mode == "torus":
            continue
        ds.append(d)
    failed = 0
    for row in _pmap(_oracle_one, ds, args.workers):
        bad = not row["alexander"] or row["jones"] is False or not row["permanent"]
        failed += bad
        marks = " ".join(f"{k}={'ok' if row[k] else ('skipped' if row[k] is None else 'FAIL')}"
                         for k in ("alexander", "jones", "permanent"))
        _emit(args, row, f"{row['diagram']}: {marks}")
    if not args.json:
        print(f"summary: {len(ds) - failed}/{len(ds)} agree")
    return 1 if failed else 0


# --- argument parsing ---------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="*", help="PD files or directories (names under the fixture corpus also work)")
    common.add_argument("--mode", choices=("classical", "annulus", "torus"),
                        help="default: taken from the ambient block")
    common.add_argument("--star-edge", type=int, metavar="E",
                        help="put the origin star left of edge E (classical and annulus diagrams)")
    common.add_argument("--json", action="store_true", help="one JSON object per line")
    common.add_argument("--workers", type=int, default=1, help="worker processes across diagrams")
    common.add_argument("--max-crossings", type=int, default=14)
    common.add_argument("--weights", help="weight table file (default: bundled, or $DOUBLEBRACKET_WEIGHTS)")
    common.add_argument("--writhe", choices=("self", "full"), default="self",
                        help="torus normalisation: self-crossings only, or every crossing")

    parser = argparse.ArgumentParser(prog="doublebracket", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("compute", parents=[common], help="compute W or W^H")
    p.add_argument("--set-z-1", action="store_true", help="substitute z = 1")
    p.add_argument("--h-mode", choices=("keep", "forget"),
                   help="default: forget in classical mode, keep in annulus mode")
    p.set_defaults(func=cmd_compute)
    p = sub.add_parser("verify", parents=[common], help="random Reidemeister moves, exact comparison")
    p.add_argument("--moves", type=int, default=DEFAULT_MOVES)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("conjecture", parents=[common], help="rank-1 factorization and Alexander comparison")
    p.set_defaults(func=cmd_conjecture)
    p = sub.add_parser("oracle", parents=[common], help="state sums against determinant, skein and permanent")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    try:
        return args.func(args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except HLinearityError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except WeightLawError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
