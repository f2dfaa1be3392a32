"""Regenerate the bundled knot corpus from spherogram's Rolfsen table.

Development helper only (spherogram is not a runtime dependency)::

    python tools/make_corpus.py src/doublebracket/data/corpus/knots
"""

import sys
from pathlib import Path

import spherogram

from doublebracket.diagram import format_pd, from_pd

KNOTS = ["3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3"]
KNOTS += [f"7_{i}" for i in range(1, 8)] + [f"8_{i}" for i in range(1, 22)]


def main(outdir):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for name in KNOTS:
        pd = [tuple(e + 1 for e in x) for x in spherogram.Link(name).PD_code()]
        d = from_pd(pd, name=name)
        note = [
            f"Rolfsen knot {name}: PD code from spherogram {spherogram.__version__} Link('{name}').PD_code(),",
            "edges shifted to start at 1; orientation recovered from the strand order.",
        ]
        (out / f"{name}.pd").write_text(format_pd(d, note))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "src/doublebracket/data/corpus/knots")
