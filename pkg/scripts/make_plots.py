"""Write the standard SVG figures into an output directory.

    python scripts/make_plots.py [outdir] [path/to/lpoints.jsonl]

Without a data file only the density contours are drawn.
"""

import sys
import math
from pathlib import Path

from lspace.classmeasures import TraceDensity, TraceSample
from lspace.plots import emit_plot
from lspace.store import ingest


def main(outdir="figures", path=None):
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    for p in (2, 3, math.inf):
        emit_plot("density-contour", TraceDensity(p), out / f"density_{p}.svg", xlim=(-1.6, 3.1), ylim=(-2.7, 2.7))
    if path:
        recs = ingest(path)
        emit_plot("parameter-landscape", recs, out / "parameters.svg")
        emit_plot("coefficient-landscape", recs, out / "coefficients.svg")
        samples = [TraceSample.from_complex(complex(r.prime_coefficients()[2])) for r in recs
                   if 2 in r.prime_coefficients()]
        emit_plot("trace-scatter", samples, out / "traces_2.svg")
        emit_plot("z-curve", recs[0].to_lpoint(), out / "z_first.svg")
    print("wrote", sorted(str(f) for f in out.iterdir()))


if __name__ == "__main__":
    main(*sys.argv[1:3])
