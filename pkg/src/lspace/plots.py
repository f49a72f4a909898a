"""CSV and SVG emitters for landscapes, Z-curves, densities and trace samples.

The SVG writer is a few dozen lines of string formatting: fixed 640x480 canvas,
linear axes with tick labels, no fonts beyond the generic family.  Output is a
pure function of the inputs, so files are byte-for-byte reproducible.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from pathlib import Path

import numpy as np

from .classmeasures import trace_boundary

__all__ = [
    "PLOT_KINDS",
    "Canvas",
    "emit_plot",
    "parameter_landscape",
    "coefficient_landscape",
    "z_curve",
    "density_contour",
    "trace_scatter",
]

PLOT_KINDS = ("parameter-landscape", "coefficient-landscape", "z-curve", "density-contour", "trace-scatter")

# one colour per refined signature, matching across plots
SIGNATURE_COLOURS = {"+++": "#1f4fd1", "+--": "#c62828", "+c": "#2e7d32", "-c": "#7b1fa2"}
WIDTH, HEIGHT, MARGIN = 640, 480, 56


def _nice_ticks(lo, hi, n=6):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step) * step
    out, v = [], start
    while v <= hi + 1e-9 * step:
        out.append(round(v, 12))
        v += step
    return out


def _fmt(v):
    return f"{v:.6g}"


class Canvas:
    """Minimal SVG canvas with data coordinates."""

    def __init__(self, xlim, ylim, title="", xlabel="", ylabel=""):
        (x0, x1), (y0, y1) = xlim, ylim
        if x1 <= x0:
            x0, x1 = x0 - 1, x0 + 1
        if y1 <= y0:
            y0, y1 = y0 - 1, y0 + 1
        self.xlim, self.ylim = (x0, x1), (y0, y1)
        self.parts = []
        self.title, self.xlabel, self.ylabel = title, xlabel, ylabel

    def px(self, x, y):
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        u = MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2 * MARGIN)
        v = HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2 * MARGIN)
        return u, v

    def polyline(self, xs, ys, colour="#000", width=1.2, dash=None):
        pts, seg = [], []
        for x, y in zip(xs, ys):
            if not (math.isfinite(x) and math.isfinite(y)):
                if seg:
                    pts.append(seg)
                seg = []
                continue
            seg.append("%.2f,%.2f" % self.px(x, y))
        if seg:
            pts.append(seg)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        for s in pts:
            self.parts.append(f'<polyline fill="none" stroke="{colour}" stroke-width="{width}"{extra} '
                              f'points="{" ".join(s)}"/>')

    def circle(self, x, y, r=2.5, colour="#000", fill=None):
        u, v = self.px(x, y)
        self.parts.append(f'<circle cx="{u:.2f}" cy="{v:.2f}" r="{r:.2f}" stroke="{colour}" '
                          f'fill="{fill or colour}"/>')

    def rect(self, x0, y0, x1, y1, fill):
        u0, v1 = self.px(x0, y0)
        u1, v0 = self.px(x1, y1)
        self.parts.append(f'<rect x="{u0:.2f}" y="{v0:.2f}" width="{u1 - u0:.2f}" height="{v1 - v0:.2f}" '
                          f'fill="{fill}" stroke="none"/>')

    def render(self) -> str:
        (x0, x1), (y0, y1) = self.xlim, self.ylim
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
               f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
               f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
        out.append(f'<clipPath id="plot"><rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
                   f'height="{HEIGHT - 2 * MARGIN}"/></clipPath>')
        out.append('<g clip-path="url(#plot)">')
        out.extend(self.parts)
        out.append("</g>")
        out.append(f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
                   f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="#000"/>')
        for t in _nice_ticks(x0, x1):
            u, _ = self.px(t, y0)
            out.append(f'<line x1="{u:.2f}" y1="{HEIGHT - MARGIN}" x2="{u:.2f}" y2="{HEIGHT - MARGIN + 4}" stroke="#000"/>')
            out.append(f'<text x="{u:.2f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle">{_fmt(t)}</text>')
        for t in _nice_ticks(y0, y1):
            _, v = self.px(x0, t)
            out.append(f'<line x1="{MARGIN - 4}" y1="{v:.2f}" x2="{MARGIN}" y2="{v:.2f}" stroke="#000"/>')
            out.append(f'<text x="{MARGIN - 6}" y="{v + 4:.2f}" text-anchor="end">{_fmt(t)}</text>')
        out.append(f'<text x="{WIDTH / 2}" y="{MARGIN / 2}" text-anchor="middle" font-size="13">{self.title}</text>')
        out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle">{self.xlabel}</text>')
        out.append(f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" '
                   f'transform="rotate(-90 14 {HEIGHT / 2})">{self.ylabel}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _limits(vals, pad=0.05, default=(0.0, 1.0)):
    vals = [v for v in vals if math.isfinite(v)]
    if not vals:
        return default
    lo, hi = min(vals), max(vals)
    span = hi - lo or max(abs(hi), 1.0)
    return lo - pad * span, hi + pad * span


def _signature_of(record):
    from .spectra import refined_signature
    return str(refined_signature(record.gtype))


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _multiplicities(pts, digits=6):
    c = Counter((round(x, digits), round(y, digits), s) for x, y, s in pts)
    return sorted(c.items())


def parameter_landscape(records) -> tuple:
    """(svg, csv rows) of landscape coordinates, one colour per signature."""
    pts = []
    for r in records:
        x, y = (float(v) for v, _ in r.coordinates)
        pts.append((x, y, _signature_of(r)))
    cv = Canvas(_limits([p[0] for p in pts], default=(0, 20)), _limits([p[1] for p in pts], default=(0, 20)),
                "parameter landscape", "first coordinate", "second coordinate")
    rows = []
    for (x, y, sig), m in _multiplicities(pts):
        cv.circle(x, y, 2.0 * math.sqrt(m), SIGNATURE_COLOURS.get(sig, "#444"))
        rows.append((x, y, sig, m))
    return cv.render(), rows


def coefficient_landscape(records, completed: bool = True) -> tuple:
    """(c2, c3) scatter with the zero set of -27 c3^2 - 4 c2^3 overlaid.  Point area
    is proportional to multiplicity; ``completed`` adds the dual of each point."""
    pts = []
    for r in records:
        c = r.coefficient_point()
        c2, c3 = float(c[2]), float(c[3])
        sig = _signature_of(r)
        pts.append((c2, c3, sig))
        if completed and c3 != 0:
            pts.append((c2, -c3, sig))
    xlim = _limits([p[0] for p in pts], default=(-500.0, 100.0))
    ylim = _limits([p[1] for p in pts], default=(-4000.0, 4000.0))
    cv = Canvas(xlim, ylim, "coefficient landscape", "c2", "c3")
    xs = np.linspace(min(xlim[0], 0.0), 0.0, 400)
    branch = np.sqrt(np.maximum(-4 * xs ** 3 / 27, 0.0))
    cv.polyline(xs, branch, "#888", 1.0, "4 3")
    cv.polyline(xs, -branch, "#888", 1.0, "4 3")
    rows = []
    for (x, y, sig), m in _multiplicities(pts, 4):
        cv.circle(x, y, 2.0 * math.sqrt(m), SIGNATURE_COLOURS.get(sig, "#444"))
        rows.append((x, y, sig, m))
    return cv.render(), rows


def z_curve(L, t_range=(0.0, 30.0), step: float = 0.05) -> tuple:
    """Z(t) on a grid, with the trivial zeros of the Gamma-factor marked at their heights."""
    from .afe import FastZ, trivial_zeros

    fz = FastZ(L)
    sgn = fz.orientation()
    t0, t1 = (float(v) for v in t_range)
    ts = np.arange(t0, t1 + step / 2, step)
    rows = []
    for t in ts:
        v, unknown = fz.raw(float(t))
        rows.append((float(t), sgn * v.real, unknown))
    zs = [r[1] for r in rows]
    cv = Canvas((t0, t1), _limits(zs, 0.1, (-1.0, 1.0)), "Z(t)", "t", "Z")
    cv.polyline([0, 0], [-1e300, 1e300], "#bbb", 0.8)
    cv.polyline([t0, t1], [0, 0], "#bbb", 0.8)
    cv.polyline(ts, zs, "#1f4fd1", 1.3)
    for tz in trivial_zeros(L.point, (t0, t1), sigma_min=-0.5):
        cv.circle(tz.projection, 0.0, 4.0, "#c62828", "none")
    return cv.render(), rows


def _grey(level):
    g = int(round(255 - 200 * level))
    return f"rgb({g},{g},{min(255, g + 20)})"


def _safe(density, x, y):
    try:
        return float(density(x, y))
    except ValueError:  # outside the support
        return math.nan


def density_contour(density, xlim, ylim, n: int = 200, levels: int = 12) -> tuple:
    """Density on an n x n grid drawn as quantized bands; returns (svg, csv rows)."""
    xs = np.linspace(xlim[0], xlim[1], n)
    ys = np.linspace(ylim[0], ylim[1], n)
    grid = np.array([[_safe(density, x, y) for x in xs] for y in ys])
    finite = grid[np.isfinite(grid)]
    top = float(finite.max()) if finite.size else 0.0
    cv = Canvas(xlim, ylim, "density", "x", "y")
    dx = (xs[1] - xs[0]) if n > 1 else 1.0
    dy = (ys[1] - ys[0]) if n > 1 else 1.0
    rows = []
    for j, y in enumerate(ys):
        run_start, run_level = None, None
        for i in range(n + 1):
            if i < n:
                v = grid[j, i]
                rows.append((float(xs[i]), float(y), v))
                lvl = None if not (top > 0 and np.isfinite(v) and v > 0) else min(levels - 1, int(levels * v / top))
            else:
                lvl = None
            if lvl != run_level:
                if run_level is not None:
                    cv.rect(xs[run_start] - dx / 2, y - dy / 2, xs[i - 1] + dx / 2, y + dy / 2,
                            _grey((run_level + 1) / levels))
                run_start, run_level = i, lvl
    return cv.render(), rows


def trace_scatter(samples, density=None) -> tuple:
    """Traces x + iy with the triangle boundary (and optionally a density backdrop)."""
    cv = Canvas((-1.7, 3.2), (-2.8, 2.8), "traces", "Re", "Im")
    if density is not None:
        svg_bg, _ = density_contour(density, (-1.7, 3.2), (-2.8, 2.8), n=120)
        cv.parts.extend(p for p in svg_bg.splitlines() if p.startswith("<rect") and "stroke=\"none\"" in p)
    th = np.linspace(0, 2 * np.pi, 721)
    # the boundary is the image of diag(e^{it}, e^{it}, e^{-2it})
    bx = 2 * np.cos(th) + np.cos(2 * th)
    by = 2 * np.sin(th) - np.sin(2 * th)
    cv.polyline(bx, by, "#000", 1.2)
    rows = []
    for s in samples:
        x, y = (s.x, s.y) if hasattr(s, "x") else (complex(s).real, complex(s).imag)
        inside = trace_boundary(x, y) >= -1e-3
        cv.circle(x, y, 2.0, "#1f4fd1" if inside else "#c62828")
        rows.append((x, y, int(inside)))
    return cv.render(), rows


_HEADERS = {
    "parameter-landscape": ("x1", "x2", "signature", "multiplicity"),
    "coefficient-landscape": ("c2", "c3", "signature", "multiplicity"),
    "z-curve": ("t", "Z", "unknown_bound"),
    "density-contour": ("x", "y", "density"),
    "trace-scatter": ("re", "im", "inside"),
}


def emit_plot(kind: str, inputs, out_path, **kw) -> Path:
    """Write ``out_path`` (SVG, or CSV when the suffix is .csv) for one plot kind.

    inputs: records for the landscapes, an LPoint for z-curve, a density callable
    for density-contour (xlim/ylim keywords required), samples for trace-scatter.
    """
    if kind not in PLOT_KINDS:
        raise ValueError(f"unknown plot kind {kind!r}; choose from {PLOT_KINDS}")
    if inputs is None:
        raise ValueError("missing inputs")
    builders = {
        "parameter-landscape": parameter_landscape,
        "coefficient-landscape": coefficient_landscape,
        "z-curve": z_curve,
        "density-contour": density_contour,
        "trace-scatter": trace_scatter,
    }
    svg, rows = builders[kind](inputs, **kw)
    out = Path(out_path)
    if out.suffix.lower() == ".csv":
        _write_csv(out, _HEADERS[kind], rows)
    else:
        out.write_text(svg, encoding="utf-8")
    return out
