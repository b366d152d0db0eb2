"""SVG pictures of modified graphs and of disk laminations.

Output is a plain string built from sorted data with fixed number
formatting, so equal inputs give byte-identical files.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

from .quiver import Kind
from .rational import fstr
from .stability import ChordFamily, sweep_families

GAP = Fraction(1, 36)
RED, BLUE, FAMILY = "#c0392b", "#2c5fa8", "#7f8c8d"


@dataclass(frozen=True)
class RenderSpec:
    width: int = 640
    height: int = 400
    labels: bool = True

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("width and height must be positive")


def _num(v):
    return f"{float(v):.3f}".rstrip("0").rstrip(".")


def _open(spec):
    return [f'<svg xmlns="http://www.w3.org/2000/svg" width="{spec.width}" '
            f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">',
            f'<rect width="{spec.width}" height="{spec.height}" fill="white"/>']


def _polyline(pts, color, width=2):
    coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)
    return (f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"/>')


def _strands(F):
    """Continuous pieces of F as point lists, plus the jump dots."""
    pieces, dots, cur = [], [], []
    for a, left, value, right in F.knots():
        cur.append((a, left))
        if left != right or value not in (left, right):
            if len(cur) > 1:
                pieces.append(cur)
            dots.append((a, value))
            cur = [(a, right)]
    if len(cur) > 1:
        pieces.append(cur)
    return pieces, dots


def render_graph(pair, spec=RenderSpec(), families=None):
    """Red and blue graphs of a pair with its semistable families shaded."""
    if families is None:
        families = [f for f in sweep_families(pair) if isinstance(f, ChordFamily)]
    values = [v for F in (pair.R, pair.B) for k in F.knots() for v in k[1:]]
    values += [h for f in families for h in (f.h_lo, f.h_hi)]
    lo, hi = min(values), max(values)
    if lo == hi:
        lo, hi = lo - 1, hi + 1
    pad = 40
    sx = lambda a: pad + (a + 1) / 2 * (spec.width - 2 * pad)
    sy = lambda v: spec.height - pad - (v - lo) / (hi - lo) * (spec.height - 2 * pad)
    out = _open(spec)
    for a, kind in pair.quiver.critical_points:
        x = _num(sx(a))
        out.append(f'<line x1="{x}" y1="{pad // 2}" x2="{x}" y2="{spec.height - pad // 2}" '
                   f'stroke="#bbb" stroke-dasharray="4 4"/>')
        if spec.labels:
            out.append(f'<text x="{x}" y="{spec.height - 6}" font-size="11" '
                       f'text-anchor="middle">{kind.value} {fstr(a)}</text>')
    for f in families:
        pts = [(sx(p.ang), sy(h)) for h, p in f.left_traj]
        pts += [(sx(p.ang), sy(h)) for h, p in reversed(f.right_traj)]
        coords = " ".join(f"{_num(x)},{_num(y)}" for x, y in pts)
        out.append(f'<polygon points="{coords}" fill="{FAMILY}" fill-opacity="0.25" '
                   f'stroke="{FAMILY}" stroke-width="1"/>')
    for F, color in ((pair.R, RED), (pair.B, BLUE)):
        pieces, dots = _strands(F)
        for piece in pieces:
            out.append(_polyline([(sx(a), sy(v)) for a, v in piece], color))
        for a, v in dots:
            out.append(f'<circle cx="{_num(sx(a))}" cy="{_num(sy(v))}" r="3" '
                       f'fill="{color}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def disk_angle(a):
    """Boundary angle in radians; +-inf sit just either side of the west pole."""
    return -float(a) * (1 - float(GAP)) * math.pi


def render_disk(L, spec=RenderSpec(), quiver=None, samples=6):
    """Boundary circle with geodesics drawn as straight chords.

    Atoms are drawn thick; a moving family is drawn at evenly spaced
    parameters.
    """
    cx, cy = spec.width / 2, spec.height / 2
    r = min(spec.width, spec.height) / 2 - 30
    at = lambda a: (cx + r * math.cos(disk_angle(a)), cy - r * math.sin(disk_angle(a)))
    out = _open(spec)
    out.append(f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="{_num(r)}" fill="none" '
               f'stroke="black" stroke-width="1.5"/>')
    if quiver is not None:
        for a, kind in quiver.critical_points:
            x, y = at(a)
            fill = "black" if kind is Kind.SINK else "white"
            out.append(f'<circle cx="{_num(x)}" cy="{_num(y)}" r="4" fill="{fill}" '
                       f'stroke="black"/>')
            if spec.labels:
                tx, ty = at(a)
                out.append(f'<text x="{_num(tx + (tx - cx) * 0.08)}" '
                           f'y="{_num(ty + (ty - cy) * 0.08)}" font-size="11" '
                           f'text-anchor="middle">{fstr(a)}</text>')
    if L is not None:
        c = L.canonical()
        for f in c.families:
            if f.atom:
                chords, width = [(f.start.a, f.start.b)], 3
            else:
                chords = [f.at(f.extent * Fraction(2 * k + 1, 2 * samples))
                          for k in range(samples)]
                width = 1
            for a, b in chords:
                (x1, y1), (x2, y2) = at(a), at(b)
                out.append(f'<line x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" '
                           f'y2="{_num(y2)}" stroke="{RED}" stroke-width="{width}"/>')
        for g in c.leaves:
            (x1, y1), (x2, y2) = at(g.a), at(g.b)
            out.append(f'<line x1="{_num(x1)}" y1="{_num(y1)}" x2="{_num(x2)}" '
                       f'y2="{_num(y2)}" stroke="{BLUE}" stroke-width="0.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
