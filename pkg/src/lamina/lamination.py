"""Measured laminations of the disk and their link to stability conditions.

Boundary points are angle coordinates in [-1, 1]; -1 and +1 are the two
infinities.  A lamination is presented by linear families of geodesics,
each carrying the measure ``extent`` spread evenly along its parameter
(atoms when the geodesic does not move), plus measure-zero leaves.
"""
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import FpcRequired, PresentationInvalid
from .pwfn import constant, from_knots
from .quiver import NEG, POS, Kind, ModPoint, straight_descending
from .rational import frac, fstr
from .stability import check_fpc, chord_set, sweep_families, validate_pair
from .tilting import (check_tame, context_from_target, is_straight_descending, make_context,
                      tilt_modpoint, untilt_modpoint)


@dataclass(frozen=True, order=True)
class Geodesic:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        # a == b only occurs as the degenerate limit of a family
        if not self.a <= self.b:
            raise PresentationInvalid(f"geodesic ({fstr(self.a)}, {fstr(self.b)}) "
                                      "needs a <= b")

    def crosses(self, other):
        a, b, c, d = self.a, self.b, other.a, other.b
        return a < c < b < d or c < a < d < b

    def __str__(self):
        return f"({fstr(self.a)}, {fstr(self.b)})"

    def to_json(self):
        return [fstr(self.a), fstr(self.b)]

    @classmethod
    def from_json(cls, data):
        return cls(frac(data[0]), frac(data[1]))


@dataclass(frozen=True, order=True)
class GeodesicFamily:
    """Geodesics moving linearly from ``start`` to ``end`` (open at both ends).

    The parameter runs over (0, extent) and carries its length as measure.
    With ``start == end`` the family is a single geodesic of mass ``extent``.
    """
    start: Geodesic
    end: Geodesic
    extent: Fraction

    @property
    def atom(self):
        return self.start == self.end

    def at(self, t):
        u = t / self.extent
        return (self.start.a + (self.end.a - self.start.a) * u,
                self.start.b + (self.end.b - self.start.b) * u)

    @property
    def velocity(self):
        return ((self.end.a - self.start.a) / self.extent,
                (self.end.b - self.start.b) / self.extent)

    def kind(self):
        if self.atom:
            return "atom"
        da, db = self.velocity
        if da == 0 or db == 0:
            return "fountain"
        if (da > 0) != (db > 0):
            return "rainbow"
        return "slide"

    def to_json(self):
        e = fstr(self.extent)
        return {"extent": e, "atom": self.atom,
                "lo": [["0", fstr(self.start.a)], [e, fstr(self.end.a)]],
                "hi": [["0", fstr(self.start.b)], [e, fstr(self.end.b)]]}


@dataclass(frozen=True)
class MeasuredLamination:
    families: tuple
    leaves: tuple = ()

    def canonical(self):
        return _canonical(self.families, self.leaves)

    def total_measure(self):
        return sum((f.extent for f in self.families), Fraction(0))

    def geodesic_count(self):
        return len(self.families), len(self.leaves)

    def to_json(self):
        return {"families": [f.to_json() for f in self.families],
                "leaves": [g.to_json() for g in self.leaves]}

    @classmethod
    def from_json(cls, data):
        fams, leaves = [], [Geodesic.from_json(g) for g in data.get("leaves", ())]
        for item in data.get("families", ()):
            lo = [(frac(t), frac(a)) for t, a in item["lo"]]
            hi = [(frac(t), frac(b)) for t, b in item["hi"]]
            if [t for t, _ in lo] != [t for t, _ in hi]:
                raise PresentationInvalid("lo and hi trajectories need the same knots")
            extent = frac(item["extent"])
            if item.get("atom") and len(lo) == 1:
                g = Geodesic(lo[0][1], hi[0][1])
                fams.append(GeodesicFamily(g, g, extent))
                continue
            for k, ((t0, a0), (t1, a1)) in enumerate(zip(lo, lo[1:])):
                b0, b1 = hi[k][1], hi[k + 1][1]
                if not t0 < t1:
                    raise PresentationInvalid("trajectory knots must increase")
                fams.append(GeodesicFamily(Geodesic(a0, b0), Geodesic(a1, b1), t1 - t0))
                if k:
                    leaves.append(Geodesic(a0, b0))
        return cls(tuple(fams), tuple(leaves))


# ---------------------------------------------------------------------------
# canonical form

def _oriented(f):
    if f.end < f.start:
        return GeodesicFamily(f.end, f.start, f.extent)
    return f


def _wrap(g):
    """+1 and -1 are one boundary point; write it as -1."""
    if g.b == POS and g.a > NEG:
        return Geodesic(NEG, g.a)
    return g


def _canonical(families, leaves):
    atoms = defaultdict(Fraction)
    moving = []
    leaves = [_wrap(g) for g in leaves]
    for f in families:
        if f.start.b == f.end.b == POS:
            f = GeodesicFamily(_wrap(f.start), _wrap(f.end), f.extent)
        if f.extent <= 0:
            raise PresentationInvalid("families need positive extent")
        if f.atom:
            atoms[f.start] += f.extent
        else:
            moving.append(_oriented(f))
    leaves = set(leaves) - set(atoms)
    # glue pieces that continue one another through a leaf
    by_start = defaultdict(list)
    for f in moving:
        by_start[(f.start, f.velocity)].append(f)
    used = set()
    out = []
    for f in sorted(moving):
        if id(f) in used:
            continue
        used.add(id(f))
        # walk back to the first piece of the chain
        cur = f
        while True:
            prev = [g for g in moving if id(g) not in used and g.end == cur.start
                    and g.velocity == cur.velocity and cur.start in leaves]
            if not prev:
                break
            used.add(id(prev[0]))
            leaves.discard(cur.start)
            cur = GeodesicFamily(prev[0].start, cur.end, prev[0].extent + cur.extent)
        while True:
            nxt = [g for g in by_start.get((cur.end, cur.velocity), ())
                   if id(g) not in used] if cur.end in leaves else []
            if not nxt:
                break
            used.add(id(nxt[0]))
            leaves.discard(cur.end)
            cur = GeodesicFamily(cur.start, nxt[0].end, cur.extent + nxt[0].extent)
        out.append(cur)
    out += [GeodesicFamily(g, g, m) for g, m in atoms.items()]
    return MeasuredLamination(tuple(sorted(out)), tuple(sorted(leaves)))


def laminations_equal(L1, L2):
    c1, c2 = L1.canonical(), L2.canonical()
    return c1.families == c2.families and c1.leaves == c2.leaves


# ---------------------------------------------------------------------------
# stability condition -> lamination

def chart_steps(pair):
    """Point maps carrying the pair's modified quiver to the straight chart.

    First the recorded tilts are undone, then the original quiver is
    straightened: tilt at the first source while -inf is a sink, otherwise
    untilt at the first sink.  Each step is ``(map, context)``.
    """
    steps = []
    for kind, s, q_before in reversed(pair.frame):
        if kind == "tilt":
            steps.append((untilt_modpoint, make_context(q_before, s)))
        else:
            steps.append((tilt_modpoint, context_from_target(q_before, s)))
    q = pair.frame[0][2] if pair.frame else pair.quiver
    while not is_straight_descending(q):
        if q.kind_at(NEG) is Kind.SINK:
            ctx = make_context(q, q.sources()[0])
            steps.append((tilt_modpoint, ctx))
            q = ctx.target()
        else:
            ctx = context_from_target(q, q.sinks()[0])
            steps.append((untilt_modpoint, ctx))
            q = ctx.quiver
    return steps


def _aff_at(aff, h):
    side, c, m = aff
    return ModPoint(c + m * h, side)


def _move_piece(step, piece):
    """Carry one open linear piece of chords through a step; may split it."""
    pmap, ctx = step
    s = ctx.s
    lo, hi, h0, h1 = piece
    cuts = {h0, h1}
    for side, c, m in (lo, hi):
        if m:
            h = (s - c) / m
            if h0 < h < h1:
                cuts.add(h)
    cuts = sorted(cuts)
    pieces, points = [], []
    for u in cuts[1:-1]:
        points.append(_move_chord(step, (u, _aff_at(lo, u), _aff_at(hi, u))))
    for u0, u1 in zip(cuts, cuts[1:]):
        mid = (u0 + u1) / 2
        new = []
        for aff in (lo, hi):
            side, c, m = aff
            if m == 0:
                p = pmap(ctx, ModPoint(c, side))
                new.append((p.side, p.ang, Fraction(0)))
            elif c + m * mid < s:
                new.append((0, s - 1 - c, -m))
            else:
                new.append(aff)
        if _aff_at(new[1], mid) < _aff_at(new[0], mid):
            new.reverse()
        pieces.append((new[0], new[1], u0, u1))
    return pieces, points


def _move_chord(step, chord):
    pmap, ctx = step
    h, lo, hi = chord
    a, b = pmap(ctx, lo), pmap(ctx, hi)
    return (h, min(a, b), max(a, b))


def to_lamination(pair):
    check_tame(pair)
    ok, witness = check_fpc(pair)
    if not ok:
        raise FpcRequired("laminations need the four point condition", witness)
    pieces, points, _ = chord_set(sweep_families(pair))
    pieces, points = list(pieces), list(points)
    for step in chart_steps(pair):
        new_pieces, new_points = [], [_move_chord(step, c) for c in points]
        for pc in pieces:
            ps, pts = _move_piece(step, pc)
            new_pieces += ps
            new_points += pts
        pieces, points = new_pieces, new_points
    fams = []
    for lo, hi, h0, h1 in pieces:
        g0 = Geodesic(_aff_at(lo, h0).ang, _aff_at(hi, h0).ang)
        g1 = Geodesic(_aff_at(lo, h1).ang, _aff_at(hi, h1).ang)
        fams.append(GeodesicFamily(g0, g1, h1 - h0))
    leaves = [Geodesic(lo.ang, hi.ang) for _, lo, hi in points]
    return _canonical(fams, leaves)


# ---------------------------------------------------------------------------
# measure queries

def _in(x, iv):
    """``iv`` is ``(lo, hi, lo_closed, hi_closed)``."""
    lo, hi, lc, hc = iv
    return (lo < x or (lc and x == lo)) and (x < hi or (hc and x == hi))


def _param_set(x0, x1, iv):
    """Sub-interval of [0, 1] where x0 + (x1 - x0) u lies in ``iv``.

    Returned as ``(lo, hi)`` of its closure, or None when empty.  Only the
    length matters to callers, so the ends' openness is dropped.
    """
    lo, hi, lc, hc = iv
    if x0 == x1:
        return (Fraction(0), Fraction(1)) if _in(x0, iv) else None
    d = x1 - x0
    ts = sorted(((lo - x0) / d, (hi - x0) / d))
    a, b = max(Fraction(0), ts[0]), min(Fraction(1), ts[1])
    return (a, b) if a < b else None


def _family_measure(f, conds):
    """Measure of the part of ``f`` meeting any of the ``(A, B)`` conditions."""
    spans = []
    for ia, ib in conds:
        pa = _param_set(f.start.a, f.end.a, ia)
        pb = _param_set(f.start.b, f.end.b, ib)
        if pa and pb:
            lo, hi = max(pa[0], pb[0]), min(pa[1], pb[1])
            if lo < hi:
                spans.append((lo, hi))
    total, reach = Fraction(0), None
    for lo, hi in sorted(spans):
        if reach is not None and lo < reach:
            lo = reach
        if lo < hi:
            total += hi - lo
            reach = hi if reach is None else max(reach, hi)
    return total * f.extent


def _measure(L, conds):
    out = Fraction(0)
    for f in L.families:
        if f.atom:
            if any(_in(f.start.a, ia) and _in(f.start.b, ib) for ia, ib in conds):
                out += f.extent
        else:
            out += _family_measure(f, conds)
    return out


def _arc(iv):
    """Pieces in [-1, 1] of an open boundary arc; the circle has length 2
    and -1, +1 name the same point."""
    if iv == "full":
        return [(NEG, POS, True, False)]
    lo, hi = frac(iv[0]), frac(iv[1])
    if not lo < hi:
        return []
    if hi - lo >= 2:
        return [(NEG, POS, True, False)]
    k = (lo + 1) // 2
    lo, hi = lo - 2 * k, hi - 2 * k
    if hi <= POS:
        return [(lo, hi, False, False)]
    return [(lo, POS, False, False), (NEG, hi - 2, True, False)]


def measure_query(L, A, B):
    """Measure of the geodesics with one end in ``A`` and the other in ``B``.

    ``A`` and ``B`` are open boundary arcs ``(lo, hi)`` (taken mod 2, so an
    arc may wrap past the point +-1), ``None`` for the empty set or
    ``"full"`` for the whole boundary.
    """
    if A is None or B is None:
        return Fraction(0)
    A, B = _arc(A), _arc(B)
    return _measure(L, [(x, y) for x in A for y in B] + [(y, x) for x in A for y in B])


# ---------------------------------------------------------------------------
# lamination -> stability condition

def _cut_points(L):
    pts = {NEG, POS}
    for f in L.families:
        pts.update((f.start.a, f.start.b, f.end.a, f.end.b))
    return sorted(pts)


def _every(lo, hi, lc=False, hc=False):
    return (lo, hi, lc, hc)


def useful_function_of(L):
    """F(x) = -(measure of geodesics separating x), with the jumps read off
    the geodesics that end at x."""
    big = Fraction(3)
    knots = []
    for x in _cut_points(L):
        left_of = _every(-big, x)
        right_of = _every(x, big)
        value = -_measure(L, [(left_of, right_of)])
        if x == NEG:
            right = -_measure(L, [(_every(-big, x, hc=True), right_of)])
            knots.append((x, Fraction(0), Fraction(0), right))
            continue
        if x == POS:
            left = -_measure(L, [(left_of, _every(x, big, lc=True))])
            knots.append((x, left, Fraction(0), Fraction(0)))
            continue
        left = -_measure(L, [(left_of, _every(x, big, lc=True))])
        right = -_measure(L, [(_every(-big, x, hc=True), right_of)])
        knots.append((x, left, value, right))
    return from_knots(knots)


def check_noncrossing(L):
    """A crossing pair of families, or None."""
    items = list(L.families) + [GeodesicFamily(g, g, Fraction(1)) for g in L.leaves]
    for f, g in combinations(items, 2):
        if _families_cross(f, g):
            return f, g
    return None


def _families_cross(f, g):
    return _margin(f, g) > 0 or _margin(g, f) > 0


def _margin(f, g):
    """max over the closed parameter box of min(a_g - a_f, b_f - a_g, b_g - b_f).

    A positive value means some geodesic of ``f`` crosses one of ``g`` with
    a_f < a_g < b_f < b_g.  The objective is concave and piecewise linear,
    so it peaks at a vertex of the arrangement of the lines where two of
    the three terms agree, clipped to the box [0, 1]^2.
    """
    fa = (f.start.a, f.end.a - f.start.a)
    fb = (f.start.b, f.end.b - f.start.b)
    ga = (g.start.a, g.end.a - g.start.a)
    gb = (g.start.b, g.end.b - g.start.b)
    # each term as c + x*t + y*u with t the parameter of f, u that of g
    terms = [(ga[0] - fa[0], -fa[1], ga[1]),
             (fb[0] - ga[0], fb[1], -ga[1]),
             (gb[0] - fb[0], -fb[1], gb[1])]
    cands = {(Fraction(t), Fraction(u)) for t in (0, 1) for u in (0, 1)}
    lines = [(p[0] - q[0], p[1] - q[1], p[2] - q[2]) for p, q in combinations(terms, 2)]
    edges = [(1, 0, 0), (1, 0, -1), (0, 1, 0), (0, 1, -1)]   # t=0, t=1, u=0, u=1
    for (c1, x1, y1), (x2, y2, c2) in ((ln, e) for ln in lines for e in edges):
        # ln: c1 + x1 t + y1 u = 0; edge: x2 t + y2 u + c2 = 0
        det = x1 * y2 - x2 * y1
        if det:
            t = (-c1 * y2 + c2 * y1) / det
            u = (-x1 * c2 + x2 * c1) / det
            if 0 <= t <= 1 and 0 <= u <= 1:
                cands.add((t, u))
    for (c1, x1, y1), (c2, x2, y2) in combinations(lines, 2):
        det = x1 * y2 - x2 * y1
        if det:
            t = (-c1 * y2 + c2 * y1) / det
            u = (-x1 * c2 + x2 * c1) / det
            if 0 <= t <= 1 and 0 <= u <= 1:
                cands.add((t, u))
    return max(min(c + x * t + y * u for c, x, y in terms) for t, u in cands)


def to_stability(L):
    """The pair (F, 0) over the straight descending quiver."""
    bad = check_noncrossing(L)
    if bad:
        raise PresentationInvalid(f"families {bad[0]} and {bad[1]} cross")
    F = useful_function_of(L)
    pair = validate_pair(F, constant(0), straight_descending())
    ok, witness = check_fpc(pair)
    if not ok:
        raise PresentationInvalid("the lamination gives a pair without the "
                                  "four point condition")
    return pair


# ---------------------------------------------------------------------------
# features

@dataclass(frozen=True)
class Feature:
    kind: str           # "discrete", "fountain" or "rainbow"
    measure: Fraction
    families: tuple

    def to_json(self):
        return {"kind": self.kind, "measure": fstr(self.measure),
                "families": [f.to_json() for f in self.families]}


def classify_features(L):
    """Discrete arcs, maximal fountains and maximal rainbows.

    An atom is a discrete arc unless a moving family accumulates on it.
    Moving pieces of the same kind are merged when they meet at a geodesic
    that nothing else touches.
    """
    L = L.canonical()
    moving = [f for f in L.families if not f.atom]
    atoms = [f for f in L.families if f.atom]
    touching = defaultdict(list)
    for i, f in enumerate(moving):
        touching[f.start].append(i)
        touching[f.end].append(i)
    atom_set = {f.start for f in atoms}
    out = []
    for f in atoms:
        if f.start not in touching:
            out.append(Feature("discrete", f.extent, (f,)))
    parent = list(range(len(moving)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def pinned(f):
        da, db = f.velocity
        return ("a", f.start.a) if da == 0 else ("b", f.start.b)

    for g, idx in touching.items():
        if len(idx) != 2 or g in atom_set:
            continue
        f1, f2 = moving[idx[0]], moving[idx[1]]
        k1, k2 = f1.kind(), f2.kind()
        if k1 != k2:
            continue
        if k1 == "fountain" and pinned(f1) != pinned(f2):
            continue
        parent[find(idx[0])] = find(idx[1])
    groups = defaultdict(list)
    for i, f in enumerate(moving):
        groups[find(i)].append(f)
    for fams in groups.values():
        kind = fams[0].kind()
        out.append(Feature(kind, sum(f.extent for f in fams), tuple(sorted(fams))))
    order = {"discrete": 0, "fountain": 1, "rainbow": 2, "slide": 3}
    out.sort(key=lambda ft: (order[ft.kind], ft.families))
    return out


# ---------------------------------------------------------------------------
# default measure

def default_measure(discrete, continuous=()):
    """Give an unmeasured presentation a measure.

    ``discrete`` lists isolated geodesics in their chosen order; the n-th
    receives mass 1/(1 + n^2).  ``continuous`` lists ``(start, end, length)``
    families, measured by parameter length.
    """
    fams = [GeodesicFamily(g, g, Fraction(1, 1 + n * n))
            for n, g in enumerate(discrete)]
    fams += [GeodesicFamily(a, b, frac(length)) for a, b, length in continuous]
    return _canonical(fams, ())


def forget_measure(L):
    """The underlying geodesic presentation: atoms in order and moving families."""
    c = L.canonical()
    return ([f.start for f in c.families if f.atom],
            [(f.start, f.end, f.extent) for f in c.families if not f.atom])
