"""Red-blue pairs, semistable chords and the exhaustive chord sweep."""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import (Cond1Violation, Cond2Violation, Cond3Violation,
                     Cond4Violation, Cond5Violation, Cond6Violation,
                     FpcRequired, QuiverMismatch)
from .pwfn import UsefulFn, shift
from .quiver import (NEG, POS, Color, ContinuousQuiver, Kind, ModInterval,
                     ModPoint, npi_compatible, point_from_json)
from .rational import frac, fstr


@dataclass(frozen=True)
class RedBluePair:
    quiver: ContinuousQuiver
    R: UsefulFn
    B: UsefulFn
    # tilt history, oldest first: ("tilt" | "untilt", angle, quiver before)
    frame: tuple = ()

    def to_json(self):
        data = {"quiver": self.quiver.to_json(), "R": self.R.to_json(),
                "B": self.B.to_json()}
        if self.frame:
            data["frame"] = [{"step": kind, "at": fstr(s), "quiver": q.to_json()}
                             for kind, s, q in self.frame]
        return data

    @classmethod
    def from_json(cls, data):
        q = ContinuousQuiver.from_json(data["quiver"])
        frame = tuple((step["step"], frac(step["at"]),
                       ContinuousQuiver.from_json(step["quiver"]))
                      for step in data.get("frame", ()))
        return validate_pair(UsefulFn.from_json(data["R"]),
                             UsefulFn.from_json(data["B"]), q, frame)


def _intervals(q):
    """Consecutive critical points as (lo, hi, colour)."""
    out = []
    for (a, ka), (b, _) in zip(q.critical_points, q.critical_points[1:]):
        out.append((a, b, Color.RED if ka is Kind.SINK else Color.BLUE))
    return out


def validate_pair(R, B, q, frame=()):
    """Check the six red-blue conditions and return the pair."""
    pts = sorted(set(R.points()) | set(B.points()) | set(q.positions))
    for a in pts:
        if NEG < a < POS:
            if R(a) != R.maxx(a):
                raise Cond1Violation(f"R({fstr(a)}) is not its local max", a)
            if B(a) != B.minn(a):
                raise Cond1Violation(f"B({fstr(a)}) is not its local min", a)
    for a in q.sources():
        if R.jump_at(a) != (0, 0) or B.jump_at(a) != (0, 0):
            raise Cond2Violation(f"jump at the source {fstr(a)}", a)
    for a in pts:
        if R(a) > B.maxx(a) or R.minn(a) > B(a):
            raise Cond3Violation(f"R above B at {fstr(a)}", a)
    for a, b in zip(pts, pts[1:]):
        # on the open gap both are linear; compare the one-sided limits
        if R.right(a) > B.right(a) or R.left(b) > B.left(b):
            raise Cond3Violation(f"R above B inside ({fstr(a)}, {fstr(b)})",
                                 (a + b) / 2)
    if R(NEG) != B(NEG) or R(POS) != B(POS):
        raise Cond4Violation("R and B differ at an infinity",
                             NEG if R(NEG) != B(NEG) else POS)
    for lo, hi, color in _intervals(q):
        if color is Color.BLUE and not R.is_constant_on(lo, hi):
            raise Cond5Violation(
                f"R not constant on the blue ({fstr(lo)}, {fstr(hi)})", (lo + hi) / 2)
        if color is Color.RED and not B.is_constant_on(lo, hi):
            raise Cond6Violation(
                f"B not constant on the red ({fstr(lo)}, {fstr(hi)})", (lo + hi) / 2)
    return RedBluePair(q, R, B, tuple(frame))


def normalize(p):
    """Representative with R(-inf) = 0 and canonical presentations."""
    c = -p.R(NEG)
    return RedBluePair(p.quiver, shift(p.R, c).canonical(),
                       shift(p.B, c).canonical(), p.frame)


def shift_pair(p, c):
    return RedBluePair(p.quiver, shift(p.R, c), shift(p.B, c), p.frame)


def pairs_equivalent(p1, p2):
    """``(True, c)`` when ``p2`` is ``p1`` moved up by ``c``, else ``(False, None)``."""
    if p1.quiver != p2.quiver:
        raise QuiverMismatch("pairs live on different quivers")
    n1, n2 = normalize(p1), normalize(p2)
    if (n1.R, n1.B) == (n2.R, n2.B):
        return True, p2.R(NEG) - p1.R(NEG)
    return False, None


# ---------------------------------------------------------------------------
# the modified graph, sliced at a height

@dataclass(frozen=True)
class _Item:
    point: ModPoint
    touch: tuple          # closed height range where the point meets the graph
    floor: Fraction = None   # red points need h >= floor to lie inside a chord
    ceil: Fraction = None    # blue points need h <= ceil
    endpoint_only: bool = False

    def free(self, h):
        if self.endpoint_only:
            return False
        if self.floor is not None and h < self.floor:
            return False
        if self.ceil is not None and h > self.ceil:
            return False
        return True

    def touches(self, h):
        return self.touch[0] <= h <= self.touch[1]


@dataclass(frozen=True)
class _Cell:
    lo: Fraction
    hi: Fraction
    red: bool
    g0: Fraction   # active function just right of lo
    g1: Fraction   # active function just left of hi

    def value(self, a):
        return self.g0 + (self.g1 - self.g0) * (a - self.lo) / (self.hi - self.lo)

    def position(self, h):
        return self.lo + (h - self.g0) * (self.hi - self.lo) / (self.g1 - self.g0)


class Model:
    """The modified graph of a pair cut into point items and open cells."""

    def __init__(self, pair):
        self.pair = pair
        q, R, B = pair.quiver, pair.R, pair.B
        self.breaks = sorted(set(q.positions) | set(R.points()) | set(B.points()))
        self.seq = []          # items and cells in modified-quiver order
        self.items = []
        self.cells = []
        self.item_at = {}      # ModPoint -> item
        self.cell_after = {}   # breakpoint -> cell to its right
        for i, a in enumerate(self.breaks):
            for item in self._items_at(q, R, B, a):
                self.items.append(item)
                self.item_at[item.point] = item
                self.seq.append(("pt", item))
            if i + 1 < len(self.breaks):
                b = self.breaks[i + 1]
                red = q.color_of((a + b) / 2) is Color.RED
                F = R if red else B
                cell = _Cell(a, b, red, F.right(a), F.left(b))
                self.cells.append(cell)
                self.cell_after[a] = cell
                self.seq.append(("cell", cell))
        heights = set()
        for a in self.breaks:
            heights.update(R.limits(a))
            heights.update(B.limits(a))
        self.critical = sorted(heights)

    @staticmethod
    def _items_at(q, R, B, a):
        kind = q.kind_at(a)
        rl = R.limits(a)
        bl = B.limits(a)
        if kind is Kind.SOURCE:
            return []
        if kind is Kind.SINK:
            if a == NEG:
                return [_Item(ModPoint(a, 1), (min(rl), max(rl)), endpoint_only=True)]
            if a == POS:
                return [_Item(ModPoint(a, -1), (min(bl), max(bl)), endpoint_only=True)]
            return [_Item(ModPoint(a, -1), (min(bl), max(bl)), ceil=min(bl)),
                    _Item(ModPoint(a, 1), (min(rl), max(rl)), floor=max(rl))]
        if q.color_of(a) is Color.RED:
            return [_Item(ModPoint(a, 0), (min(rl), max(rl)), floor=max(rl))]
        return [_Item(ModPoint(a, 0), (min(bl), max(bl)), ceil=min(bl))]

    # point lookups ------------------------------------------------------
    def cell_containing(self, a):
        for cell in self.cells:
            if cell.lo < a < cell.hi:
                return cell
        return None

    def touch_range(self, p):
        item = self.item_at.get(p)
        if item is not None:
            return item.touch
        cell = self.cell_containing(p.ang)
        if cell is None or p.side != 0:
            raise ValueError(f"{p} is not a point of the modified quiver")
        v = cell.value(p.ang)
        return v, v

    def limit_point(self, cell, a):
        """The modified-quiver point reached by cell points tending to ``a``.

        Returns ``(point, exists)``; the limit does not exist at a source.
        """
        kind = self.pair.quiver.kind_at(a)
        if a == cell.lo:
            if kind is Kind.SINK:
                return ModPoint(a, 1), True
            return ModPoint(a, 0), kind is None
        if a == cell.hi:
            if kind is Kind.SINK:
                return ModPoint(a, -1), True
            return ModPoint(a, 0), kind is None
        return ModPoint(a, 0), True

    # slicing --------------------------------------------------------------
    def slice(self, h):
        """Elements at height ``h`` as (kind, free, touch, ref) tuples.

        ``ref`` is an item, ``("x", cell)`` for a crossing or
        ``("flat", cell)`` for a cell lying on the line.
        """
        out = []
        for kind, obj in self.seq:
            if kind == "pt":
                out.append(("pt", obj.free(h), obj.touches(h), obj))
                continue
            c = obj
            # red points are free below the graph, blue points above it
            sign = 1 if c.red else -1
            d0, d1 = sign * (h - c.g0), sign * (h - c.g1)
            if c.g0 == c.g1:
                if h == c.g0:
                    out.append(("flat", True, True, ("flat", c)))
                else:
                    out.append(("seg", d0 > 0, False, None))
            elif d0 >= 0 and d1 >= 0:
                out.append(("seg", True, False, None))
            elif d0 <= 0 and d1 <= 0:
                out.append(("seg", False, False, None))
            elif d0 > 0:
                out += [("seg", True, False, None), ("x", True, True, ("x", c)),
                        ("seg", False, False, None)]
            else:
                out += [("seg", False, False, None), ("x", True, True, ("x", c)),
                        ("seg", True, False, None)]
        return out

    def runs(self, h):
        """Candidate endpoint lists, one per maximal run of free points."""
        runs = []
        cur = None
        prev = None
        for el in self.slice(h):
            kind, free, touch, ref = el
            if free:
                if cur is None:
                    cur = []
                    if prev is not None and prev[0] == "pt" and prev[2]:
                        cur.append(prev[3])
                if touch:
                    cur.append(ref)
            else:
                if cur is not None:
                    if kind == "pt" and touch:
                        cur.append(ref)
                    runs.append(cur)
                    cur = None
                elif kind == "pt" and touch and prev is not None \
                        and prev[0] == "pt" and prev[2]:
                    # two adjacent points (s- and s+) with nothing between
                    runs.append([prev[3], ref])
            prev = el
        if cur is not None:
            runs.append(cur)
        return runs

    def concrete(self, ref, h):
        if isinstance(ref, _Item):
            return ref.point
        return ModPoint(ref[1].position(h), 0)


# ---------------------------------------------------------------------------
# chords and families

@dataclass(frozen=True)
class Chord:
    interval: ModInterval
    height: Fraction


def chord_check(pair, m):
    """Closed range ``(h_lo, h_hi)`` of heights where ``m`` is semistable."""
    model = pair if isinstance(pair, Model) else Model(pair)
    q = model.pair.quiver
    if not (q.is_point(m.lo) and q.is_point(m.hi)):
        return None
    t_lo, t_hi = model.touch_range(m.lo), model.touch_range(m.hi)
    low = max(t_lo[0], t_hi[0])
    high = min(t_lo[1], t_hi[1])
    for kind, obj in model.seq:
        if kind == "pt":
            if m.lo < obj.point < m.hi:
                if obj.floor is not None:
                    low = max(low, obj.floor)
                if obj.ceil is not None:
                    high = min(high, obj.ceil)
            continue
        u, w = max(obj.lo, m.lo.ang), min(obj.hi, m.hi.ang)
        if u >= w:
            continue
        ends = (obj.value(u), obj.value(w))
        if obj.red:
            low = max(low, *ends)
        else:
            high = min(high, *ends)
    if low > high:
        return None
    return low, high


@dataclass(frozen=True)
class ChordFamily:
    """Chords sliding continuously with the height.

    ``heights`` are the knot heights; ``left`` and ``right`` give the chord
    endpoints at each knot.  Between knots an endpoint either stays put (equal
    neighbouring knots) or moves linearly in angle.  The ends are included
    according to ``openness``.
    """
    heights: tuple
    left: tuple
    right: tuple
    openness: tuple = (True, True)

    @property
    def h_lo(self):
        return self.heights[0]

    @property
    def h_hi(self):
        return self.heights[-1]

    @property
    def left_traj(self):
        return tuple(zip(self.heights, self.left))

    @property
    def right_traj(self):
        return tuple(zip(self.heights, self.right))

    @property
    def constant_endpoints(self):
        return len(set(self.left)) == 1 and len(set(self.right)) == 1

    @property
    def isolated(self):
        return self.h_lo == self.h_hi

    def contains_height(self, h):
        if self.h_lo < h < self.h_hi:
            return True
        return (h == self.h_lo and self.openness[0]) or (h == self.h_hi and self.openness[1])

    def _traj(self, pts, h):
        hs = self.heights
        for i, hi in enumerate(hs):
            if hi == h:
                return pts[i]
            if hi > h:
                p0, p1, h0 = pts[i - 1], pts[i], hs[i - 1]
                if p0 == p1:
                    return p0
                t = (h - h0) / (hi - h0)
                return ModPoint(p0.ang + (p1.ang - p0.ang) * t, 0)
        raise ValueError(f"height {h} outside the family")

    def at(self, h):
        h = frac(h)
        if not self.contains_height(h):
            raise ValueError(f"height {fstr(h)} outside the family")
        return ModInterval(self._traj(self.left, h), self._traj(self.right, h))

    def raw_at(self, h):
        """Chord at a height strictly inside the family, ends not checked."""
        return ModInterval(self._traj(self.left, h), self._traj(self.right, h))

    def raw(self, i, h):
        """Endpoints on the stretch between knots ``i`` and ``i + 1``.

        Moving endpoints are interpolated even at the knots themselves, so
        the result may sit on a critical angle.
        """
        h0, h1 = self.heights[i], self.heights[i + 1]
        out = []
        for pts in (self.left, self.right):
            p0, p1 = pts[i], pts[i + 1]
            if p0 == p1:
                out.append(p0)
            else:
                out.append(ModPoint(p0.ang + (p1.ang - p0.ang) * (h - h0) / (h1 - h0), 0))
        return tuple(out)

    def sample_heights(self):
        """Knot heights that belong to the family plus the midpoints."""
        out = [h for h in self.heights if self.contains_height(h)]
        out += [(a + b) / 2 for a, b in zip(self.heights, self.heights[1:])]
        return sorted(set(out))

    def to_json(self):
        return {"h_lo": fstr(self.h_lo), "h_hi": fstr(self.h_hi),
                "openness": ("[" if self.openness[0] else "(")
                + ("]" if self.openness[1] else ")"),
                "constant_endpoints": self.constant_endpoints,
                "left_traj": [[fstr(h), str(p)] for h, p in self.left_traj],
                "right_traj": [[fstr(h), str(p)] for h, p in self.right_traj]}

    @classmethod
    def from_json(cls, data):
        left = [(frac(h), point_from_json(p)) for h, p in data["left_traj"]]
        right = [(frac(h), point_from_json(p)) for h, p in data["right_traj"]]
        o = data.get("openness", "[]")
        return cls(tuple(h for h, _ in left), tuple(p for _, p in left),
                   tuple(p for _, p in right), (o[0] == "[", o[1] == "]"))


@dataclass(frozen=True)
class Plateau:
    """All chords at one height whose endpoints come from ``members``.

    A member is a point or an open angle range ``(a, b)`` lying flat on the
    line.  Only produced when the four point condition fails.
    """
    height: Fraction
    members: tuple

    def to_json(self):
        return {"height": fstr(self.height),
                "members": [str(m) if isinstance(m, ModPoint)
                            else [fstr(m[0]), fstr(m[1])] for m in self.members]}


def _ref_limit(model, ref, h):
    if isinstance(ref, _Item):
        return ref.point, True
    cell = ref[1]
    return model.limit_point(cell, cell.position(h))


def sweep_families(pair):
    """Every semistable chord, grouped into disjoint families."""
    model = pair if isinstance(pair, Model) else Model(pair)
    hs = model.critical
    crit = {}
    plateaus = []
    for h in hs:
        chords = []
        for run in model.runs(h):
            if any(isinstance(r, tuple) and r[0] == "flat" for r in run):
                members = tuple(r.point if isinstance(r, _Item)
                                else ((r[1].lo, r[1].hi) if r[0] == "flat"
                                      else ModPoint(r[1].position(h), 0))
                                for r in run)
                plateaus.append(Plateau(h, members))
                continue
            pts = [model.concrete(r, h) for r in run]
            chords += [(pts[i], pts[j]) for i, j in combinations(range(len(pts)), 2)]
        crit[h] = chords
    pieces = []
    for h0, h1 in zip(hs, hs[1:]):
        mid = (h0 + h1) / 2
        for run in model.runs(mid):
            for ra, rb in combinations(run, 2):
                lo0, e0 = _ref_limit(model, ra, h0)
                hi0, f0 = _ref_limit(model, rb, h0)
                lo1, e1 = _ref_limit(model, ra, h1)
                hi1, f1 = _ref_limit(model, rb, h1)
                start = (h0, lo0, hi0) if e0 and f0 and lo0 < hi0 else None
                end = (h1, lo1, hi1) if e1 and f1 and lo1 < hi1 else None
                pieces.append({"h": (h0, h1), "lo": (lo0, lo1), "hi": (hi0, hi1),
                               "start": start, "end": end})
    below, above = {}, {}
    for k, pc in enumerate(pieces):
        if pc["end"]:
            below.setdefault(pc["end"], []).append(k)
        if pc["start"]:
            above.setdefault(pc["start"], []).append(k)
    nxt, prv = {}, {}
    top_cap, bottom_cap = {}, {}
    loose = []
    for h in hs:
        for lo, hi in crit[h]:
            key = (h, lo, hi)
            b, a = below.get(key, []), above.get(key, [])
            if b and a:
                nxt[b[0]] = a[0]
                prv[a[0]] = b[0]
            elif b:
                top_cap[b[0]] = key
            elif a:
                bottom_cap[a[0]] = key
            else:
                loose.append(key)
    families = []
    for k in range(len(pieces)):
        if k in prv:
            continue
        chain = [k]
        while chain[-1] in nxt:
            chain.append(nxt[chain[-1]])
        heights, left, right = [], [], []
        for j in chain:
            pc = pieces[j]
            for t in (0, 1):
                if heights and heights[-1] == pc["h"][t]:
                    continue
                heights.append(pc["h"][t])
                left.append(pc["lo"][t])
                right.append(pc["hi"][t])
        openness = (chain[0] in bottom_cap, chain[-1] in top_cap)
        families.append(ChordFamily(tuple(heights), tuple(left), tuple(right), openness))
    for h, lo, hi in loose:
        families.append(ChordFamily((h,), (lo,), (hi,), (True, True)))
    families.sort(key=_family_key)
    return families + plateaus


def _family_key(f):
    return (f.h_lo, f.left[0], f.right[0], f.h_hi, f.left, f.right)


def check_fpc(pair):
    """``(True, None)`` or ``(False, witness_chord)``."""
    model = pair if isinstance(pair, Model) else Model(pair)
    for cell in model.cells:
        if cell.g0 == cell.g1:
            a = cell.lo + (cell.hi - cell.lo) / 3
            b = cell.lo + 2 * (cell.hi - cell.lo) / 3
            return False, Chord(ModInterval(ModPoint(a), ModPoint(b)), cell.g0)
    hs = model.critical
    probes = list(hs) + [(a + b) / 2 for a, b in zip(hs, hs[1:])]
    for h in probes:
        for run in model.runs(h):
            if len(run) >= 4:
                m = ModInterval(model.concrete(run[0], h), model.concrete(run[-1], h))
                return False, Chord(m, h)
    return True, None


def semistable_chords(families):
    """Representative chords: knots, ends and midpoints of every family."""
    out = []
    for f in families:
        if isinstance(f, Plateau):
            continue
        for h in f.sample_heights():
            out.append(Chord(f.at(h), h))
    return out


def find_witness(q, families, probe):
    """A semistable chord that is not compatible with ``probe``, if any.

    Compatibility only depends on how endpoints are ordered, so it suffices
    to test each family at its knots, at the heights where an endpoint
    passes a probe endpoint, and at midpoints between those heights.
    """
    targets = {probe.lo.ang, probe.hi.ang}
    for f in families:
        if isinstance(f, Plateau):
            continue
        cuts = set(f.heights)
        for pts in (f.left, f.right):
            for (h0, p0), (h1, p1) in zip(zip(f.heights, pts),
                                          zip(f.heights[1:], pts[1:])):
                if p0.ang == p1.ang:
                    continue
                for t in targets:
                    s = (t - p0.ang) / (p1.ang - p0.ang)
                    if 0 < s < 1:
                        cuts.add(h0 + s * (h1 - h0))
        cuts = sorted(cuts)
        cand = cuts + [(a + b) / 2 for a, b in zip(cuts, cuts[1:])]
        for h in cand:
            if f.contains_height(h):
                m = f.at(h)
                if not npi_compatible(q, m, probe):
                    return Chord(m, h)
    return None


@dataclass
class AuditReport:
    pairs_checked: int = 0
    incompatible: list = field(default_factory=list)
    semistable_probes: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    missing: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.incompatible and not self.missing


def semistable_compatibility_audit(pair, probes=()):
    model = Model(pair)
    ok, witness = check_fpc(model)
    if not ok:
        raise FpcRequired("the four point condition fails", witness)
    q = pair.quiver
    families = sweep_families(model)
    reps = semistable_chords(families)
    report = AuditReport()
    for x, y in combinations(reps, 2):
        report.pairs_checked += 1
        if not npi_compatible(q, x.interval, y.interval):
            report.incompatible.append((x, y))
    for m in probes:
        if chord_check(model, m) is not None:
            report.semistable_probes.append(m)
            continue
        w = find_witness(q, families, m)
        if w is None:
            report.missing.append(m)
        else:
            report.witnesses[m] = w
    return report


# ---------------------------------------------------------------------------
# canonical chord sets

def _affine(h0, h1, p0, p1):
    """Angle of a trajectory piece as ``c + m*h`` plus its side."""
    if p0 == p1:
        return (p0.side, p0.ang, Fraction(0))
    m = (p1.ang - p0.ang) / (h1 - h0)
    return (0, p0.ang - m * h0, m)


def chord_set(families):
    """Canonical description of the set of chords covered by ``families``.

    Families are cut into open linear pieces plus single chords; pieces that
    continue one another through an included chord are glued back.
    """
    pieces, points = [], set()
    plateaus = []
    for f in families:
        if isinstance(f, Plateau):
            plateaus.append(f)
            continue
        hs = f.heights
        for i, h in enumerate(hs):
            if f.contains_height(h):
                points.add((h, f.left[i], f.right[i]))
        for i in range(len(hs) - 1):
            lo = _affine(hs[i], hs[i + 1], f.left[i], f.left[i + 1])
            hi = _affine(hs[i], hs[i + 1], f.right[i], f.right[i + 1])
            pieces.append((lo, hi, hs[i], hs[i + 1]))
    return glue(pieces, points, plateaus)


def _eval_affine(aff, h):
    side, c, m = aff
    return ModPoint(c + m * h, side)


def glue(pieces, points, plateaus=()):
    groups = {}
    for lo, hi, h0, h1 in pieces:
        groups.setdefault((lo, hi), []).append((h0, h1))
    out = []
    points = set(points)
    for (lo, hi), spans in sorted(groups.items()):
        spans.sort()
        merged = [list(spans[0])]
        for h0, h1 in spans[1:]:
            last = merged[-1]
            joint = (last[1], _eval_affine(lo, last[1]), _eval_affine(hi, last[1]))
            if h0 == last[1] and joint in points:
                points.discard(joint)
                last[1] = h1
            else:
                merged.append([h0, h1])
        out += [(lo, hi, h0, h1) for h0, h1 in merged]
    return (tuple(sorted(out)), tuple(sorted(points)),
            tuple(sorted((p.height, p.members) for p in plateaus)))


def shift_families(families, c):
    c = frac(c)
    out = []
    for f in families:
        if isinstance(f, Plateau):
            out.append(Plateau(f.height + c, f.members))
        else:
            out.append(ChordFamily(tuple(h + c for h in f.heights), f.left,
                                   f.right, f.openness))
    return out


def families_from_chord_set(canon):
    """Turn a canonical chord set back into families.

    Each linear piece becomes a family, closed at an end when the end chord
    is one of the single chords; leftover single chords stand alone.
    """
    pieces, points, plateaus = canon
    points = set(points)
    out = []
    for lo, hi, h0, h1 in pieces:
        ends = []
        for h in (h0, h1):
            chord = (h, _eval_affine(lo, h), _eval_affine(hi, h))
            ends.append(chord in points)
            points.discard(chord)
        out.append(ChordFamily(
            (h0, h1), (_eval_affine(lo, h0), _eval_affine(lo, h1)),
            (_eval_affine(hi, h0), _eval_affine(hi, h1)), tuple(ends)))
    out += [ChordFamily((h,), (lo,), (hi,)) for h, lo, hi in sorted(points)]
    out += [Plateau(h, members) for h, members in plateaus]
    return out
