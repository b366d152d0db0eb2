"""Continuous quivers of type A, the modified quiver and interval modules.

Positions are angle coordinates: a rational ``a`` in [-1, 1] stands for the
real number tan(a*pi/2), so -1 and +1 are the two infinities.
"""
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations

from .errors import (DuplicatePosition, EndpointIsSource, InAlreadyInSet,
                     MissingEndpoint, NonAlternating, NotAdmissible,
                     OutNotInSet)
from .rational import frac, fstr

NEG = Fraction(-1)
POS = Fraction(1)


class Kind(Enum):
    SINK = "sink"
    SOURCE = "source"


class Color(Enum):
    RED = "red"
    BLUE = "blue"
    SINK_POINT = "sink"
    SOURCE_POINT = "source"


@dataclass(frozen=True, order=True)
class ModPoint:
    """A point of the modified quiver.

    ``side`` is 0 for an ordinary point, -1 for the lower copy of a sink
    (``s-``, blue) and +1 for the upper copy (``s+``, red).  The point
    ``-inf+`` is ``ModPoint(-1, 1)`` and ``+inf-`` is ``ModPoint(1, -1)``;
    with this encoding the order of the modified quiver is plain
    lexicographic order on ``(ang, side)``.
    """
    ang: Fraction
    side: int = 0

    @property
    def variant(self):
        if self.side == 0:
            return "interior"
        if self.ang == NEG:
            return "neg_inf_plus"
        if self.ang == POS:
            return "pos_inf_minus"
        return "sink_minus" if self.side < 0 else "sink_plus"

    def __str__(self):
        if self.ang == NEG and self.side > 0:
            return "-inf+"
        if self.ang == POS and self.side < 0:
            return "+inf-"
        tail = {0: "", -1: "-", 1: "+"}[self.side]
        return fstr(self.ang) + tail


def interior(a):
    return ModPoint(frac(a), 0)


def sink_minus(s):
    return ModPoint(frac(s), -1)


def sink_plus(s):
    return ModPoint(frac(s), 1)


NEG_INF_PLUS = ModPoint(NEG, 1)
POS_INF_MINUS = ModPoint(POS, -1)


def point_to_json(p):
    return str(p)


def point_from_json(text):
    text = text.strip()
    if text == "-inf+":
        return NEG_INF_PLUS
    if text == "+inf-":
        return POS_INF_MINUS
    if text.endswith("+") or text.endswith("-"):
        side = 1 if text[-1] == "+" else -1
        return ModPoint(frac(text[:-1]), side)
    return ModPoint(frac(text), 0)


@dataclass(frozen=True)
class ContinuousQuiver:
    critical_points: tuple

    def kind_at(self, a):
        for pos, kind in self.critical_points:
            if pos == a:
                return kind
        return None

    @property
    def positions(self):
        return [pos for pos, _ in self.critical_points]

    def sinks(self):
        return [pos for pos, kind in self.critical_points if kind is Kind.SINK]

    def sources(self):
        return [pos for pos, kind in self.critical_points if kind is Kind.SOURCE]

    def color_of(self, a):
        a = frac(a)
        if not NEG <= a <= POS:
            raise ValueError(f"angle {a} outside [-1, 1]")
        prev = None
        for pos, kind in self.critical_points:
            if pos == a:
                return Color.SINK_POINT if kind is Kind.SINK else Color.SOURCE_POINT
            if pos > a:
                # prev is the critical point just below a
                return Color.RED if prev is Kind.SINK else Color.BLUE
            prev = kind
        raise AssertionError("unreachable: +1 is always critical")

    def is_point(self, p):
        """Whether ``p`` is an element of the modified quiver."""
        kind = self.kind_at(p.ang)
        if p.side == 0:
            return kind is None
        if kind is not Kind.SINK:
            return False
        if p.ang == NEG:
            return p.side > 0
        if p.ang == POS:
            return p.side < 0
        return True

    def point_color(self, p):
        """Red or blue colour of a modified-quiver point."""
        if p.side > 0:
            return Color.RED
        if p.side < 0:
            return Color.BLUE
        return self.color_of(p.ang)

    def to_json(self):
        return {"critical_points": [{"ang": fstr(a), "kind": k.value}
                                    for a, k in self.critical_points]}

    @classmethod
    def from_json(cls, data):
        return new_quiver([(item["ang"], item["kind"])
                           for item in data["critical_points"]])


def new_quiver(points):
    """Validate a list of ``(angle, kind)`` pairs and build the quiver."""
    parsed = []
    for a, kind in points:
        if isinstance(kind, str):
            kind = Kind(kind.lower())
        parsed.append((frac(a), kind))
    parsed.sort(key=lambda item: item[0])
    for (a, _), (b, _) in zip(parsed, parsed[1:]):
        if a == b:
            raise DuplicatePosition(f"two critical points at {fstr(a)}")
    for a, _ in parsed:
        if not NEG <= a <= POS:
            raise ValueError(f"critical point {fstr(a)} outside [-1, 1]")
    if not parsed or parsed[0][0] != NEG or parsed[-1][0] != POS:
        raise MissingEndpoint("both -1 and +1 need a kind")
    for (a, k1), (b, k2) in zip(parsed, parsed[1:]):
        if k1 is k2:
            raise NonAlternating(
                f"{fstr(a)} and {fstr(b)} are both {k1.value}s")
    return ContinuousQuiver(tuple(parsed))


def straight_descending():
    """Sink at -infinity, source at +infinity: every real point is red."""
    return new_quiver([(-1, Kind.SINK), (1, Kind.SOURCE)])


@dataclass(frozen=True)
class RealInterval:
    """An interval of the extended line in angle coordinates.

    An infinite end is recorded as angle -1 or +1 with ``closed`` False.
    """
    lo: Fraction
    lo_closed: bool
    hi: Fraction
    hi_closed: bool

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        lo = "-inf" if self.lo == NEG else fstr(self.lo)
        hi = "+inf" if self.hi == POS else fstr(self.hi)
        return f"{left}{lo}, {hi}{right}"

    def contains(self, a):
        lo_ok = a > self.lo or (self.lo_closed and a == self.lo)
        hi_ok = a < self.hi or (self.hi_closed and a == self.hi)
        return lo_ok and hi_ok


@dataclass(frozen=True, order=True)
class ModInterval:
    lo: ModPoint
    hi: ModPoint

    def __post_init__(self):
        if not self.lo < self.hi:
            raise NotAdmissible(f"empty modified interval [{self.lo}, {self.hi}]")

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"

    def to_json(self):
        return [str(self.lo), str(self.hi)]

    @classmethod
    def from_json(cls, data):
        return cls(point_from_json(data[0]), point_from_json(data[1]))


def encode_interval(q, interval):
    """Admissible real interval -> interval of the modified quiver."""
    lo, hi = interval.lo, interval.hi
    if lo > hi or (lo == hi and not (interval.lo_closed and interval.hi_closed)):
        raise NotAdmissible(f"{interval} is empty")
    if lo == NEG:
        if q.kind_at(NEG) is not Kind.SINK:
            raise EndpointIsSource("-inf is a source")
        if interval.lo_closed:
            raise NotAdmissible("-inf cannot be a member")
        start = NEG_INF_PLUS
    else:
        kind = q.kind_at(lo)
        if kind is Kind.SOURCE:
            raise EndpointIsSource(f"{fstr(lo)} is a source")
        if kind is Kind.SINK:
            start = ModPoint(lo, -1 if interval.lo_closed else 1)
        else:
            blue = q.color_of(lo) is Color.BLUE
            if interval.lo_closed != blue:
                raise NotAdmissible(
                    f"inf {fstr(lo)} must be {'in' if blue else 'outside'} the interval")
            start = ModPoint(lo, 0)
    if hi == POS:
        if q.kind_at(POS) is not Kind.SINK:
            raise EndpointIsSource("+inf is a source")
        if interval.hi_closed:
            raise NotAdmissible("+inf cannot be a member")
        end = POS_INF_MINUS
    else:
        kind = q.kind_at(hi)
        if kind is Kind.SOURCE:
            raise EndpointIsSource(f"{fstr(hi)} is a source")
        if kind is Kind.SINK:
            end = ModPoint(hi, 1 if interval.hi_closed else -1)
        else:
            red = q.color_of(hi) is Color.RED
            if interval.hi_closed != red:
                raise NotAdmissible(
                    f"sup {fstr(hi)} must be {'in' if red else 'outside'} the interval")
            end = ModPoint(hi, 0)
    return ModInterval(start, end)


def decode_interval(q, m):
    """Interval of the modified quiver -> admissible real interval."""
    for p in (m.lo, m.hi):
        if not q.is_point(p):
            raise NotAdmissible(f"{p} is not a point of the modified quiver")
    lo, hi = m.lo, m.hi
    if lo == NEG_INF_PLUS:
        lo_closed = False
    elif lo.side:
        lo_closed = lo.side < 0
    else:
        lo_closed = q.color_of(lo.ang) is Color.BLUE
    if hi == POS_INF_MINUS:
        hi_closed = False
    elif hi.side:
        hi_closed = hi.side > 0
    else:
        hi_closed = q.color_of(hi.ang) is Color.RED
    if hi == NEG_INF_PLUS or lo == POS_INF_MINUS:
        raise NotAdmissible(f"{m} uses an infinite point on the wrong side")
    return RealInterval(lo.ang, lo_closed, hi.ang, hi_closed)


def interval_codec(q, direction, payload):
    """``direction`` is "encode" (real -> modified) or "decode"."""
    if direction == "encode":
        return encode_interval(q, payload)
    if direction == "decode":
        return decode_interval(q, payload)
    raise ValueError(f"unknown direction {direction!r}")


def hom_ext_profile(q, I, J):
    """Which of the four endpoint patterns gives Hom(I,J) = Ext(J,I) = k.

    Returns 1..4 or None.  Comparisons happen in the modified quiver, so
    the two copies of a sink are told apart.
    """
    a, b, c, d = I.lo, I.hi, J.lo, J.hi
    red = lambda p: q.point_color(p) is Color.RED
    blue = lambda p: q.point_color(p) is Color.BLUE
    if a < c < b < d and red(b) and red(c):
        return 1
    if c < a < d < b and blue(a) and blue(d):
        return 2
    if c < a and b < d and blue(a) and red(b):
        return 3
    if a < c and d < b and red(c) and blue(d):
        return 4
    return None


def npi_compatible(q, I, J):
    return hom_ext_profile(q, I, J) is None and hom_ext_profile(q, J, I) is None


def check_mutation(q, T, out, in_):
    """Is ``(T - {out}) + {in_}`` pairwise compatible?"""
    T = set(T)
    if out not in T:
        raise OutNotInSet(f"{out} is not in the set")
    if in_ in T:
        raise InAlreadyInSet(f"{in_} is already in the set")
    new = (T - {out}) | {in_}
    return all(npi_compatible(q, x, y) for x, y in combinations(sorted(new), 2))


def modpoints(q, extra=()):
    """Ordered list of the distinguished modified-quiver points.

    These are the copies of sinks, the infinite points that exist, and any
    extra interior angles requested.
    """
    pts = set()
    for a, kind in q.critical_points:
        if kind is Kind.SINK:
            if a != POS:
                pts.add(ModPoint(a, 1))
            if a != NEG:
                pts.add(ModPoint(a, -1))
    for a in extra:
        a = frac(a)
        if q.kind_at(a) is None:
            pts.add(ModPoint(a, 0))
    return sorted(pts)
