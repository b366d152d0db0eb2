"""Finitely presented useful functions.

A useful function is a continuous piecewise-linear part ``f`` (linear in the
angle coordinate between breakpoints) plus finitely many half-step jumps.
At a point ``a`` the jump ``um`` is taken on arrival and ``up`` on leaving:

    left(a)  = f(a) + sum of all jumps strictly before a
    value(a) = left(a) + um(a)
    right(a) = value(a) + up(a)

At -1 only ``up`` is allowed and at +1 only ``um``.
"""
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

from .errors import EmptyInterval, IllegalBoundaryJump, NonMonotoneBreakpoints
from .rational import frac, fstr

NEG = Fraction(-1)
POS = Fraction(1)


@dataclass(frozen=True)
class UsefulFn:
    pl: tuple      # ((angle, value), ...) from -1 to +1
    jumps: tuple   # ((angle, um, up), ...) sorted by angle, no zero entries

    def __post_init__(self):
        xs = tuple(a for a, _ in self.pl)
        js = tuple(a for a, _, _ in self.jumps)
        object.__setattr__(self, "_xs", xs)
        object.__setattr__(self, "_js", js)
        object.__setattr__(self, "_jsum", (0,) + tuple(
            accumulate(um + up for _, um, up in self.jumps)))

    # evaluation -------------------------------------------------------
    def f(self, a):
        xs, pl = self._xs, self.pl
        i = bisect_left(xs, a)
        if i < len(xs) and xs[i] == a:
            return pl[i][1]
        (x0, v0), (x1, v1) = pl[i - 1], pl[i]
        return v0 + (v1 - v0) * (a - x0) / (x1 - x0)

    def jump_at(self, a):
        i = bisect_left(self._js, a)
        if i < len(self._js) and self._js[i] == a:
            _, um, up = self.jumps[i]
            return um, up
        return Fraction(0), Fraction(0)

    def limits(self, a):
        """``(left, value, right)`` at ``a``.

        At -1 the left entry repeats the value, at +1 the right entry does.
        """
        before = self._jsum[bisect_left(self._js, a)]
        left = self.f(a) + before
        um, up = self.jump_at(a)
        value = left + um
        right = value + up
        if a == NEG:
            left = value
        if a == POS:
            right = value
        return left, value, right

    def __call__(self, a):
        return self.limits(frac(a))[1]

    def left(self, a):
        return self.limits(a)[0]

    def right(self, a):
        return self.limits(a)[2]

    def minn(self, a):
        return min(self.limits(a))

    def maxx(self, a):
        return max(self.limits(a))

    def points(self):
        """Every angle where the presentation changes."""
        return sorted(set(self._xs) | set(self._js))

    def knots(self, extra=()):
        """``[(a, left, value, right), ...]`` over all presentation points."""
        pts = sorted(set(self._xs) | set(self._js) | {frac(x) for x in extra})
        return [(a,) + self.limits(a) for a in pts]

    def is_constant_on(self, lo, hi):
        """Constant on the open interval (lo, hi): no slope and no jumps."""
        inner = [a for a in self.points() if lo < a < hi]
        if any(self.jump_at(a) != (0, 0) for a in inner):
            return False
        values = {self.f(a) for a in [lo, hi] + inner}
        return len(values) == 1

    # presentation -----------------------------------------------------
    def canonical(self):
        return from_knots(self.knots())

    def to_json(self):
        return {"pl": [[fstr(a), fstr(v)] for a, v in self.pl],
                "jumps": [{"ang": fstr(a), "um": fstr(um), "up": fstr(up)}
                          for a, um, up in self.jumps]}

    @classmethod
    def from_json(cls, data):
        jumps = [(j["ang"], j.get("um", 0), j.get("up", 0))
                 for j in data.get("jumps", [])]
        return validate_useful({"pl": data["pl"], "jumps": jumps})

    def __str__(self):
        pl = ", ".join(f"({fstr(a)}, {fstr(v)})" for a, v in self.pl)
        js = ", ".join(f"{fstr(a)}: ({fstr(m)}, {fstr(p)})"
                       for a, m, p in self.jumps)
        return f"UsefulFn(pl=[{pl}], jumps={{{js}}})"


def validate_useful(raw):
    """Build a :class:`UsefulFn` from ``{"pl": [...], "jumps": [...]}``.

    ``jumps`` may be a list of ``(a, um, up)`` triples or a mapping
    ``a -> (um, up)``.
    """
    pl = [(frac(a), frac(v)) for a, v in raw["pl"]]
    if len(pl) < 2:
        raise NonMonotoneBreakpoints("need at least the breakpoints -1 and +1")
    for (a, _), (b, _) in zip(pl, pl[1:]):
        if not a < b:
            raise NonMonotoneBreakpoints(f"breakpoint {fstr(b)} after {fstr(a)}")
    if pl[0][0] != NEG or pl[-1][0] != POS:
        raise NonMonotoneBreakpoints("breakpoints must start at -1 and end at +1")
    jumps = raw.get("jumps", ())
    if isinstance(jumps, dict):
        jumps = [(a, um, up) for a, (um, up) in jumps.items()]
    merged = {}
    for a, um, up in jumps:
        a, um, up = frac(a), frac(um), frac(up)
        if not NEG <= a <= POS:
            raise NonMonotoneBreakpoints(f"jump at {fstr(a)} outside [-1, 1]")
        if a == NEG and um != 0:
            raise IllegalBoundaryJump("no arriving jump at -inf")
        if a == POS and up != 0:
            raise IllegalBoundaryJump("no leaving jump at +inf")
        if a in merged:
            raise NonMonotoneBreakpoints(f"two jump entries at {fstr(a)}")
        merged[a] = (um, up)
    clean = tuple((a, um, up) for a, (um, up) in sorted(merged.items())
                  if um != 0 or up != 0)
    return UsefulFn(tuple(pl), clean)


def from_knots(knots):
    """Inverse of :meth:`UsefulFn.knots` with redundant points removed.

    ``knots`` is a sorted list of ``(a, left, value, right)`` starting at -1
    and ending at +1; the function is linear between ``right`` at one knot
    and ``left`` at the next.
    """
    knots = [tuple(frac(x) for x in k) for k in knots]
    pl, jumps = [], []
    acc = Fraction(0)
    for a, left, value, right in knots:
        if a == NEG:
            left = value
        if a == POS:
            right = value
        um, up = value - left, right - value
        pl.append((a, left - acc))
        if um or up:
            jumps.append((a, um, up))
        acc += um + up
    # drop interior breakpoints where f is collinear and nothing jumps
    jump_at = {a for a, _, _ in jumps}
    keep = [pl[0]]
    for i in range(1, len(pl) - 1):
        (x0, v0), (x1, v1), (x2, v2) = keep[-1], pl[i], pl[i + 1]
        if x1 not in jump_at and (v1 - v0) * (x2 - x1) == (v2 - v1) * (x1 - x0):
            continue
        keep.append(pl[i])
    keep.append(pl[-1])
    return validate_useful({"pl": keep, "jumps": jumps})


def constant(c):
    c = frac(c)
    return UsefulFn(((NEG, c), (POS, c)), ())


def evaluate3(F, a):
    """``(left, value, right, min, max)``; a missing one-sided limit is None."""
    a = frac(a)
    left, value, right = F.limits(a)
    if a == NEG:
        left = None
    if a == POS:
        right = None
    present = [x for x in (left, value, right) if x is not None]
    return left, value, right, min(present), max(present)


def _parse_openness(openness):
    if isinstance(openness, str):
        if len(openness) != 2 or openness[0] not in "([" or openness[1] not in ")]":
            raise ValueError(f"bad openness {openness!r}")
        return openness[0] == "[", openness[1] == "]"
    return bool(openness[0]), bool(openness[1])


def variation(F, lo, hi, openness="()"):
    """Total variation of ``F`` over an interval from ``lo`` to ``hi``.

    ``openness`` is one of "()", "[]", "(]", "[)" or a pair of booleans
    saying whether each end is included.
    """
    lo, hi = frac(lo), frac(hi)
    if not lo < hi:
        raise EmptyInterval(f"({fstr(lo)}, {fstr(hi)}) is empty")
    lo_closed, hi_closed = _parse_openness(openness)
    xs = [lo] + [a for a, _ in F.pl if lo < a < hi] + [hi]
    total = sum(abs(F.f(b) - F.f(a)) for a, b in zip(xs, xs[1:]))
    for a, um, up in F.jumps:
        if lo < a < hi:
            total += abs(um) + abs(up)
        elif a == lo and lo_closed:
            total += abs(up)
        elif a == hi and hi_closed:
            total += abs(um)
    return total


def local_variation(F, a):
    um, up = F.jump_at(frac(a))
    return abs(um) + abs(up)


def shift(F, c):
    c = frac(c)
    return UsefulFn(tuple((a, v + c) for a, v in F.pl), F.jumps)
