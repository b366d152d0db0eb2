"""Continuous cluster characters, evaluated numerically.

Every character here is built from integrals of ``1 / x_t**2`` for a
positive variable assignment ``t -> x_t``.  Values are floats; this is the
one module of the package that is not exact.
"""
import json
import math
from bisect import bisect_right
from dataclasses import dataclass

from scipy.integrate import quad

from .errors import Divergent, NonPositiveVariable

TOL = 1e-9


@dataclass(frozen=True)
class Constant:
    c: float

    def __call__(self, t):
        return float(self.c)

    def kinks(self):
        return ()

    def min_on(self, lo, hi):
        return float(self.c)


@dataclass(frozen=True)
class Identity:
    def __call__(self, t):
        return float(t)

    def kinks(self):
        return ()

    def min_on(self, lo, hi):
        return float(lo)


@dataclass(frozen=True)
class SampledPL:
    """Linear interpolation through ``breakpoints`` (pairs ``(t, x_t)``),
    constant outside them."""
    breakpoints: tuple

    def __post_init__(self):
        pts = tuple((float(t), float(v)) for t, v in self.breakpoints)
        if not pts:
            raise ValueError("need at least one breakpoint")
        if any(t1 >= t2 for (t1, _), (t2, _) in zip(pts, pts[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", pts)

    def __call__(self, t):
        ts = [p[0] for p in self.breakpoints]
        i = bisect_right(ts, t)
        if i == 0:
            return self.breakpoints[0][1]
        if i == len(ts):
            return self.breakpoints[-1][1]
        (t0, v0), (t1, v1) = self.breakpoints[i - 1], self.breakpoints[i]
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0)

    def kinks(self):
        return tuple(t for t, _ in self.breakpoints)

    def min_on(self, lo, hi):
        inside = [v for t, v in self.breakpoints if lo < t < hi]
        return min([self(lo), self(hi)] + inside)


def parse_assignment(text):
    """``const:<c>``, ``ident`` or ``pl:<json file of [t, x] pairs>``."""
    if text == "ident":
        return Identity()
    kind, _, arg = text.partition(":")
    if kind == "const":
        return Constant(float(arg))
    if kind == "pl":
        with open(arg) as fh:
            return SampledPL(tuple(map(tuple, json.load(fh))))
    raise ValueError(f"unknown variable assignment {text!r}")


def _check_positive(x, lo, hi):
    if x.min_on(lo, hi) <= 0:
        raise NonPositiveVariable(f"x_t is not positive on [{lo}, {hi}]")


def inverse_square_integral(x, lo, hi, tol=TOL):
    """``(value, error_bound)`` of the integral of 1/x_t^2 over [lo, hi]."""
    if lo == hi:
        return 0.0, 0.0
    _check_positive(x, lo, hi)
    pts = [t for t in x.kinks() if lo < t < hi] or None
    val, err = quad(lambda t: x(t) ** -2, lo, hi, points=pts,
                    epsabs=tol / 10, epsrel=tol / 10, limit=500)
    return val, err


def chi_straight(a, b, x, tol=TOL):
    """Character of M_ab on a stretch without critical points."""
    if a > b:
        raise ValueError("need a <= b")
    _check_positive(x, a, b)
    return x(a) * x(b) * inverse_square_integral(x, a, b, tol)[0]


def _tail(x, b, tol, max_pieces=200):
    """Integral of 1/x_t^2 over (-inf, b] summed over pieces of doubling
    length; diverges unless the pieces shrink geometrically."""
    total, prev, growing = 0.0, None, 0
    for k in range(max_pieces):
        lo, hi = b - 2.0 ** (k + 1) + 1, b - 2.0 ** k + 1
        piece = inverse_square_integral(x, lo, hi, tol)[0]
        total += piece
        if prev is not None and prev > 0:
            r = piece / prev
            growing = growing + 1 if r >= 0.9 else 0
            if growing >= 4:
                break
            if r < 0.9 and piece * r / (1 - r) < tol:
                return total
        elif piece == 0:
            return total
        prev = piece
    raise Divergent(f"the integral of 1/x_t^2 up to {b} does not converge")


def chi_projective_cont(b, x, cutoff=None, tol=TOL):
    """Character of the projective at b.

    With ``cutoff`` the integral starts there instead of at -inf.
    """
    if cutoff is not None:
        if cutoff > b:
            raise ValueError("cutoff must lie below b")
        return x(b) * inverse_square_integral(x, cutoff, b, tol)[0]
    return x(b) * _tail(x, b, tol)


def chi_across_source(d, f, x, tol=TOL):
    """Character of M_df when a source sits at 0, d < 0 < f.

    The double integral factors into two single ones.
    """
    if not d < 0 < f:
        raise ValueError("need d < 0 < f")
    _check_positive(x, d, f)
    left = inverse_square_integral(x, d, 0, tol)[0]
    right = inverse_square_integral(x, 0, f, tol)[0]
    return x(d) * x(0) * x(f) * left * right + x(d) * x(f) / x(0)


def plucker_gap(a, b, c, d, x, tol=TOL):
    """chi(M_ac) chi(M_bd) - chi(M_ab) chi(M_cd) - chi(M_bc) chi(M_ad),
    relative to the size of the left side."""
    chi = lambda s, t: chi_straight(s, t, x, tol)
    lhs = chi(a, c) * chi(b, d)
    rhs = chi(a, b) * chi(c, d) + chi(b, c) * chi(a, d)
    return abs(lhs - rhs) / max(abs(lhs), 1.0)


def ptolemy_gap(b, d, f, h, x, tol=TOL):
    """Exchange of M_df with M_bh across the source 0, b < d < 0 < f < h,
    as a relative error."""
    if not b < d < 0 < f < h:
        raise ValueError("need b < d < 0 < f < h")
    cross = lambda s, t: chi_across_source(s, t, x, tol)
    lhs = cross(d, f) * cross(b, h)
    rhs = (chi_straight(f, h, x, tol) * chi_straight(b, d, x, tol)
           + cross(d, h) * cross(b, f))
    return abs(lhs - rhs) / max(abs(lhs), 1.0)


def random_assignment(rng, lo, hi, kind=None):
    """A random positive assignment on [lo, hi] for identity checks."""
    kind = kind or rng.choice(["const", "ident", "pl"])
    if kind == "const":
        return Constant(rng.uniform(0.2, 5))
    if kind == "ident":
        return Identity()
    k = rng.randint(1, 6)
    ts = sorted(rng.uniform(lo, hi) for _ in range(k))
    ts = [t for i, t in enumerate(ts) if i == 0 or t > ts[i - 1]]
    return SampledPL(tuple((t, rng.uniform(0.2, 5)) for t in ts))


def close(u, v, tol=1e-8):
    return math.isclose(u, v, rel_tol=tol, abs_tol=tol)
