"""End-to-end acceptance checks, one group per numbered criterion.

Each test name carries its criterion number; the terminal summary prints
one PASS/FAIL line per criterion.
"""
import random
import time
from fractions import Fraction as Fr

import pytest

from lamina import character as ch
from lamina import finite as fn
from lamina.corpus import random_fpc_pairs, two_islands_pair, two_islands_tilted, v_shape
from lamina.errors import ContextInvalid
from lamina.lamination import classify_features, laminations_equal, to_lamination, to_stability
from lamina.pwfn import local_variation, variation
from lamina.quiver import (Kind, ModInterval, ModPoint, RealInterval, encode_interval,
                           new_quiver, npi_compatible, straight_descending)
from lamina.stability import (chord_check, chord_set, pairs_equivalent,
                              semistable_compatibility_audit, sweep_families)
from lamina.tilting import (check_tame, envelope_H, make_context, tilt_cluster, tilt_module,
                            tilt_pair, tilt_point)


def _tame(pairs):
    out = []
    for p in pairs:
        try:
            check_tame(p)
        except ContextInvalid:
            continue
        out.append(p)
    return out


# the shared random corpus: tame pairs with a sink at -inf, plus named pairs
CORPUS = _tame(random_fpc_pairs(101, 40, neg_sink=True)) + [two_islands_pair(), v_shape()]
STRAIGHT = random_fpc_pairs(102, 40, q=straight_descending())


def _contexts(p):
    s1 = p.quiver.sources()[0]
    return [make_context(p.quiver, s) for s in (s1, (s1 - 1) / 2)]


# -- 1 --------------------------------------------------------------------------------

A4 = fn.FiniteQuiver.parse("LRR")


def test_criterion_01_partial_sums():
    assert fn.theta_partial_sums((-1, 2, -1, -2)) == (0, -1, 1, 0, -1)


def test_criterion_01_statuses_and_king_scan():
    t0 = time.perf_counter()
    F = (0, -1, 1, 0, -1)
    assert fn.finite_semistable(A4, F, (0, 3)) == "Stable"
    assert fn.finite_semistable(A4, F, (1, 4)) == "Stable"
    intervals = [(a, b) for a in range(4) for b in range(a + 1, 5)]
    assert len(intervals) == 10
    for theta in ((-1, 2, -1, -2), (-1, 2, -1, -1)):
        G = fn.theta_partial_sums(theta)
        for m in intervals:
            assert fn.finite_semistable(A4, G, m) == fn.king_semistable(A4, theta, m)
    assert time.perf_counter() - t0 < 1


# -- 2 --------------------------------------------------------------------------------

A9 = fn.FiniteQuiver.parse("LLLLLRRR")
A9_DIM = (3, 4, 1, 3, 2, 4, 3, 1, 3)


def test_criterion_02_generic_decomposition():
    t0 = time.perf_counter()
    dec = fn.generic_decomposition(A9, A9_DIM)
    assert dec == {(0, 6): 1, (0, 2): 2, (3, 7): 1, (8, 9): 2,
                   (1, 2): 1, (3, 4): 1, (5, 7): 1, (5, 9): 1}
    assert time.perf_counter() - t0 < 1


# -- 3 --------------------------------------------------------------------------------

def test_criterion_03_step_functions():
    R, B = fn.dim_to_redblue(A9, A9_DIM)
    assert (R[0], R[1]) == (0, -3)
    assert (B[6], B[7], B[8], B[9], B[10]) == (0, -1, -3, -1, -4)


# -- 4 --------------------------------------------------------------------------------

@pytest.mark.parametrize("m, image", [((0, 6), (5, 6)), ((3, 7), (2, 7)),
                                      ((5, 7), (0, 7)), ((5, 9), (0, 9))])
def test_criterion_04_apr_transports(m, image):
    assert fn.apr_tilt(A9, m, 5) == image


def test_criterion_04_islands():
    assert fn.apr_tilt(A9, (3, 4), 5) == (0, 1)
    assert fn.apr_tilt(A9, (8, 9), 5) == (8, 9)
    for a in range(5):
        for b in range(a + 1, 5):
            assert fn.apr_tilt(A9, (a, b), 5) == (4 - b, 4 - a)


# -- 5 --------------------------------------------------------------------------------

def test_criterion_05_finite_characters():
    t0 = time.perf_counter()
    rng = random.Random(5)
    for _ in range(100):
        x = [Fr(rng.randint(1, 50), rng.randint(1, 50)) for _ in range(10)]
        a = rng.randint(1, 9)
        b = rng.randint(a, 9)
        assert fn.cc_char(9, a, a, x) == 1
        assert fn.projective_identity_gap(9, a, b, x) == 0
        assert fn.mutation_check(x)
        vals = [Fr(rng.randint(-40, 40), rng.randint(1, 40)) for _ in range(8)]
        assert fn.plucker_check(vals[:4], vals[4:])
    assert time.perf_counter() - t0 < 5


# -- 6 --------------------------------------------------------------------------------

def _grid_points(q, den=24):
    pts = [ModPoint(Fr(k, den)) for k in range(-den + 1, den)]
    for a, kind in q.critical_points:
        if kind is Kind.SINK:
            pts += [ModPoint(a, -1), ModPoint(a, 1)]
    return sorted(p for p in pts if q.is_point(p))


def test_criterion_06_semistable_iff_compatible():
    t0 = time.perf_counter()
    pairs = random_fpc_pairs(106, 200)
    rng = random.Random(6)
    probes = {}
    while sum(len(v) for v in probes.values()) < 100:
        i = rng.randrange(len(pairs))
        p = pairs[i]
        a, b = sorted(rng.sample(_grid_points(p.quiver), 2))
        m = ModInterval(a, b)
        if chord_check(p, m) is None:
            probes.setdefault(i, []).append(m)
    checked = 0
    for i, p in enumerate(pairs):
        rep = semistable_compatibility_audit(p, probes.get(i, ()))
        assert not rep.incompatible
        assert not rep.missing
        for m, w in rep.witnesses.items():
            assert not npi_compatible(p.quiver, m, w.interval)
            assert chord_check(p, w.interval) is not None
            checked += 1
    assert checked == 100
    assert time.perf_counter() - t0 < 30


# -- 7 --------------------------------------------------------------------------------

def test_criterion_07_tilting_conservation():
    for p in CORPUS:
        for ctx in _contexts(p):
            s = ctx.s
            H = envelope_H(p.R, ctx)
            assert H.left(s) == p.R.left(s)
            hp = sorted({a for a in H.points() if a < s} | {Fr(-1), s})
            for x, y in zip(hp, hp[1:]):
                assert H.maxx(x) >= H.minn(y)
            t = tilt_pair(p, ctx)
            kp = sorted({a for a in p.R.points() if a < s} | {Fr(-1), s})
            grid = sorted(set(kp) | {(x + y) / 2 for x, y in zip(kp, kp[1:])})
            for i, a in enumerate(grid):
                for b in grid[i + 1:]:
                    tb = tilt_point(ctx, b) if b < s else Fr(-1)
                    assert variation(p.R, a, b) == variation(t.B, tb, tilt_point(ctx, a))
            for x in p.R.points():
                if -1 < x < s:
                    assert local_variation(p.R, x) == local_variation(t.B, tilt_point(ctx, x))


# -- 8 --------------------------------------------------------------------------------

def _both_in_k(ctx, m):
    return (m.lo == ModPoint(Fr(-1), 1) or (m.lo.side == 0 and m.lo.ang < ctx.s)) \
        and m.hi.side == 0 and m.hi.ang < ctx.s


def test_criterion_08_semistable_transport():
    p = two_islands_pair()
    ctx = make_context(p.quiver, 0)
    assert pairs_equivalent(tilt_pair(p, ctx), two_islands_tilted()) == (True, 0)
    law_checked = 0
    for p in CORPUS:
        for ctx in _contexts(p):
            t = tilt_pair(p, ctx)
            fams = sweep_families(p)
            assert chord_set(sweep_families(t)) == chord_set(tilt_cluster(ctx, fams, p))
            H = envelope_H(p.R, ctx)
            for f in fams:
                for h in f.sample_heights():
                    if not f.contains_height(h):
                        continue
                    m = f.at(h)
                    h2 = 2 * H(m.hi.ang) - h if _both_in_k(ctx, m) else h
                    r = chord_check(t, tilt_module(ctx, m))
                    assert r is not None and r[0] <= h2 <= r[1]
                    law_checked += _both_in_k(ctx, m)
    assert law_checked > 0


# -- 9 --------------------------------------------------------------------------------

def test_criterion_09_lamination_bijection():
    exact = 0
    for p in STRAIGHT:
        L = to_lamination(p)
        assert laminations_equal(L, to_lamination(to_stability(L)))
        # a jump of B right at -inf carries no semistables and is not recovered
        if p.R(-1) == p.B.right(-1):
            assert pairs_equivalent(p, to_stability(L))[0]
            exact += 1
    assert exact >= 20
    for p in CORPUS:
        L = to_lamination(p)
        assert laminations_equal(L, to_lamination(to_stability(L)))
    feats = classify_features(to_lamination(two_islands_pair()))
    kinds = sorted(f.kind for f in feats)
    assert kinds == ["discrete"] + ["fountain"] * 2 + ["rainbow"] * 5
    (x,) = [f for f in feats if f.kind == "discrete"]
    # the rectangle under the arc is one unit tall
    assert x.measure == 1 and x.families[0].atom


# -- 10 -------------------------------------------------------------------------------

def test_criterion_10_tilt_invariance():
    n = 0
    for p in CORPUS:
        L = to_lamination(p)
        for ctx in _contexts(p):
            assert laminations_equal(L, to_lamination(tilt_pair(p, ctx)))
            n += 1
    assert n >= 40


# -- 11 -------------------------------------------------------------------------------

def _xi(i):
    return Fr(2 * (i + 1), 7) - 1


def _printed(q, lc, a, b, hc):
    lo = Fr(-1) if a is None else _xi(a)
    hi = Fr(1) if b is None else _xi(b)
    return encode_interval(q, RealInterval(lo, bool(lc), hi, bool(hc)))


# endpoints as grid indices (None for an infinity) and closedness flags
TABLE = {"A": (1, 4, None, 0), "B": (1, 3, None, 0), "C": (1, 2, None, 0),
         "D": (1, 1, None, 0), "E": (1, 3, 5, 0), "F": (1, 2, 5, 0), "G": (1, 1, 5, 0),
         "H": (1, 0, 5, 0), "I": (1, 2, 4, 0), "J": (1, 1, 4, 0), "K": (1, 0, 4, 0),
         "L": (1, 1, 3, 0), "M": (1, 0, 3, 0), "N": (1, 0, 2, 0)}
# M' is printed as (-inf, x_3), which ends at the source; the admissible
# reading is (-inf, x_2]
TABLE2 = {"A": (1, 4, None, 0), "B": (0, None, None, 0), "C": (0, 0, None, 0),
          "D": (0, 1, None, 0), "E": (0, None, 5, 0), "F": (0, 0, 5, 0), "G": (0, 1, 5, 0),
          "H": (0, 2, 5, 0), "I": (0, 0, 4, 0), "J": (0, 1, 4, 0), "K": (0, 2, 4, 0),
          "L": (0, None, 1, 1), "M": (0, None, 2, 1), "N": (0, 0, 2, 1)}


def test_criterion_11_omega_square():
    q, q2 = fn.continuify(fn.A4_Q), fn.continuify(fn.A4_Q2)
    assert q2 == new_quiver([(-1, "sink"), (Fr(1, 7), "source"), (1, "sink")])
    ok, rows = fn.omega_square_check(fn.A4_Q, fn.A4_Q2, fn.A4_LABELS.values())
    assert ok and len(rows) == 14
    for label, (obj, obj2) in fn.A4_LABELS.items():
        assert fn.omega_map(fn.A4_Q, obj) == _printed(q, *TABLE[label]), label
        assert fn.omega_map(fn.A4_Q2, obj2) == _printed(q2, *TABLE2[label]), label
    ends = {e.ang for _, _, img, _ in rows for e in (img.lo, img.hi)}
    assert ends <= {Fr(k, 7) for k in (-5, -3, -1, 1, 3, 5)} | {Fr(-1), Fr(1)}


# -- 12 -------------------------------------------------------------------------------

def test_criterion_12_continuous_character():
    t0 = time.perf_counter()
    rng = random.Random(12)
    one = ch.Constant(1)
    for _ in range(100):
        a, b = sorted(rng.uniform(-50, 50) for _ in range(2))
        assert abs(ch.chi_straight(a, b, one) - (b - a)) < 1e-9
    for _ in range(100):
        x = ch.random_assignment(rng, 0.1, 5, rng.choice(["const", "ident", "pl"]))
        a, b, c, d = sorted(rng.uniform(0.1, 5) for _ in range(4))
        assert ch.plucker_gap(a, b, c, d, x) < 1e-8
        x = ch.random_assignment(rng, -5, 5, rng.choice(["const", "pl"]))
        bb, dd = sorted(rng.uniform(-5, -0.1) for _ in range(2))
        ff, hh = sorted(rng.uniform(0.1, 5) for _ in range(2))
        assert ch.ptolemy_gap(bb, dd, ff, hh, x) < 1e-8
    assert time.perf_counter() - t0 < 10
