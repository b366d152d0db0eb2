import random
from fractions import Fraction as Fr

import pytest

from lamina.corpus import flat_pair, random_fpc_pairs, two_islands_pair, two_islands_tilted, v_shape
from lamina.errors import ContextInvalid, FpcRequired, OutOfDomain
from lamina.pwfn import local_variation, validate_useful, variation
from lamina.quiver import (Kind, ModInterval, ModPoint, new_quiver, npi_compatible,
                           straight_descending)
from lamina.stability import check_fpc, chord_set, pairs_equivalent, sweep_families
from lamina.tilting import (Island, check_tame, context_from_target, detect_islands,
                            envelope_H, flip_R, make_context, straighten, tilt_cluster,
                            tilt_module, tilt_pair, tilt_point, untilt_module, untilt_pair)


def _tame_pairs(seed, count):
    out = []
    for p in random_fpc_pairs(seed, count, neg_sink=True):
        try:
            check_tame(p)
        except ContextInvalid:
            continue
        out.append(p)
    return out


def _contexts(p, rng):
    s1 = p.quiver.sources()[0]
    for s in (s1, (s1 - 1) / 2, Fr(rng.randint(1, 99), 100) * (s1 + 1) - 1):
        yield make_context(p.quiver, s)


PAIRS = _tame_pairs(3, 50)


def test_tilt_point_examples():
    ctx = make_context(new_quiver([(-1, "sink"), (0, "source"), (1, "sink")]), 0)
    assert tilt_point(ctx, -1) == 0
    assert tilt_point(ctx, Fr(-1, 2)) == Fr(-1, 2)
    assert tilt_point(ctx, Fr(1, 2)) == Fr(1, 2)
    with pytest.raises(OutOfDomain):
        tilt_point(ctx, 2)


def test_tilt_point_reverses_order_and_inverts():
    rng = random.Random(1)
    ctx = make_context(straight_descending(), Fr(1, 3))
    back = context_from_target(ctx.target(), Fr(1, 3))
    for _ in range(500):
        a, b = sorted(Fr(rng.randint(-999, 332), 1000) for _ in range(2))
        if a < b:
            assert tilt_point(ctx, a) > tilt_point(ctx, b)
        assert tilt_point(back, tilt_point(ctx, a)) == a


def test_context_rules():
    q = new_quiver([(-1, "source"), (1, "sink")])
    with pytest.raises(ContextInvalid):
        make_context(q, 0)
    q = new_quiver([(-1, "sink"), (0, "source"), (1, "sink")])
    with pytest.raises(ContextInvalid):
        make_context(q, Fr(1, 2))
    assert make_context(q, 0).target() == new_quiver([(-1, "source"), (1, "sink")])
    assert make_context(q, Fr(-1, 2)).target() == \
        new_quiver([(-1, "source"), (Fr(-1, 2), "sink"), (0, "source"), (1, "sink")])


def test_monotone_has_no_islands():
    R = validate_useful({"pl": [[-1, 2], [0, 0], [1, -1]]})
    ctx = make_context(straight_descending(), 1)
    assert detect_islands(R, ctx) == []
    H = envelope_H(R, ctx)
    assert all(H(a) == R(a) for a in [Fr(k, 8) for k in range(-8, 8)])
    assert flip_R(R, ctx).canonical() == R.canonical()


def _island_oracle(R, s, z):
    """z lies inside an island iff R beats R(z) somewhere in (z, s)."""
    sup = max([R.right(z), R.left(s)] + [R.maxx(a) for a in R.points() if z < a < s])
    return R(z) < sup


def test_islands_match_membership_oracle():
    for p in PAIRS + [two_islands_pair()]:
        for ctx in _contexts(p, random.Random(2)):
            isl = detect_islands(p.R, ctx)
            for a, b in zip(isl, isl[1:]):
                assert a.y <= b.x
            for k in range(1, 240):
                z = Fr(-1) + (ctx.s + 1) * Fr(k, 240)
                inside = any(i.x < z < i.y for i in isl)
                edge = any(z in (i.x, i.y) for i in isl)
                if not edge:
                    assert inside == _island_oracle(p.R, ctx.s, z)


def test_two_islands_detected():
    p = two_islands_pair()
    ctx = make_context(p.quiver, p.quiver.sources()[0])
    assert detect_islands(p.R, ctx) == [Island(Fr(-1), Fr(-4, 5)), Island(Fr(-7, 10), Fr(-1, 5))]


def test_envelope_properties():
    for p in PAIRS:
        for ctx in _contexts(p, random.Random(3)):
            H = envelope_H(p.R, ctx)
            s = ctx.s
            assert H.left(s) == p.R.left(s)
            pts = sorted({a for a in H.points() if a < s} | {Fr(-1), s})
            for x, y in zip(pts, pts[1:]):
                assert H.maxx(x) >= H.minn(y)
            for x in pts:
                if x > -1:
                    assert H(x) == H.left(x)
                assert H(x) >= H.right(x) >= p.R.left(s)


def test_flip_lifts_islands():
    p = two_islands_pair()
    ctx = make_context(p.quiver, p.quiver.sources()[0])
    H, Rt = envelope_H(p.R, ctx), flip_R(p.R, ctx)
    for z in (Fr(-9, 10), Fr(-1, 2), Fr(-3, 10)):
        assert Rt(z) - H.right(z) == H(z) - p.R(z) > 0


def test_variation_conserved():
    rng = random.Random(4)
    for p in PAIRS[:30]:
        for ctx in _contexts(p, rng):
            t = tilt_pair(p, ctx)
            s = ctx.s
            kp = sorted({a for a in p.R.points() if a < s} | {Fr(-1), s})
            grid = sorted(set(kp) | {(x + y) / 2 for x, y in zip(kp, kp[1:])})
            for i, a in enumerate(grid):
                for b in grid[i + 1:]:
                    tb = tilt_point(ctx, b) if b < s else Fr(-1)
                    assert variation(p.R, a, b) == variation(t.B, tb, tilt_point(ctx, a))
            for x in p.R.points():
                if -1 < x < s:
                    assert local_variation(p.R, x) == local_variation(t.B, tilt_point(ctx, x))


def test_two_islands_tilt_matches_encoding():
    p = two_islands_pair()
    t = tilt_pair(p, make_context(p.quiver, p.quiver.sources()[0]))
    assert pairs_equivalent(t, two_islands_tilted()) == (True, 0)


def test_v_shape_tilt():
    t = tilt_pair(v_shape(), make_context(straight_descending(), 1))
    assert t.quiver == new_quiver([(-1, "source"), (1, "sink")])
    assert all(t.R(Fr(k, 8)) == 0 for k in range(-8, 9))
    assert [t.B(a) for a in (Fr(-1), Fr(-1, 2), Fr(0), Fr(1, 2), Fr(1))] == \
        [0, Fr(1, 2), 1, Fr(1, 2), 0]


def test_tilt_needs_fpc():
    with pytest.raises(FpcRequired):
        tilt_pair(flat_pair(), make_context(straight_descending(), 0))


def test_untilt_round_trip_and_transport():
    rng = random.Random(5)
    for p in PAIRS:
        for ctx in _contexts(p, rng):
            t = tilt_pair(p, ctx)
            u = untilt_pair(t, ctx.s)
            if p.R(-1) == p.B.right(-1):
                assert (u.R, u.B) == (p.R.canonical(), p.B.canonical())
            else:
                # a common jump of R and B at -inf is invisible to the tilt
                assert u.R(-1) == u.B.right(-1)
                for k in range(1, 200):
                    a = Fr(k, 100) - 1
                    assert u.R.limits(a) == p.R.limits(a)
                    assert u.B.limits(a) == p.B.limits(a)
                assert chord_set(sweep_families(u)) == chord_set(sweep_families(p))
            assert chord_set(sweep_families(t)) == \
                chord_set(tilt_cluster(ctx, sweep_families(p), p))


def test_tilt_module_cases():
    q = new_quiver([(-1, "sink"), (Fr(1, 2), "source"), (1, "sink")])
    ctx = make_context(q, Fr(1, 2))
    m = ModInterval(ModPoint(Fr(-1, 2)), ModPoint(Fr(1, 4)))
    assert tilt_module(ctx, m) == ModInterval(ModPoint(Fr(-3, 4)), ModPoint(Fr(0)))
    z = ModInterval(ModPoint(Fr(3, 4)), ModPoint(Fr(1), -1))
    assert tilt_module(ctx, z) == z


def _points(q, den=12):
    pts = [ModPoint(Fr(k, den)) for k in range(-den + 1, den)]
    for a, kind in q.critical_points:
        if kind is Kind.SINK:
            pts += [ModPoint(a, -1), ModPoint(a, 1)]
    return sorted(p for p in pts if q.is_point(p))


@pytest.mark.parametrize("s", [Fr(-1, 3), Fr(1, 4)])
def test_tilt_module_preserves_compatibility(s):
    q = new_quiver([(-1, "sink"), (Fr(1, 4), "source"), (Fr(2, 3), "sink"), (1, "source")])
    ctx = make_context(q, s)
    q2 = ctx.target()
    pts = _points(q)
    rng = random.Random(6)
    ivs = []
    while len(ivs) < 400:
        a, b = sorted(rng.sample(pts, 2))
        ivs.append(ModInterval(a, b))
    for _ in range(10_000):
        I, J = rng.choice(ivs), rng.choice(ivs)
        tI, tJ = tilt_module(ctx, I), tilt_module(ctx, J)
        assert npi_compatible(q, I, J) == npi_compatible(q2, tI, tJ)
        assert untilt_module(ctx, tI) == I


def test_straighten_keeps_fpc():
    for p in PAIRS[:15]:
        s = straighten(p)
        assert s.quiver == straight_descending()
        assert {kind for kind, _, _ in s.frame} <= {"tilt", "untilt"}
        assert check_fpc(s)[0]
