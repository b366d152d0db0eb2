"""Continuous tilting at a point s of the first red stretch."""
from dataclasses import dataclass
from fractions import Fraction

from .errors import ContextInvalid, FpcRequired, OutOfDomain
from .pwfn import from_knots
from .quiver import NEG, POS, Kind, ModInterval, ModPoint, new_quiver
from .rational import frac, fstr
from .stability import (ChordFamily, Plateau, check_fpc, chord_set,
                        families_from_chord_set, validate_pair)


@dataclass(frozen=True)
class TiltContext:
    """Tilt of ``quiver`` at ``s``: K = [-inf, s) is reversed onto (-inf, s]."""
    s: Fraction
    quiver: object

    @property
    def first_source(self):
        return self.quiver.sources()[0]

    @property
    def s_is_source(self):
        return self.s == self.first_source

    def in_K(self, a):
        return NEG <= a < self.s

    def target(self):
        """The quiver after the tilt."""
        s, q = self.s, self.quiver
        if s == POS:
            return new_quiver([(NEG, Kind.SOURCE), (POS, Kind.SINK)])
        rest = [(a, k) for a, k in q.critical_points if a > s]
        head = [(NEG, Kind.SOURCE)]
        if not self.s_is_source:
            head.append((s, Kind.SINK))
        return new_quiver(head + rest)


def make_context(q, s):
    s = frac(s)
    if q.kind_at(NEG) is not Kind.SINK:
        raise ContextInvalid("-inf must be a sink")
    if not NEG < s <= q.sources()[0]:
        raise ContextInvalid(
            f"s = {fstr(s)} must lie in (-1, {fstr(q.sources()[0])}]")
    return TiltContext(s, q)


def context_from_target(q_after, s):
    """The context whose tilt produces ``q_after`` at ``s``."""
    s = frac(s)
    if q_after.kind_at(NEG) is not Kind.SOURCE:
        raise ContextInvalid("-inf must be a source after a tilt")
    first_sink = q_after.sinks()[0]
    if not NEG < s <= first_sink:
        raise ContextInvalid(f"s = {fstr(s)} must lie in (-1, {fstr(first_sink)}]")
    rest = [(a, k) for a, k in q_after.critical_points if a > s]
    if s == POS:
        q = new_quiver([(NEG, Kind.SINK), (POS, Kind.SOURCE)])
    elif s == first_sink:
        q = new_quiver([(NEG, Kind.SINK)] + rest)
    else:
        q = new_quiver([(NEG, Kind.SINK), (s, Kind.SOURCE)] + rest)
    return TiltContext(s, q)


# ---------------------------------------------------------------------------
# points and modules

def tilt_point(ctx, a):
    """The order-reversing affine map on K, identity elsewhere."""
    a = frac(a)
    if not NEG <= a <= POS:
        raise OutOfDomain(f"{fstr(a)} is outside [-1, 1]")
    return ctx.s - a - 1 if ctx.in_K(a) else a


def tilt_modpoint(ctx, p):
    s = ctx.s
    if p == ModPoint(NEG, 1):
        if s == POS:
            return ModPoint(POS, -1)
        return ModPoint(s, 0) if ctx.s_is_source else ModPoint(s, -1)
    if p.side == 0 and p.ang < s:
        return ModPoint(s - p.ang - 1, 0)
    if p.side == 0 and p.ang == s:
        return ModPoint(s, 1)
    return p


def untilt_modpoint(ctx, p):
    s = ctx.s
    if s == POS and p == ModPoint(POS, -1):
        return ModPoint(NEG, 1)
    if ctx.s_is_source and p == ModPoint(s, 0):
        return ModPoint(NEG, 1)
    if not ctx.s_is_source and p.ang == s:
        return ModPoint(NEG, 1) if p.side < 0 else ModPoint(s, 0)
    if p.side == 0 and p.ang < s:
        return ModPoint(s - p.ang - 1, 0)
    return p


def tilt_module(ctx, m):
    a, b = tilt_modpoint(ctx, m.lo), tilt_modpoint(ctx, m.hi)
    return ModInterval(min(a, b), max(a, b))


def untilt_module(ctx, m):
    a, b = untilt_modpoint(ctx, m.lo), untilt_modpoint(ctx, m.hi)
    return ModInterval(min(a, b), max(a, b))


# ---------------------------------------------------------------------------
# the envelope and the flip

@dataclass(frozen=True)
class Island:
    x: Fraction
    y: Fraction    # equals s for an island running up to s

    def __str__(self):
        return f"({fstr(self.x)}, {fstr(self.y)})"


def _cut_points(F, s):
    return sorted({a for a in F.points() if a < s} | {NEG, s})


def envelope_H(R, ctx):
    """H(z) = max(R(z), sup of R over (z, s)) on K, with H(s) = R_-(s).

    Returned as a function on [-1, 1] (constant from s on) whose value is H
    and whose right limit is H_+.
    """
    s = ctx.s
    pts = _cut_points(R, s)
    tail = R.left(s)
    knots = [(s, tail, tail, tail)]
    h_next = None
    for p, q in reversed(list(zip(pts, pts[1:]))):
        a, b = R.right(p), R.left(q)
        v = b if h_next is None else max(b, h_next)
        if (a - v) * (b - v) < 0:
            z = p + (v - a) * (q - p) / (b - a)
            knots.append((z, v, v, v))
        sup_right = max(a, v)
        h = max(R(p), sup_right)
        knots.append((p, h, h, sup_right))
        h_next = h
    if s < POS:
        knots.append((POS, tail, tail, tail))
    return from_knots(sorted(knots))


def detect_islands(R, ctx):
    """Maximal open stretches of K where R sits strictly below H_+."""
    H = envelope_H(R, ctx)
    s = ctx.s
    pts = sorted(set(_cut_points(R, s)) | {a for a in H.points() if a < s})
    inside = []   # (lo, hi) closed/open bits of {z : R(z) < H+(z)}
    for p, q in zip(pts, pts[1:]):
        if R(p) < H.right(p):
            inside.append((p, p))
        # on the open gap both are linear; R < H+ on a sub-interval
        r0, r1 = R.right(p), R.left(q)
        h0, h1 = H.right(p), H.left(q)
        d0, d1 = h0 - r0, h1 - r1
        if d0 > 0 and d1 > 0:
            inside.append((p, q))
        elif d0 > 0 or d1 > 0:
            z = p + d0 * (q - p) / (d0 - d1)
            inside.append((p, z) if d0 > 0 else (z, q))
    # gap pieces are open, point pieces closed; two open pieces meeting at
    # a point outside the set stay separate islands
    islands = []
    for lo, hi in inside:
        point = lo == hi
        if islands and (islands[-1][1] > lo
                        or (islands[-1][1] == lo and (point or islands[-1][2]))):
            islands[-1][1] = max(islands[-1][1], hi)
            islands[-1][2] = point
        else:
            islands.append([lo, hi, point])
    return [Island(lo, hi) for lo, hi, _ in islands if lo < hi]


def flip_R(R, ctx):
    """H + H_+ - R on K; from s on it continues at the constant R_-(s)."""
    s = ctx.s
    H = envelope_H(R, ctx)
    pts = sorted({a for a in set(R.points()) | set(H.points()) if a < s} | {NEG})
    knots = []
    for p in pts:
        rl, rv, rr = R.limits(p)
        hv, hr = H(p), H.right(p)
        knots.append((p, 2 * hv - rl, hv + hr - rv, 2 * hr - rr))
    tail = R.left(s)
    knots.append((s, tail, tail, tail))
    if s < POS:
        knots.append((POS, tail, tail, tail))
    return from_knots(knots)


# ---------------------------------------------------------------------------
# pairs

def check_tame(pair):
    """Reject pairs whose jumps at the infinities no tilt can produce.

    With a sink at -inf, B may not rise just right of it; with a sink at
    +inf, R may not jump there.  Such pairs have no tilted counterpart and
    their semistables do not fill out a lamination.
    """
    q, R, B = pair.quiver, pair.R, pair.B
    if q.kind_at(NEG) is Kind.SINK and B.right(NEG) > R(NEG):
        raise ContextInvalid("B jumps up at -inf")
    if q.kind_at(POS) is Kind.SINK and R.left(POS) != R(POS):
        raise ContextInvalid("R jumps at the sink +inf")


def tilt_pair(pair, ctx):
    """The tilted pair over ``ctx.target()``.

    B must not jump up at -inf: B_+(-inf) <= R(-inf).  Without this the
    semistables of the two sides do not correspond.
    """
    if ctx.quiver != pair.quiver:
        raise ContextInvalid("context and pair use different quivers")
    ok, witness = check_fpc(pair)
    if not ok:
        raise FpcRequired("tilting needs the four point condition", witness)
    check_tame(pair)
    s, R, B = ctx.s, pair.R, pair.B
    beta = B.right(NEG)
    H = envelope_H(R, ctx)
    Rt = flip_R(R, ctx)
    c = R.left(s)
    top = H.right(NEG)
    bk = [(NEG, c, c, c)]
    for p in Rt.points():
        if NEG < p < s:
            left, value, right = Rt.limits(p)
            bk.append((s - p - 1, right, value, left))
    if s < POS:
        bk.append((s, Rt.right(NEG), top, beta))
        bk += [(a, *B.limits(a)) for a in B.points() if a > s]
    else:
        bk.append((POS, Rt.right(NEG), top, top))
    rk = [(NEG, c, c, c)]
    if s < POS:
        rk.append((s, *R.limits(s)))
        rk += [(a, *R.limits(a)) for a in R.points() if a > s]
    else:
        rk.append((POS, c, top, top))
    frame = pair.frame + (("tilt", s, pair.quiver),)
    return validate_pair(from_knots(sorted(rk)), from_knots(sorted(bk)),
                         ctx.target(), frame)


def _unflip(G, s, top):
    """Rebuild R on (-1, s) from its flip ``G``; ``top`` is H_+(-inf).

    H_+ is the running minimum of G from the left, started at ``top``.
    """
    pts = _cut_points(G, s)
    knots = []
    hp = top
    for p, q in zip(pts, pts[1:]):
        if p > NEG:
            gl, gv, gr = G.limits(p)
            h = min(hp, gl)
            hp = min(h, gv, gr)
            knots.append((p, 2 * h - gl, h + hp - gv, 2 * hp - gr))
        a, b = G.right(p), G.left(q)
        if b < hp < a:
            z = p + (hp - a) * (q - p) / (b - a)
            knots.append((z, hp, hp, hp))
        hp = min(hp, b)
    return knots


def untilt_pair(pair, s):
    """Inverse of :func:`tilt_pair`: recover the pair before the tilt at ``s``.

    Values the tilt forgets are filled canonically: R(-inf) is taken equal
    to B just right of -inf, and at s = +inf B is the constant H_+(-inf).
    """
    ctx = context_from_target(pair.quiver, s)
    check_tame(pair)
    s = ctx.s
    R2, B2 = pair.R, pair.B
    left_s, top, _ = B2.limits(s)
    beta = B2.right(s) if s < POS else top
    gk = []
    for w in B2.points():
        if NEG < w < s:
            left, value, right = B2.limits(w)
            gk.append((s - w - 1, right, value, left))
    # the two ends only fix the linear pieces next to them
    gk.append((NEG, left_s, left_s, left_s))
    c = B2.right(NEG)
    gk.append((s, c, c, c))
    if s < POS:
        gk.append((POS, c, c, c))
    G = from_knots(sorted(gk))
    rk = [(NEG, beta, beta, 2 * top - left_s)] + _unflip(G, s, top)
    if s < POS:
        rk.append((s, *R2.limits(s)))
        rk += [(a, *R2.limits(a)) for a in R2.points() if a > s]
        bk = [(NEG, beta, beta, beta), (s, beta, beta, beta)]
        bk += [(a, *B2.limits(a)) for a in B2.points() if a > s]
    else:
        rk.append((POS, R2.left(POS), beta, beta))
        bk = [(NEG, beta, beta, beta), (POS, beta, beta, beta)]
    frame = pair.frame + (("untilt", s, pair.quiver),)
    return validate_pair(from_knots(sorted(rk)), from_knots(sorted(bk)),
                         ctx.quiver, frame)


def is_straight_descending(q):
    return q.critical_points == ((NEG, Kind.SINK), (POS, Kind.SOURCE))


def straighten(pair):
    """Tilt and untilt until the quiver is straight descending.

    Each step removes one interior critical point: with a sink at -inf we
    tilt at the first source, otherwise we untilt at the first sink.  The
    steps are appended to the pair's frame.
    """
    while not is_straight_descending(pair.quiver):
        q = pair.quiver
        if q.kind_at(NEG) is Kind.SINK:
            pair = tilt_pair(pair, make_context(q, q.sources()[0]))
        else:
            pair = untilt_pair(pair, q.sinks()[0])
    return pair


def pull_back(frame, p, upto=0):
    """Carry a modified-quiver point of the last quiver back through ``frame``."""
    for kind, s, q_before in reversed(frame[upto:]):
        if kind == "tilt":
            p = untilt_modpoint(make_context(q_before, s), p)
        else:
            p = tilt_modpoint(context_from_target(q_before, s), p)
    return p


# ---------------------------------------------------------------------------
# clusters

def _chord_case(ctx, m):
    lo_k = m.lo == ModPoint(NEG, 1) or (m.lo.side == 0 and m.lo.ang < ctx.s)
    hi_k = m.hi.side == 0 and m.hi.ang < ctx.s
    if lo_k and hi_k:
        return 2
    return 3 if lo_k else 1


def tilt_chord(ctx, H, m, h):
    """Image of the chord ``m`` at height ``h``: same height unless both
    endpoints lie in K, where the height becomes 2 H(b) - h."""
    h2 = 2 * H(m.hi.ang) - h if _chord_case(ctx, m) == 2 else h
    return tilt_module(ctx, m), h2


def tilt_cluster(ctx, families, pair):
    """Transport semistable families of ``pair`` across the tilt."""
    H = envelope_H(pair.R, ctx)
    cuts_ang = sorted({a for a in H.points() if a < ctx.s} | {ctx.s})
    pieces, points = [], []
    for f in families:
        if isinstance(f, Plateau):
            raise FpcRequired("plateaus cannot be tilted", f)
        hs = f.heights
        for i, h in enumerate(hs):
            if f.contains_height(h):
                points.append(tilt_chord(ctx, H, f.at(h), h))
        for i in range(len(hs) - 1):
            h0, h1 = hs[i], hs[i + 1]
            cuts = {h0, h1}
            for pts in (f.left, f.right):
                p0, p1 = pts[i], pts[i + 1]
                if p0 == p1:
                    continue
                for a in cuts_ang:
                    t = (a - p0.ang) / (p1.ang - p0.ang)
                    if 0 < t < 1:
                        cuts.add(h0 + t * (h1 - h0))
            cuts = sorted(cuts)
            for u in cuts[1:-1]:
                points.append(tilt_chord(ctx, H, f.raw_at(u), u))
            for u0, u1 in zip(cuts, cuts[1:]):
                pieces.append(_tilt_piece(ctx, H, f, i, u0, u1))
    fams = [ChordFamily((h,), (m.lo,), (m.hi,)) for m, h in points] + pieces
    return families_from_chord_set(chord_set(fams))


def _tilt_piece(ctx, H, f, i, u0, u1):
    """One open linear stretch of a family, carried across the tilt."""
    mid = (u0 + u1) / 2
    m = f.raw(i, mid)
    case = _chord_case(ctx, ModInterval(*m))
    moving = (f.left[i] != f.left[i + 1], f.right[i] != f.right[i + 1])
    if case == 2:
        # H is linear along the right endpoint inside a cut-free stretch
        t0, t1 = u0 + (u1 - u0) / 3, u0 + 2 * (u1 - u0) / 3
        v0, v1 = H(f.raw(i, t0)[1].ang), H(f.raw(i, t1)[1].ang)
        height = lambda u: 2 * (v0 + (v1 - v0) * (u - t0) / (t1 - t0)) - u
    else:
        height = lambda u: u
    in_k = (case in (2, 3), case == 2)
    swap = case == 2
    ends = []
    for u in (u0, u1):
        lo, hi = (_map_traj(ctx, p, mv, k)
                  for p, mv, k in zip(f.raw(i, u), moving, in_k))
        ends.append((height(u), *((hi, lo) if swap else (lo, hi))))
    ends.sort(key=lambda e: e[0])
    (a0, l0, r0), (a1, l1, r1) = ends
    if a0 == a1:
        raise AssertionError("a tilted family collapsed to one height")
    return ChordFamily((a0, a1), (l0, l1), (r0, r1), (False, False))


def _map_traj(ctx, p, moving, in_k):
    """Static endpoints are genuine points; moving ones are carried by angle."""
    if not moving:
        return tilt_modpoint(ctx, p)
    return ModPoint(ctx.s - p.ang - 1, 0) if in_k else p
