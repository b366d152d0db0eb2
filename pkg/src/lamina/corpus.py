"""Named example pairs and a seeded generator of random valid pairs."""
import random
from fractions import Fraction

from .pwfn import constant, from_knots, validate_useful
from .quiver import Kind, new_quiver, straight_descending
from .stability import check_fpc, validate_pair


def v_shape():
    """Straight descending quiver, R dips from 0 to -1 and back, B = 0."""
    R = validate_useful({"pl": [[-1, 0], [0, -1], [1, 0]]})
    return validate_pair(R, constant(0), straight_descending())


def flat_pair():
    return validate_pair(constant(0), constant(0), straight_descending())


def _fig(x):
    """Figure units to angles: [-5, 0] and [0, 6] are squeezed onto [-1, 0], [0, 1]."""
    x = Fraction(x)
    return x / 5 if x <= 0 else x / 6


def two_islands_pair():
    """The worked example with sinks at both infinities and a source at 0.

    Tilting it at 0 flips the two islands (-inf, -4) and (-7/2, -1).
    """
    q = new_quiver([(-1, "sink"), (0, "source"), (1, "sink")])
    R = from_knots([(_fig(x), *vals) for x, vals in [
        (-5, (2, 2, 1)), (-4, (2, 2, 2)), (-3, (0, 0, 0)),
        (-1, (1, 1, 0)), (0, (-2, -2, -2)), (6, (-2, -2, -2))]])
    B = from_knots([(_fig(x), *vals) for x, vals in [
        (-5, (2, 2, 2)), (0, (2, 2, 2)), (1, (4, 4, 4)), (2, (1, 0, 0)),
        (4, (1, 1, 1)), (6, (-1, -2, -2))]])
    return validate_pair(R, B, q)


def two_islands_tilted():
    """The same example after tilting at 0, read off the picture by hand.

    Left of 0 the angles are the images under a -> -a - 1 of the
    breakpoints -1, -3, -7/2, -4 and -inf of the untilted picture.
    """
    q = new_quiver([(-1, "source"), (1, "sink")])
    # R is constant at R(0-) = -2 on K* and untouched on Z
    R = constant(-2)
    B = from_knots([(x, *vals) for x, vals in [
        (-1, (-2, -2, -2)), (Fraction(-4, 5), (0, 0, 1)),
        (Fraction(-2, 5), (2, 2, 2)), (Fraction(-3, 10), (1, 1, 1)),
        (Fraction(-1, 5), (2, 2, 2)), (0, (3, 2, 2)),
        (Fraction(1, 6), (4, 4, 4)), (Fraction(1, 3), (1, 0, 0)),
        (Fraction(2, 3), (1, 1, 1)), (1, (-1, -2, -2))]])
    return validate_pair(R, B, q)


# ---------------------------------------------------------------------------
# random pairs

def _rand_value(rng, lo=-6, hi=6, den=6):
    return Fraction(rng.randint(lo * den, hi * den), den)


def _rand_positions(rng, k, den=24):
    pool = list(range(-den + 1, den))
    return sorted(Fraction(x, den) for x in rng.sample(pool, k))


def random_quiver(rng, max_interior=3, neg_sink=None):
    k = rng.randint(0, max_interior)
    first = Kind.SINK if (neg_sink if neg_sink is not None else rng.random() < 0.5) \
        else Kind.SOURCE
    pos = [Fraction(-1)] + _rand_positions(rng, k) + [Fraction(1)]
    kinds = [first]
    for _ in pos[1:]:
        kinds.append(Kind.SOURCE if kinds[-1] is Kind.SINK else Kind.SINK)
    return new_quiver(list(zip(pos, kinds)))


def random_pair(rng, max_interior=3, max_inner=3, jump_prob=0.35, neg_sink=None,
                q=None):
    """A random pair that satisfies all six conditions by construction.

    On a red cell R wanders and B sits at a constant no lower than R; on a
    blue cell R is frozen at its value at the source and B wanders above it.
    """
    q = q or random_quiver(rng, max_interior, neg_sink)
    crit = q.critical_points
    val = lambda: _rand_value(rng)
    bump = lambda: Fraction(rng.randint(0, 4), 2) if rng.random() < 0.3 else 0
    maybe = lambda x: val() if rng.random() < jump_prob else x

    def inner_points(a, b):
        xs = _rand_positions(rng, rng.randint(0, max_inner), den=240)
        return [x * (b - a) / 2 + (a + b) / 2 for x in xs]

    # first pass: the moving function on each cell
    cells = []
    carry = val()
    for (a, ka), (b, _) in zip(crit, crit[1:]):
        knots = []
        if ka is Kind.SINK:
            start = val()
            for x in inner_points(a, b):
                left = val()
                right = maybe(left)
                knots.append((x, left, max(left, right) + bump(), right))
            end = val()
            cells.append(dict(red=True, a=a, b=b, start=start, knots=knots, end=end))
            carry = end
        else:
            for x in inner_points(a, b):
                left = carry + abs(val())
                right = carry + abs(maybe(left - carry))
                knots.append((x, left, min(left, right), right))
            cells.append(dict(red=False, a=a, b=b, c=carry, knots=knots,
                              end=carry + abs(val())))
    # second pass: knots at critical points
    rk, bk = {}, {}
    for i, cell in enumerate(cells):
        a, b = cell["a"], cell["b"]
        prev = cells[i - 1] if i else None
        if cell["red"]:
            r_at = max(prev["c"], cell["start"]) + bump() if prev else None
            top = max([cell["start"], cell["end"]] + [k[2] for k in cell["knots"]]
                      + ([r_at] if prev else []))
            K = top + bump()
            if b == 1:
                cell["end"] = K
            if prev is None:
                # B may drop at -inf but never rise
                v0 = K + bump()
                rk[a] = (v0, v0, cell["start"])
                bk[a] = (v0, v0, K)
            else:
                c, b_end = prev["c"], prev["end"]
                rk[a] = (c, r_at, cell["start"])
                low = min(c, cell["start"])
                bk[a] = (b_end, max(min(b_end, K) - bump(), low), K)
            for x, *trip in cell["knots"]:
                rk[x] = tuple(trip)
            rk[b] = (cell["end"],) * 3
            bk[b] = (K,) * 3
            if i + 1 < len(cells):
                cells[i + 1]["c"] = cell["end"]
        else:
            c = cell["c"]
            if prev is None:
                rk[a] = bk[a] = (c, c, c)
            for x, *trip in cell["knots"]:
                bk[x] = tuple(trip)
            if b == 1:
                rk[b] = (c, c, c)
                bk[b] = (cell["end"], c, c)
    R = from_knots([(a, *rk[a]) for a in sorted(rk)])
    B = from_knots([(a, *bk[a]) for a in sorted(bk)])
    return validate_pair(R, B, q)


def random_fpc_pairs(seed, count, **kwargs):
    """``count`` random pairs that pass the four point condition."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        try:
            p = random_pair(rng, **kwargs)
        except ValueError:
            continue
        if check_fpc(p)[0]:
            out.append(p)
    return out
