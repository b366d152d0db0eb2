import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lamina.errors import EmptyInterval, IllegalBoundaryJump, NonMonotoneBreakpoints
from lamina.pwfn import (UsefulFn, constant, evaluate3, from_knots, local_variation, shift,
                         validate_useful, variation)

# f(x) = x clipped to [-2, 2] with u_0^- = 1, u_0^+ = -2.  In angle
# coordinates x = +-1 sits at a = +-1/2; the clip points are moved to the
# rational angles +-3/4 and f is linear in a between knots.
FIG1 = UsefulFn.from_json({"pl": [["-1", "-2"], ["-3/4", "-2"], ["-1/2", "-1"], ["0", "0"],
                                 ["1/2", "1"], ["3/4", "2"], ["1", "2"]],
                          "jumps": [{"ang": "0", "um": "1", "up": "-2"}]})
V = validate_useful({"pl": [[-1, 0], [0, -1], [1, 0]]})


def test_validation_errors():
    assert validate_useful({"pl": [[-1, 0], [1, 0]]}) == constant(0)
    with pytest.raises(IllegalBoundaryJump):
        validate_useful({"pl": [[-1, 0], [1, 0]], "jumps": [(-1, 1, 0)]})
    with pytest.raises(IllegalBoundaryJump):
        validate_useful({"pl": [[-1, 0], [1, 0]], "jumps": [(1, 0, 1)]})
    with pytest.raises(NonMonotoneBreakpoints):
        validate_useful({"pl": [[-1, 0], [0, 0], [0, 1], [1, 0]]})


def test_evaluate3():
    assert evaluate3(FIG1, 0) == (0, 1, -1, -1, 1)
    assert evaluate3(constant(0), Fr(1, 3)) == (0, 0, 0, 0, 0)
    step = validate_useful({"pl": [[-1, 0], [1, 0]], "jumps": [(0, 1, 0)]})
    assert evaluate3(step, 0) == (0, 1, 1, 0, 1)
    assert evaluate3(V, -1)[0] is None


def test_variation():
    assert variation(V, -1, 1) == 2
    assert variation(FIG1, -1, 1) == 4 + 3
    mono = validate_useful({"pl": [[-1, 3], [0, 1], [1, -2]]})
    assert variation(mono, -1, 1) == 5
    with pytest.raises(EmptyInterval):
        variation(V, 0, 0)


def test_fig1_variation_over_unit_interval():
    # (-1, 1) in x is (-1/2, 1/2) in angle: the PL part rises 2, the jumps add 3
    assert variation(FIG1, Fr(-1, 2), Fr(1, 2)) == 5


def test_local_variation():
    assert local_variation(FIG1, 0) == 3
    assert local_variation(FIG1, Fr(1, 3)) == 0
    assert local_variation(validate_useful({"pl": [[-1, 0], [1, 0]],
                                            "jumps": [(0, 5, 0)]}), 0) == 5


def test_shift():
    assert shift(constant(0), 3) == constant(3)
    assert shift(shift(FIG1, Fr(7, 3)), Fr(-7, 3)) == FIG1
    g = shift(FIG1, 2)
    for a in [Fr(k, 8) for k in range(-8, 9)]:
        assert evaluate3(g, a)[:3] == tuple(None if v is None else v + 2
                                            for v in evaluate3(FIG1, a)[:3])


def test_json_round_trip():
    assert UsefulFn.from_json(FIG1.to_json()) == FIG1


def _random_fn(rng):
    k = rng.randint(0, 4)
    xs = sorted({Fr(rng.randint(-23, 23), 24) for _ in range(k)})
    pl = [(Fr(-1), Fr(rng.randint(-6, 6)))] + [(x, Fr(rng.randint(-6, 6))) for x in xs] \
        + [(Fr(1), Fr(rng.randint(-6, 6)))]
    jumps = []
    for x in sorted({Fr(rng.randint(-24, 24), 24) for _ in range(rng.randint(0, 3))}):
        um = 0 if x == -1 else rng.randint(-3, 3)
        up = 0 if x == 1 else rng.randint(-3, 3)
        jumps.append((x, um, up))
    return validate_useful({"pl": pl, "jumps": jumps})


def _grid_variation(F, lo, hi):
    """Variation from the three-value readings on a grid containing every
    presentation point; exact for finite presentations."""
    pts = sorted({lo, hi} | {a for a in F.points() if lo < a < hi})
    vals = []
    for a in pts:
        left, value, right = F.limits(a)
        if a == lo:
            vals += [right]
        elif a == hi:
            vals += [left]
        else:
            vals += [left, value, right]
    return sum(abs(b - a) for a, b in zip(vals, vals[1:]))


def test_variation_matches_grid_oracle():
    rng = random.Random(11)
    for _ in range(1000):
        F = _random_fn(rng)
        lo, hi = sorted(rng.sample([Fr(k, 24) for k in range(-24, 25)], 2))
        assert variation(F, lo, hi) == _grid_variation(F, lo, hi)


def test_variation_additivity():
    rng = random.Random(12)
    for _ in range(300):
        F = _random_fn(rng)
        a, b, c = sorted(rng.sample([Fr(k, 24) for k in range(-23, 24)], 3))
        assert variation(F, a, c) == variation(F, a, b) + variation(F, b, c) \
            + local_variation(F, b)
        assert variation(F, a, c) >= abs(F.left(c) - F.right(a))


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(-10, 10), st.integers(-10, 10), st.integers(-10, 10)),
                min_size=0, max_size=5), st.integers(-5, 5), st.integers(-5, 5))
def test_knots_round_trip(vals, v0, v1):
    xs = [Fr(k, len(vals) + 1) * 2 - 1 for k in range(1, len(vals) + 1)]
    knots = [(Fr(-1), v0, v0, v0)] + [(x, *t) for x, t in zip(xs, vals)] + [(Fr(1), v1, v1, v1)]
    F = from_knots(knots)
    for x, left, value, right in knots[1:-1]:
        assert F.limits(x) == (left, value, right)
    um_ok = all(F.limits(a)[1] - F.limits(a)[0] == F.jump_at(a)[0] for a in F.points())
    assert um_ok
