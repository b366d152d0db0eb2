import random
from fractions import Fraction as Fr

import pytest

from lamina.corpus import flat_pair, random_fpc_pairs, random_pair, two_islands_pair, v_shape
from lamina.errors import Cond2Violation, Cond3Violation, FpcRequired
from lamina.pwfn import constant, validate_useful
from lamina.quiver import Kind, ModInterval, ModPoint, new_quiver, straight_descending
from lamina.stability import (ChordFamily, RedBluePair, chord_check, chord_set, check_fpc,
                              normalize, pairs_equivalent, semistable_compatibility_audit,
                              shift_families, shift_pair, sweep_families, validate_pair)


def iv(a, b):
    return ModInterval(ModPoint(Fr(a)), ModPoint(Fr(b)))


def test_validate_examples():
    v = v_shape()
    with pytest.raises(Cond3Violation):
        validate_pair(v.R, constant(-2), straight_descending())
    q = new_quiver([(-1, "sink"), (0, "source"), (1, "sink")])
    R = validate_useful({"pl": [[-1, 0], [1, 0]], "jumps": [(0, 1, 0)]})
    with pytest.raises(Cond2Violation):
        validate_pair(R, constant(1), q)


def test_json_round_trip():
    p = two_islands_pair()
    assert RedBluePair.from_json(p.to_json()) == p


def test_equivalence():
    p = two_islands_pair()
    assert pairs_equivalent(p, shift_pair(p, 5)) == (True, 5)
    other = validate_pair(validate_useful({"pl": [[-1, 0], [0, -1], [Fr(1, 2), Fr(-1, 4)],
                                                  [1, 0]]}),
                          constant(0), straight_descending())
    assert pairs_equivalent(v_shape(), other) == (False, None)
    n = normalize(p)
    assert normalize(n) == n


def test_chord_check_examples():
    v = v_shape()
    assert chord_check(v, iv(Fr(-1, 2), Fr(1, 2))) == (Fr(-1, 2), Fr(-1, 2))
    assert chord_check(v, iv(Fr(-1, 4), Fr(1, 4))) == (Fr(-3, 4), Fr(-3, 4))
    assert chord_check(v, iv(Fr(-1, 4), Fr(1, 2))) is None


def test_sweep_v_shape():
    fams = sweep_families(v_shape())
    assert len(fams) == 1
    f = fams[0]
    assert (f.h_lo, f.h_hi, f.openness) == (-1, 0, (False, False))
    lo, hi = f.at(Fr(-1, 2)).lo, f.at(Fr(-1, 2)).hi
    assert (lo, hi) == (ModPoint(Fr(-1, 2)), ModPoint(Fr(1, 2)))


def test_flat_pair_fails_fpc():
    ok, witness = check_fpc(flat_pair())
    assert not ok and witness.height == 0


def test_flat_bottom_fails_fpc():
    R = validate_useful({"pl": [[-1, 0], [Fr(-1, 2), -1], [Fr(1, 2), -1], [1, 0]]})
    p = validate_pair(R, constant(0), straight_descending())
    ok, witness = check_fpc(p)
    assert not ok and witness.height == -1


def test_fpc_examples():
    assert check_fpc(v_shape()) == (True, None)
    assert check_fpc(two_islands_pair())[0]


def test_audit_v_shape_nested_probes():
    probes = [iv(-Fr(k, 101), Fr(k + 1, 101)) for k in range(1, 101)]
    rep = semistable_compatibility_audit(v_shape(), probes)
    assert rep.ok
    assert len(rep.witnesses) + len(rep.semistable_probes) == 100


def test_audit_semistable_probe_is_reported():
    rep = semistable_compatibility_audit(v_shape(), [iv(Fr(-1, 2), Fr(1, 2))])
    assert rep.semistable_probes == [iv(Fr(-1, 2), Fr(1, 2))] and rep.ok


def test_audit_needs_fpc():
    with pytest.raises(FpcRequired):
        semistable_compatibility_audit(flat_pair())


def _random_intervals(q, rng, count):
    pts = [ModPoint(Fr(k, 24)) for k in range(-23, 24)]
    for a, kind in q.critical_points:
        if kind is Kind.SINK:
            pts += [ModPoint(a, -1), ModPoint(a, 1)]
    pts = sorted(p for p in pts if q.is_point(p))
    out = []
    for _ in range(count):
        a, b = sorted(rng.sample(pts, 2))
        out.append(ModInterval(a, b))
    return out


def _in_some_family(fams, m, h):
    for f in fams:
        if isinstance(f, ChordFamily) and f.contains_height(h) and f.at(h) == m:
            return True
    return False


def test_sweep_sound_and_complete():
    rng = random.Random(21)
    pairs = random_fpc_pairs(21, 40)
    for p in pairs:
        fams = sweep_families(p)
        for f in fams:
            for h in f.sample_heights():
                if f.contains_height(h):
                    rng_h = chord_check(p, f.at(h))
                    assert rng_h is not None and rng_h[0] <= h <= rng_h[1]
        for m in _random_intervals(p.quiver, rng, 40):
            r = chord_check(p, m)
            if r is None:
                continue
            for h in {r[0], r[1], (r[0] + r[1]) / 2}:
                assert _in_some_family(fams, m, h)


def test_sweep_sound_on_pairs_without_fpc():
    rng = random.Random(22)
    done = 0
    while done < 40:
        try:
            p = random_pair(rng)
        except ValueError:
            continue
        done += 1
        for f in sweep_families(p):
            if isinstance(f, ChordFamily):
                for h in f.sample_heights():
                    if f.contains_height(h):
                        r = chord_check(p, f.at(h))
                        assert r is not None and r[0] <= h <= r[1]


def test_shift_invariance():
    for p in random_fpc_pairs(23, 20) + [two_islands_pair()]:
        c = Fr(7, 3)
        assert chord_set(sweep_families(shift_pair(p, c))) == \
            chord_set(shift_families(sweep_families(p), c))


def test_compatibility_of_semistables():
    for p in random_fpc_pairs(24, 25):
        rep = semistable_compatibility_audit(p, _random_intervals(p.quiver, random.Random(1), 20))
        assert rep.ok
