"""The ``lamina`` command line tool.

Exit status is 0 on success, 1 when the input fails validation and 2 on
usage errors (argparse's own convention).
"""
import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import character, finite
from .errors import LaminaError
from .lamination import (MeasuredLamination, classify_features, laminations_equal,
                         to_lamination, to_stability)
from .quiver import NEG, Kind, ModInterval, ModPoint
from .rational import frac, fstr
from .render import RenderSpec, render_disk, render_graph
from .stability import (ChordFamily, RedBluePair, check_fpc,
                        semistable_compatibility_audit, sweep_families)
from .tilting import make_context, tilt_pair, untilt_pair


class Usage(Exception):
    """Bad flag values that argparse cannot catch itself."""


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def _load_pair(path):
    return RedBluePair.from_json(_load(path))


def _load_lamination(path):
    """A lamination file, or a pair file that is laminated on the fly."""
    data = _load(path)
    if "quiver" in data:
        return to_lamination(RedBluePair.from_json(data))
    return MeasuredLamination.from_json(data)


def _ints(text, flag):
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise Usage(f"{flag}: expected comma separated integers, got {text!r}")


def _fracs(text, flag):
    try:
        return [frac(v) for v in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise Usage(f"{flag}: expected comma separated rationals, got {text!r}")


def _quiver(text):
    try:
        return finite.FiniteQuiver.parse(text)
    except ValueError:
        raise Usage(f"--quiver: expected a word in L and R, got {text!r}")


def _module(text):
    vals = _ints(text, "--module")
    if len(vals) != 2:
        raise Usage(f"--module: expected a,b, got {text!r}")
    return tuple(vals)


# ---------------------------------------------------------------------------
# commands; each returns (json_value, text)

def cmd_validate(args):
    pair = _load_pair(args.file)
    ok, witness = check_fpc(pair)
    text = f"valid; fpc: {str(ok).lower()}"
    if witness is not None:
        text += f"\nwitness: {witness.interval} at height {fstr(witness.height)}"
    return {"valid": True, "fpc": ok}, text


def cmd_semistables(args):
    fams = sweep_families(_load_pair(args.file))
    lines = []
    for f in fams:
        if isinstance(f, ChordFamily):
            o = f.to_json()["openness"]
            lines.append(f"heights {o[0]}{fstr(f.h_lo)}, {fstr(f.h_hi)}{o[1]}: "
                         f"{f.left[0]} .. {f.right[0]} -> {f.left[-1]} .. {f.right[-1]}")
        else:
            lines.append(f"plateau at {fstr(f.height)}")
    return [f.to_json() for f in fams], "\n".join(lines)


def cmd_fpc(args):
    pair = _load_pair(args.file)
    ok, witness = check_fpc(pair)
    data = {"fpc": ok}
    text = f"fpc: {str(ok).lower()}"
    if witness is not None:
        data["witness"] = {"interval": witness.interval.to_json(),
                           "height": fstr(witness.height)}
        text += f"\nwitness: {witness.interval} at height {fstr(witness.height)}"
    if ok and args.audit:
        rng = random.Random(int(os.environ.get("LAMINA_SEED", "0")))
        probes = _random_probes(pair.quiver, rng, args.audit)
        rep = semistable_compatibility_audit(pair, probes)
        data["audit"] = {"pairs_checked": rep.pairs_checked,
                         "incompatible": len(rep.incompatible),
                         "witnessed": len(rep.witnesses),
                         "semistable_probes": len(rep.semistable_probes),
                         "missing": len(rep.missing)}
        text += (f"\naudit: {rep.pairs_checked} pairs, {len(rep.incompatible)} "
                 f"incompatible; {len(rep.witnesses)} probes witnessed, "
                 f"{len(rep.missing)} missing")
    return data, text


def _random_probes(q, rng, count):
    out = []
    points = _points(q)
    while len(out) < count:
        lo, hi = sorted(rng.sample(points, 2))
        m = ModInterval(lo, hi)
        if q.is_point(lo) and q.is_point(hi):
            out.append(m)
    return out


def _points(q):
    pts = []
    for a, kind in q.critical_points:
        if kind is Kind.SINK:
            pts += [ModPoint(a, -1), ModPoint(a, 1)]
    pts += [ModPoint(Fraction(k, 48)) for k in range(-47, 48)]
    return [p for p in pts if q.is_point(p)]


def cmd_tilt(args):
    pair = _load_pair(args.file)
    s = frac(args.at)
    if pair.quiver.kind_at(NEG) is Kind.SINK:
        out = tilt_pair(pair, make_context(pair.quiver, s))
    else:
        out = untilt_pair(pair, s)
    return out.to_json(), json.dumps(out.to_json(), indent=2)


def cmd_laminate(args):
    L = to_lamination(_load_pair(args.file))
    return L.to_json(), _lamination_text(L)


def _lamination_text(L):
    lines = []
    for f in L.families:
        if f.atom:
            lines.append(f"atom {f.start} mass {fstr(f.extent)}")
        else:
            lines.append(f"{f.kind()} {f.start} -> {f.end} length {fstr(f.extent)}")
    lines += [f"leaf {g}" for g in L.leaves]
    return "\n".join(lines)


def cmd_delaminate(args):
    pair = to_stability(MeasuredLamination.from_json(_load(args.file)))
    return pair.to_json(), json.dumps(pair.to_json(), indent=2)


def cmd_classify(args):
    feats = classify_features(_load_lamination(args.file))
    text = "\n".join(f"{ft.kind} measure {fstr(ft.measure)} "
                     f"({len(ft.families)} piece{'s' * (len(ft.families) > 1)})"
                     for ft in feats)
    return [ft.to_json() for ft in feats], text


def cmd_equal(args):
    eq = laminations_equal(_load_lamination(args.first), _load_lamination(args.second))
    return {"equal": eq}, f"equal: {str(eq).lower()}"


def cmd_finite_semistable(args):
    q = _quiver(args.quiver)
    theta = _fracs(args.theta, "--theta")
    if len(theta) != q.n:
        raise Usage(f"--theta: expected {q.n} values")
    F = finite.theta_partial_sums(theta)
    mods = [_module(args.module)] if args.module else \
        [(a, b) for a in range(q.n) for b in range(a + 1, q.n + 1)]
    rows = [(m, finite.finite_semistable(q, F, m)) for m in mods]
    data = {"F": [fstr(v) for v in F],
            "modules": [{"a": a, "b": b, "status": s} for (a, b), s in rows]}
    text = "F = (" + ", ".join(fstr(v) for v in F) + ")\n"
    text += "\n".join(f"M({a},{b}] {s}" for (a, b), s in rows)
    return data, text


def _beta(m, k):
    return ("" if k == 1 else str(k)) + f"β{m[0]}{m[1]}" if max(m) < 10 \
        else ("" if k == 1 else str(k)) + f"β({m[0]},{m[1]})"


def cmd_finite_decomp(args):
    q = _quiver(args.quiver)
    d = _ints(args.dim, "--dim")
    if len(d) != q.n:
        raise Usage(f"--dim: expected {q.n} entries")
    dec = finite.generic_decomposition(q, d)
    data = [{"a": a, "b": b, "mult": k} for (a, b), k in dec.items()]
    text = finite.spots_diagram(q, d) + "\n" + " + ".join(_beta(m, k) for m, k in dec.items())
    return data, text


def cmd_finite_apr(args):
    q = _quiver(args.quiver)
    a, b = _module(args.module)
    a2, b2 = finite.apr_tilt(q, (a, b), args.pivot)
    q2 = finite.apr_quiver(q, args.pivot)
    return ({"quiver": "".join(q2.arrows), "a": a2, "b": b2},
            f"{q2}\nM({a},{b}] -> M({a2},{b2}]")


def cmd_finite_char(args):
    x = _fracs(args.x, "--x")
    val = finite.cc_char(args.n, args.a, args.b, x)
    return {"chi": fstr(val)}, fstr(val)


def _object(text):
    t = text.replace(" ", "")
    try:
        if t.startswith("P[1]"):
            return ("P[1]", int(t[4:]))
        if t.startswith("P"):
            return ("P", int(t[1:]))
        if t.startswith("M"):
            i, j = t[1:].split(",")
            return ("M", int(i), int(j))
    except ValueError:
        pass
    raise Usage(f"--object: expected Pi, P[1]i or Mi,j, got {text!r}")


def cmd_finite_omega(args):
    q = _quiver(args.quiver)
    m = finite.omega_map(q, _object(args.object))
    return m.to_json(), f"[{m.lo}, {m.hi}]"


def cmd_char(args):
    try:
        x = character.parse_assignment(args.x)
    except (ValueError, OSError) as e:
        raise Usage(f"--x: {e}")
    if args.projective:
        val = character.chi_projective_cont(args.b, x, cutoff=args.cutoff)
    elif args.a < 0 < args.b and args.across_source:
        val = character.chi_across_source(args.a, args.b, x)
    else:
        val = character.chi_straight(args.a, args.b, x)
    return {"chi": val}, repr(val)


def cmd_render(args):
    spec = RenderSpec(args.width, args.height)
    if args.disk:
        data = _load(args.file)
        q = None
        if "quiver" in data:
            pair = RedBluePair.from_json(data)
            q, L = pair.quiver, to_lamination(pair)
        else:
            L = MeasuredLamination.from_json(data)
        return None, render_disk(L, spec, q)
    return None, render_graph(_load_pair(args.file), spec)


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="lamina", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the result to this file")
    common.add_argument("--format", choices=["json", "text", "svg"], default="text")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, *files, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        for f in files:
            sp.add_argument(f)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "file", help="check a red-blue pair")
    add("semistables", cmd_semistables, "file", help="list semistable families")
    fp = add("fpc", cmd_fpc, "file", help="four point condition")
    fp.add_argument("--audit", type=int, default=0, metavar="N",
                    help="also audit compatibility with N random probes (seed LAMINA_SEED)")
    tp = add("tilt", cmd_tilt, "file", help="tilt (or untilt) a pair")
    tp.add_argument("--at", required=True, help="tilting point as an angle")
    add("laminate", cmd_laminate, "file", help="pair to measured lamination")
    add("delaminate", cmd_delaminate, "file", help="measured lamination to pair")
    add("classify", cmd_classify, "file", help="discrete arcs, fountains, rainbows")
    add("equal", cmd_equal, "first", "second", help="compare two laminations")

    fin = sub.add_parser("finite", help="finite A_n computations")
    fsub = fin.add_subparsers(dest="finite_command", required=True)

    def fadd(name, func, **kw):
        sp = fsub.add_parser(name, parents=[common], **kw)
        sp.set_defaults(func=func)
        return sp

    sp = fadd("semistable", cmd_finite_semistable)
    sp.add_argument("--quiver", required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--module")
    sp = fadd("decomp", cmd_finite_decomp)
    sp.add_argument("--quiver", required=True)
    sp.add_argument("--dim", required=True)
    sp = fadd("apr", cmd_finite_apr)
    sp.add_argument("--quiver", required=True)
    sp.add_argument("--pivot", type=int, required=True)
    sp.add_argument("--module", required=True)
    sp = fadd("char", cmd_finite_char)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--x", required=True, help="x_0,...,x_n")
    sp = fadd("omega", cmd_finite_omega)
    sp.add_argument("--quiver", required=True)
    sp.add_argument("--object", required=True, help="Pi, P[1]i or Mi,j")

    cp = add("char", cmd_char, help="continuous cluster character")
    cp.add_argument("--a", type=float, default=0.0)
    cp.add_argument("--b", type=float, required=True)
    cp.add_argument("--x", default="const:1", help="const:<c>, ident or pl:<file>")
    cp.add_argument("--projective", action="store_true")
    cp.add_argument("--cutoff", type=float)
    cp.add_argument("--across-source", action="store_true",
                    help="a < 0 < b with a source at 0")

    rp = add("render", cmd_render, "file", help="SVG picture")
    mode = rp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--graph", action="store_true")
    mode.add_argument("--disk", action="store_true")
    rp.add_argument("--width", type=int, default=640)
    rp.add_argument("--height", type=int, default=400)
    return p


def _emit(args, data, text):
    if args.format == "json" and data is not None:
        out = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        data, text = args.func(args)
        if args.command in ("tilt", "laminate", "delaminate") and args.output \
                and args.format == "text":
            args.format = "json"
        _emit(args, data, text)
    except Usage as e:
        print(f"lamina: {e}", file=sys.stderr)
        return 2
    except (LaminaError, ValueError, ZeroDivisionError, OSError, KeyError) as e:
        print(f"lamina: error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
