"""Command-line front end.

Verbs: build (also ``monoid build``), check-identity, isoterm, class,
subwords, jm, ``nfb verify`` and scheme.  Monoids are given as a preset
name, a JSON table file or ``dilworth:<w1>,<w2>``; several ``--monoid``
values are multiplied together.

Exit codes: 0 holds / isoterm / pass, 1 fails, 2 bounded-only verdict,
64 usage error, 65 search cap exceeded, 66 I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .decide import (
    ASSIGNMENT_CAP,
    SPACE_CAP,
    CapExceeded,
    equivalence_class,
    is_isoterm,
    satisfies,
)
from .monoids import (
    PRESETS,
    MonoidError,
    dilworth,
    direct_product,
    load_table,
    preset,
    reflexive_relations,
    save_table,
    triangular_boolean,
)
from .nfb import CONDITIONS, check_corollary_alg, verify
from .schemes import PARAMS, generate, isoterm_words, scheme
from .words import WordSyntaxError, jm_equivalent, parse_identity, parse_word, render, scattered_subwords

EXIT_USAGE = 64
EXIT_CAP = 65
EXIT_IO = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ------------------------------------------------------------------ inputs

def read_word_list(path) -> list:
    """One word per line; ``#`` starts a comment; blank lines are skipped."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_word(line))
    return out


def _words(items) -> list:
    """Words given inline, or ``@file`` for a word list file."""
    out = []
    for item in items:
        if item.startswith("@"):
            out.extend(read_word_list(item[1:]))
        else:
            out.extend(parse_word(w) for w in item.split(","))
    return out


def _one_monoid(spec: str):
    if spec in PRESETS:
        return preset(spec)
    if spec.startswith("dilworth:"):
        return dilworth(_words([spec[len("dilworth:"):]]))
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"{spec!r} is neither a preset ({', '.join(PRESETS)}) nor a file")
    try:
        return load_table(path.read_text())
    except (MonoidError, json.JSONDecodeError) as exc:
        raise OSError(f"{spec}: {exc}") from None


def load_monoid(specs):
    specs = [specs] if isinstance(specs, str) else list(specs)
    M = _one_monoid(specs[0])
    for s in specs[1:]:
        M = direct_product(M, _one_monoid(s))
    return M


def _report(args, result: dict, bounds: dict):
    if not getattr(args, "json", None):
        return
    doc = {
        "tool": "nfbmonoids",
        "version": __version__,
        "command": list(args.argv),
        "bounds": bounds,
        "result": result,
    }
    Path(args.json).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# ------------------------------------------------------------------- verbs

def cmd_build(args, out):
    picked = [x for x in ("preset", "dilworth", "reflexive", "triangular", "product")
              if getattr(args, x) is not None]
    if len(picked) != 1:
        raise UsageError("build needs exactly one of --preset, --dilworth, --reflexive, "
                         "--triangular, --product")
    if args.preset:
        M = preset(args.preset)
    elif args.dilworth:
        M = dilworth(_words(args.dilworth))
    elif args.reflexive:
        M = reflexive_relations(args.reflexive)
    elif args.triangular:
        M = triangular_boolean(args.triangular, unit_diagonal=args.unit_diagonal)
    else:
        M = load_monoid(args.product)
    doc = save_table(M)
    print(f"{M.name}: order {M.order}, identity "
          f"{M.names[M.identity] if M.identity is not None else 'none'}, zero "
          f"{M.names[M.zero] if M.zero is not None else 'none'}", file=out)
    if args.out:
        Path(args.out).write_text(json.dumps(doc) + "\n")
        print(f"wrote {args.out}", file=out)
    return 0


def cmd_check_identity(args, out):
    M = load_monoid(args.monoid)
    ident = parse_identity(args.identity)
    v = satisfies(M, ident, args.cap, args.workers, method=args.method)
    print(v.describe(M), file=out)
    _report(args, v.to_json(M), {"cap": args.cap})
    return 0 if v.holds else 1


def cmd_isoterm(args, out):
    M = load_monoid(args.monoid)
    u = parse_word(args.word)
    iv = is_isoterm(M, u, args.bound, args.cap, args.workers)
    print(iv.describe(), file=out)
    _report(args, iv.to_json(), {"bound": iv.bound, "cap": args.cap})
    return {"Isoterm": 0, "NotIsoterm": 1, "IsotermUpToBound": 2}[iv.status]


def cmd_class(args, out):
    M = load_monoid(args.monoid)
    u = parse_word(args.word)
    members = equivalence_class(M, u, args.bound, args.cap, args.workers)
    for v in members:
        print(render(v), file=out)
    print(f"{len(members)} word(s) up to length {args.bound}", file=out)
    _report(args, {"word": render(u), "members": [render(v) for v in members]},
            {"bound": args.bound, "cap": args.cap})
    return 2


def cmd_subwords(args, out):
    prof = scattered_subwords(parse_word(args.u), args.m)
    for w in prof.subwords:
        print(render(w), file=out)
    _report(args, {"word": args.u, "subwords": [render(w) for w in prof.subwords]},
            {"m": args.m})
    return 0


def cmd_jm(args, out):
    u, v = parse_word(args.u), parse_word(args.v)
    same = jm_equivalent(u, v, args.m)
    verdict = "equivalent" if same else "not equivalent"
    print(f"{render(u)} and {render(v)} are {verdict} at m={args.m}", file=out)
    if not same:
        pu, pv = set(scattered_subwords(u, args.m).subwords), set(scattered_subwords(v, args.m).subwords)
        diff = sorted(pu ^ pv, key=lambda w: (len(w), w))[0]
        print(f"distinguishing subword: {render(diff)}", file=out)
    _report(args, {"equivalent": same}, {"m": args.m})
    return 0 if same else 1


def cmd_nfb(args, out):
    if args.condition == "alg":
        if not args.words or args.m is None:
            raise UsageError("--condition alg needs --words and --m")
        rep = check_corollary_alg(_words(args.words), args.m)
        print(f"{rep.status}: {rep.name} ({rep.detail})", file=out)
        _report(args, rep.to_json(), {"m": args.m})
        return 0 if rep.status == "pass" else 1
    if not args.monoid:
        raise UsageError(f"--condition {args.condition} needs --monoid")
    M = load_monoid(args.monoid)
    rep = verify(args.condition, M, k=args.k, m=args.m, n_range=(args.n_min, args.n_max),
                 bound=args.bound, workers=args.workers)
    print(rep.describe(), file=out)
    _report(args, rep.to_json(), {"n_min": args.n_min, "n_max": args.n_max, "bound": args.bound})
    if not rep.passed:
        return 1
    return 2 if any(r.status == "bounded-pass" for r in rep.reports) else 0


def cmd_scheme(args, out):
    params = {k: getattr(args, k) for k in ("n", "m", "k") if getattr(args, k) is not None}
    s = scheme(args.scheme, **params)
    result = generate(s)
    for ident in result.identities:
        print(str(ident), file=out)
    for w in result.words:
        print(render(w), file=out)
    W = sorted(isoterm_words(s), key=lambda w: (len(w), w))
    if args.words and W:
        print("W: " + ", ".join(render(w) for w in W), file=out)
    _report(args, {
        "scheme": str(s),
        "identities": [str(i) for i in result.identities],
        "words": [render(w) for w in result.words],
        "isoterm_words": [render(w) for w in W],
        "variable_roles": result.variable_roles,
        "convention_dependent": result.convention_dependent,
    }, params)
    return 0


# ------------------------------------------------------------------ parser

def _add_build(sub):
    p = sub.add_parser("build", help="construct a monoid and save its table")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--dilworth", nargs="+", metavar="WORD",
                   help="words of W (comma separated or @file)")
    p.add_argument("--reflexive", type=int, metavar="K")
    p.add_argument("--triangular", type=int, metavar="K")
    p.add_argument("--unit-diagonal", action="store_true")
    p.add_argument("--product", nargs=2, metavar=("F1", "F2"))
    p.add_argument("--out", help="JSON table file to write")
    p.set_defaults(func=cmd_build)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="write a structured report")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--cap", type=float, default=None, help="search cap")

    parser = _Parser(prog="nfbmonoids", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"nfbmonoids {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    _add_build(sub)
    monoid = sub.add_parser("monoid", help="monoid construction")
    _add_build(monoid.add_subparsers(dest="action", required=True, parser_class=_Parser))

    p = sub.add_parser("check-identity", parents=[common], help="decide M |= u = v")
    p.add_argument("--monoid", nargs="+", required=True)
    p.add_argument("--identity", required=True)
    p.add_argument("--method", choices=["auto", "brute"], default="auto")
    p.set_defaults(func=cmd_check_identity, cap_default=ASSIGNMENT_CAP)

    p = sub.add_parser("isoterm", parents=[common], help="is a word an isoterm")
    p.add_argument("--monoid", nargs="+", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--bound", type=int)
    p.set_defaults(func=cmd_isoterm, cap_default=SPACE_CAP)

    p = sub.add_parser("class", parents=[common], help="bounded equivalence class of a word")
    p.add_argument("--monoid", nargs="+", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--bound", type=int, required=True)
    p.set_defaults(func=cmd_class, cap_default=SPACE_CAP)

    p = sub.add_parser("subwords", parents=[common], help="scattered subwords up to length m")
    p.add_argument("--u", required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_subwords)

    p = sub.add_parser("jm", parents=[common], help="compare scattered subwords up to length m")
    p.add_argument("--u", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_jm)

    nfb = sub.add_parser("nfb", help="verify sufficient-condition hypotheses")
    nsub = nfb.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = nsub.add_parser("verify", parents=[common])
    p.add_argument("--condition", choices=CONDITIONS, required=True)
    p.add_argument("--monoid", nargs="+")
    p.add_argument("--words", nargs="+", help="word set W for --condition alg")
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--bound", type=int)
    p.set_defaults(func=cmd_nfb)

    p = sub.add_parser("scheme", parents=[common], help="expand an identity scheme")
    p.add_argument("--scheme", choices=list(PARAMS), required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--words", action="store_true", help="also print the isoterm word set")
    p.set_defaults(func=cmd_scheme)
    return parser


def run(argv=None, out=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        args.argv = argv
        if hasattr(args, "cap"):
            args.cap = int(args.cap) if args.cap is not None else getattr(args, "cap_default", None)
        return args.func(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WordSyntaxError, MonoidError, KeyError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
