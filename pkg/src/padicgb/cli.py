"""Command line interface: ``padicgb <command> ...`` (or ``python3 -m padicgb``).

Exit codes: 0 success, 1 bad input or usage, 2 structure/precision failure
(including failed lift verification), 3 precision ambiguity.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

from . import __version__
from .errors import (
    LiftVerificationFailure, LMInstability, PadicGBError, ParseError, PrecisionError,
    StructureOrPrecisionFailure,
)
from .experiments import METHODS, ExperimentConfig, format_stats, run_experiment
from .f5core import macaulay_bound, prec_mac, prec_mf5
from .textio import SCHEMA, dumps, poly_to_json, read_system, result_from_json, result_to_json

INF = math.inf
EXIT_INPUT, EXIT_FAILURE, EXIT_AMBIGUOUS = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _prec(text):
    if text in ("inf", "exact"):
        return INF
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("precision must be positive")
    return v


def _degrees(text):
    try:
        out = [int(x) for x in text.replace("[", "").replace("]", "").split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree list {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("degrees must be positive")
    return out


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", choices=["qp", "fpt"], help="Q_p or F_p((t)) (default: header, else qp)")
    common.add_argument("--p", type=int, help="the prime")
    common.add_argument("--prec", type=_prec, help="entry precision (or 'inf')")
    common.add_argument("--order", choices=["grevlex", "lex"])
    common.add_argument("--degree-cap", type=int, dest="D", help="degree bound D (default: Macaulay bound)")
    common.add_argument("--method", choices=sorted(METHODS), default="mf5")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", choices=["json", "text"], default="text", help="output format")
    common.add_argument("-o", "--output", help="write to this file instead of stdout")

    ap = _Parser(prog="padicgb", description="Approximate Gröbner bases over p-adics and power series.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gb", parents=[common], help="approximate Gröbner basis of an input file")
    p.add_argument("file")
    p = sub.add_parser("prec", parents=[common], help="precision bounds prec_MF5 and prec_Mac")
    p.add_argument("file")
    p = sub.add_parser("lift", parents=[common], help="lift a saved gb result to higher precision")
    p.add_argument("result", help="JSON document written by 'gb --out json'")
    p.add_argument("--to", type=_prec, default=INF, help="target precision (default: inf, exact)")
    p.add_argument("--input", help="input file with the generators at the target precision")
    p = sub.add_parser("diff", parents=[common], help="direct / difference / differential comparison")
    p.add_argument("file", nargs="?", help="exact system (otherwise random systems from --degrees)")
    p.add_argument("--degrees", type=_degrees)
    p.add_argument("--trials", type=int, default=10)
    p = sub.add_parser("experiment", parents=[common], help="precision-loss statistics on random systems")
    p.add_argument("--degrees", type=_degrees, required=True)
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--nvars", type=int, dest="n")
    p = sub.add_parser("oracle", parents=[common], help="exact reduced Gröbner basis (Buchberger)")
    p.add_argument("file")
    p.add_argument("--modular", action="store_true", help="work over F_p instead of Q")
    return ap


def _emit(args, doc, text):
    out = dumps(doc) if args.out == "json" else text.rstrip("\n") + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _read(args):
    return read_system(args.file, field=args.field, p=args.p, prec=args.prec, order=args.order)


def _cap(args, F):
    return args.D if args.D is not None else macaulay_bound([f.degree() for f in F])


def cmd_gb(args):
    sysin = _read(args)
    F = sysin.F
    res = METHODS[args.method](F, _cap(args, F), track=True)
    doc = result_to_json(sysin, res, args.method)
    ring = sysin.ring
    lines = ["G = ("] + [f"  {g}," for g in res.G] + [")"]
    lines.append("M = [")
    for row in res.M:
        lines.append("  [" + ", ".join(str(a) for a in row) + "],")
    lines.append("]")
    lines.append("leading monomials: " + ", ".join(ring.monomial_str(m) for m in res.lms))
    lines.append(f"bound ({'prec_Mac' if args.method == 'matrix' else 'prec_MF5'}): {res.report.bound}")
    lines.append(f"realized loss: {res.realized_loss}")
    _emit(args, doc, "\n".join(lines))
    return 0


def cmd_prec(args):
    sysin = _read(args)
    F = sysin.F
    D = _cap(args, F)
    a, b = prec_mf5(F, D), prec_mac(F, D)
    doc = {"schema": SCHEMA, "command": "prec", "degree_cap": D, "prec_mf5": a, "prec_mac": b}
    _emit(args, doc, f"prec_MF5 = {a}\nprec_Mac = {b}")
    return 0


def cmd_lift(args):
    from .lifting import LiftRequest, weak_lift

    with open(args.result, encoding="utf-8") as fh:
        try:
            saved = result_from_json(json.load(fh))
        except (json.JSONDecodeError, KeyError) as exc:
            raise ParseError(f"not a gb result: {exc}") from None
    if saved.M is None:
        raise ParseError("the saved result has no coordinates")
    if saved.prec == INF:
        raise ParseError("the saved result is already exact")
    F = saved.source
    if args.input:
        ctx = saved.ring.domain
        F = read_system(args.input, field="qp" if ctx.is_padic else "fpt", p=ctx.p,
                        order=saved.ring.order.kind).F
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = weak_lift(LiftRequest(F, saved.G, saved.M, saved.prec, args.to, saved.bound))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    doc = {
        "schema": SCHEMA, "command": "lift", "target": None if args.to == INF else args.to,
        "basis": [poly_to_json(g) for g in res.G], "basis_text": [str(g) for g in res.G],
        "M": [[poly_to_json(a) for a in row] for row in res.M],
    }
    G = res.to_rational() if args.to == INF else res.G
    _emit(args, doc, "G = (\n" + "".join(f"  {g},\n" for g in G) + ")")
    return 0


def cmd_diff(args):
    from .sensitivity import compare_methods, compare_trial, format_table

    k = 30 if args.prec is None or args.prec == INF else args.prec
    if args.file:
        import random

        sysin = read_system(args.file, field=args.field, p=args.p, order=args.order)
        F = sysin.source
        recs = [compare_trial(F, k, _cap(args, F), rng=random.Random(f"{args.seed}/{t}"), trial=t)
                for t in range(args.trials)]
        head = None
    else:
        if not args.degrees or args.p is None:
            raise ParseError("give an input file or --degrees and --p")
        D = args.D if args.D is not None else macaulay_bound(args.degrees)
        recs = compare_methods(args.degrees, D, args.p, trials=args.trials, k=k, seed=args.seed,
                               order=args.order or "grevlex")
        head = (args.degrees, D, args.p)
    doc = {"schema": SCHEMA, "command": "diff", "k": k, "trials": [r.to_json() for r in recs]}
    _emit(args, doc, format_table(recs, *(head or (None, None, None))))
    return 0


def cmd_experiment(args):
    if args.p is None:
        raise ParseError("--p is required")
    D = args.D if args.D is not None else macaulay_bound(args.degrees)
    prec = 30 if args.prec is None else args.prec
    if prec == INF:
        raise ParseError("experiments need a finite precision")
    try:
        cfg = ExperimentConfig(degrees=args.degrees, D=D, p=args.p, trials=args.trials, prec=prec,
                               n=args.n, order=args.order or "grevlex", seed=args.seed,
                               method=args.method, field=args.field or "qp")
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    stats, recs = run_experiment(cfg)
    doc = {"schema": SCHEMA, "command": "experiment",
           "config": {k: getattr(cfg, k) for k in ("degrees", "D", "p", "trials", "prec", "n",
                                                   "order", "seed", "method", "field")},
           "stats": stats.to_json(), "trials": [r.to_json() for r in recs]}
    _emit(args, doc, format_stats(cfg, stats))
    return 0


def cmd_oracle(args):
    from .oracle import buchberger_reduced
    from .polyring import PrimeField

    sysin = read_system(args.file, field=args.field, p=args.p, order=args.order)
    if not all(f.is_exact() for f in sysin.source):
        raise ParseError("the oracle needs exact coefficients")
    if not sysin.ring.domain.is_padic and not args.modular:
        raise ParseError("power series inputs need --modular")
    dom = PrimeField(sysin.ring.domain.p) if args.modular else None
    G = buchberger_reduced(sysin.source, domain=dom)
    doc = {"schema": SCHEMA, "command": "oracle", "basis_text": [str(g) for g in G],
           "leading_monomials": [list(g.leading_monomial()) for g in G]}
    _emit(args, doc, "G = (\n" + "".join(f"  {g},\n" for g in G) + ")")
    return 0


COMMANDS = {"gb": cmd_gb, "prec": cmd_prec, "lift": cmd_lift, "diff": cmd_diff,
            "experiment": cmd_experiment, "oracle": cmd_oracle}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ParseError, OSError) as exc:
        print(f"padicgb: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (StructureOrPrecisionFailure, LiftVerificationFailure, LMInstability) as exc:
        print(f"padicgb: failure: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except PrecisionError as exc:
        print(f"padicgb: ambiguous: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS
    except (PadicGBError, ValueError) as exc:
        print(f"padicgb: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
