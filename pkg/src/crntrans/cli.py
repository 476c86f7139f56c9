"""Command-line front end.

Exit codes:
  0  success
  1  usage error (bad flags, missing files, --solve without --x0)
  2  malformed network, translation, rates or state file
  3  a computation cap was exceeded
  4  the translation search found nothing within its budget
  5  the binomial steady-state hypotheses fail, or the numeric solve failed
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import report
from .errors import (
    CapExceededError,
    ConvergenceError,
    HypothesisError,
    NetworkError,
    NotWeaklyReversibleError,
    ParseError,
    TranslationError,
)
from .model import Network, parse_network
from .steady import (
    SIGN_DIM_CAP,
    check_complex_balanced,
    check_multistationarity_condition,
    check_uniqueness_condition,
    require_theorem_hypotheses,
    solve_steady_state,
    verify_steady_state,
)
from .translation import check_resolvability, find_translations, parse_translation, translated_rate_constants

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CAP, EXIT_NO_TRANSLATION, EXIT_HYPOTHESIS = range(6)


class UsageError(Exception):
    pass


class NoTranslationFound(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# input files


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def parse_assignments(text: str, what: str = "value") -> dict[str, Fraction]:
    """``name = value`` lines; values are rationals or decimals, kept exact."""
    out: dict[str, Fraction] = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected '<name> = <{what}>'", ln)
        name, _, val = (p.strip() for p in line.partition("="))
        if not name:
            raise ParseError("missing name", ln, 1)
        if name in out:
            raise ParseError(f"{name!r} assigned twice", ln)
        try:
            out[name] = Fraction(val)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read {val!r} as a number", ln, raw.index("=") + 2) from None
    return out


def load_rates(path: str, net: Network) -> dict[str, Fraction]:
    rates = parse_assignments(_read(path), "rate")
    missing = [s for s in net.rate_symbols if s not in rates]
    if missing:
        raise ParseError(f"rates file lacks {', '.join(missing)}")
    extra = sorted(set(rates) - set(net.rate_symbols))
    if extra:
        raise ParseError(f"rates file names unknown symbols {', '.join(extra)}")
    bad = [s for s in net.rate_symbols if rates[s] <= 0]
    if bad:
        raise ParseError(f"rates must be positive: {', '.join(bad)}")
    return {s: rates[s] for s in net.rate_symbols}


def load_state(path: str, net: Network) -> list[Fraction]:
    vals = parse_assignments(_read(path), "concentration")
    unknown = sorted(set(vals) - set(net.species))
    if unknown:
        raise ParseError(f"state file names unknown species {', '.join(unknown)}")
    missing = [s for s in net.species if s not in vals]
    if missing:
        raise ParseError(f"state file lacks {', '.join(missing)}")
    if any(vals[s] <= 0 for s in net.species):
        raise ParseError("concentrations must be positive")
    return [vals[s] for s in net.species]


# ---------------------------------------------------------------------------
# commands


def _options(args, *names) -> dict:
    return {n: getattr(args, n) for n in names}


def _translation(args, net: Network):
    if getattr(args, "translation", None):
        t, cls = parse_translation(_read(args.translation), net)
        rep = None if cls.proper else check_resolvability(t, cls)
        return [(t, cls, rep)]
    cands = find_translations(net, args.max_orderings, args.max_candidates)
    if not cands:
        raise NoTranslationFound(
            f"no strong zero-deficiency translation within {args.max_orderings} orderings "
            f"and {args.max_candidates} candidates"
        )
    return [(c.translation, c.classification, c.resolvability) for c in cands]


def cmd_analyze(args, net: Network) -> dict:
    return {"network": report.network_section(net), "generators": report.generators_section(net)}


def cmd_generators(args, net: Network) -> dict:
    return {"generators": report.generators_section(net)}


def cmd_translate(args, net: Network) -> dict:
    found = _translation(args, net)
    body = [report.translation_section(*f) for f in found]
    if args.translation:
        return {"translation": body[0]}
    shown = body[: args.show] if args.show else body
    return {"candidates_found": len(body), "candidates": [dict(rank=k, **b) for k, b in enumerate(shown, 1)]}


def cmd_tree_constants(args, net: Network) -> dict:
    rates = load_rates(args.rates, net) if args.rates else None
    return {"tree_constants": report.tree_constants_section(net, rates)}


def _anchors(args, t) -> list[int] | None:
    if not args.anchor:
        return None
    index = {t.network.complex_str(j).replace(" ", ""): j for j in range(t.network.n)}
    out = []
    for a in args.anchor:
        key = a.replace(" ", "")
        if key not in index:
            raise UsageError(f"--anchor {a!r} is not a translated complex")
        out.append(index[key])
    return out


def cmd_steady_states(args, net: Network) -> dict:
    if args.solve and not (args.x0 and args.rates):
        raise UsageError("--solve needs both --rates and --x0")
    rates = load_rates(args.rates, net) if args.rates else None
    x0 = load_state(args.x0, net) if args.x0 else None
    t, cls, rep = _translation(args, net)[0]
    require_theorem_hypotheses(t, cls)
    anchors = _anchors(args, t)
    body: dict = {
        "translation": report.translation_section(t, cls, rep),
        "translated_tree_constants": report.tree_constants_section(t.network),
        "binomials": report.binomials_section(t, rates, anchors),
        "parametrization": report.parametrization_section(t),
    }
    try:
        uniq = check_uniqueness_condition(t, args.sign_dim_cap)
        multi = check_multistationarity_condition(t, args.sign_dim_cap)
        body["sign_conditions"] = report.sign_section(uniq, multi)
    except CapExceededError as exc:
        body["sign_conditions"] = report.sign_section(None, None, f"skipped: {exc}")
    if args.solve:
        sol = solve_steady_state(t, rates, x0, anchors)
        res = verify_steady_state(net, rates, sol.x)
        kt = translated_rate_constants(t, rates)
        kt = {k: float(v) for k, v in kt.items()}
        section = report.residual_section(net, sol.x, res)
        section["newton_iterations"] = sol.iterations
        section["complex_balanced_translated"] = check_complex_balanced(t.translated, kt, list(sol.x))
        body["steady_state"] = section
    return body


def cmd_verify(args, net: Network) -> dict:
    rates = load_rates(args.rates, net)
    x = load_state(args.state, net)
    return {"verification": report.residual_section(net, x, verify_steady_state(net, rates, x))}


COMMANDS = {
    "analyze": cmd_analyze,
    "generators": cmd_generators,
    "translate": cmd_translate,
    "tree-constants": cmd_tree_constants,
    "steady-states": cmd_steady_states,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags(p: argparse.ArgumentParser, defaults: bool) -> None:
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--json", action="store_true", default=d(False), help="emit the JSON report")
    p.add_argument("--seed", type=int, default=d(0), help="seed recorded in the report (default 0)")
    p.add_argument("--max-orderings", type=int, default=d(5040), help="cyclic orderings tried per generator")
    p.add_argument("--max-candidates", type=int, default=d(10000), help="constraint solutions examined by the search")
    p.add_argument("--sign-dim-cap", type=int, default=d(SIGN_DIM_CAP), help="largest m for sign-vector enumeration")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="crntrans", description="Reaction network translation and toric steady states.")
    _global_flags(parser, True)
    common = _Parser(add_help=False)
    _global_flags(common, False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, parents=[common])
        p.add_argument("file", help="network file")
        return p

    add("analyze", "structural summary and extreme currents")
    add("generators", "extreme currents of the current cone")
    p = add("translate", "search for or validate a translation")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--search", action="store_true", help="search (the default)")
    g.add_argument("--translation", metavar="FILE", help="validate a supplied translation")
    p.add_argument("--show", type=int, default=0, metavar="N", help="list only the first N candidates")
    p = add("tree-constants", "tree constants of a weakly reversible network")
    p.add_argument("--rates", metavar="FILE")
    p = add("steady-states", "binomials, parametrization, sign conditions, optional solve")
    p.add_argument("--translation", metavar="FILE", help="use this translation instead of searching")
    p.add_argument("--rates", metavar="FILE")
    p.add_argument("--x0", metavar="FILE", help="state fixing the compatibility class")
    p.add_argument("--solve", action="store_true", help="solve for the steady state in the class of x0")
    p.add_argument("--anchor", action="append", metavar="COMPLEX", help="translated anchor complex, one per class")
    p = add("verify", "residuals of a candidate steady state")
    p.add_argument("--rates", metavar="FILE", required=True)
    p.add_argument("--state", metavar="FILE", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out, err = sys.stdout, sys.stderr
    try:
        net = parse_network(_read(args.file))
        body = COMMANDS[args.command](args, net)
    except UsageError as exc:
        print(f"crntrans: error: {exc}", file=err)
        return EXIT_USAGE
    except (ParseError, NetworkError, TranslationError) as exc:
        print(f"crntrans: invalid input: {exc}", file=err)
        return EXIT_PARSE
    except CapExceededError as exc:
        print(f"crntrans: cap exceeded: {exc}", file=err)
        return EXIT_CAP
    except NoTranslationFound as exc:
        print(f"crntrans: {exc}", file=err)
        return EXIT_NO_TRANSLATION
    except (HypothesisError, NotWeaklyReversibleError) as exc:
        print(f"crntrans: hypothesis failed: {exc}", file=err)
        return EXIT_HYPOTHESIS
    except ConvergenceError as exc:
        print(f"crntrans: steady-state solve failed: {exc}", file=err)
        return EXIT_HYPOTHESIS
    meta = _options(args, "seed", "max_orderings", "max_candidates", "sign_dim_cap")
    doc = report.envelope(args.command, {"file": Path(args.file).name, **body}, meta)
    out.write(report.to_json(doc) if args.json else report.to_text(doc))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
