"""Command line interface.

Exit codes: 0 success (identity / pinch holds / reduction solved), 1 negative
result (counterexample / pinch fails / residual), 2 usage or input error,
3 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .ff import DEFAULT_MAX_Q, FieldError, field_make, field_of_order
from .freealg import PRESETS, ParseError, UnknownPreset, enumerate_spanning_family, parse_poly
from .gralg import DEFAULT_EXHAUSTIVE_CAP, CapExceeded, GradingError, check_identity, grading
from .tideal import (
    CACHE_ENV,
    DEFAULT_SCHEDULE_DEPTH,
    DEFAULT_WINDOW_CAP,
    ClosureCache,
    TruncationWindow,
    WindowError,
    WindowIndex,
    closure,
    normal_form,
    presentation,
)
from .verify import DEFAULT_WINDOWS, VerificationConfig, degree_table, verify_basis

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def default_cache_dir() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "gradedpi"


def _cache_dir(args) -> str | bool:
    if getattr(args, "no_cache", False):
        return False
    return str(args.cache_dir or os.environ.get(CACHE_ENV) or default_cache_dir())


# -- shared flags ------------------------------------------------------------------

def _add_field(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--field", type=int, metavar="Q", help="field order q = p^k")
    g.add_argument("--prime", type=int, metavar="P", help="field characteristic (use with --ext)")
    p.add_argument("--ext", type=int, default=1, metavar="K", help="extension degree with --prime (default 1)")
    p.add_argument("--max-field", type=int, default=DEFAULT_MAX_Q, metavar="Q", help=f"largest allowed q (default {DEFAULT_MAX_Q})")


def _add_window(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", required=True, help=" | ".join(PRESETS))
    p.add_argument("--yvars", type=int, help="number of even variables m")
    p.add_argument("--zvars", type=int, help="number of odd variables n")
    p.add_argument("--max-deg", type=int, help="maximal total degree d")


def _add_closure(p: argparse.ArgumentParser) -> None:
    p.add_argument("--schedule-depth", type=int, default=DEFAULT_SCHEDULE_DEPTH, help="largest sum length in substitutions")
    p.add_argument("--window-cap", type=int, default=DEFAULT_WINDOW_CAP, help="largest ambient dimension")
    p.add_argument("--cache-dir", help=f"closure cache directory (default ${CACHE_ENV} or {default_cache_dir()})")
    p.add_argument("--no-cache", action="store_true", help="do not read or write the closure cache")


def _field(args):
    if args.field is not None:
        if args.ext != 1:
            raise UsageError("--ext only applies with --prime")
        return field_of_order(args.field, max_q=args.max_field)
    return field_make(args.prime, args.ext, max_q=args.max_field)


def _preset(name: str) -> str:
    if name not in PRESETS:
        raise UnknownPreset(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")
    return name


def _window(args) -> TruncationWindow:
    m, n, d = DEFAULT_WINDOWS[args.preset][0]
    m = m if args.yvars is None else args.yvars
    n = n if args.zvars is None else args.zvars
    d = d if args.max_deg is None else args.max_deg
    return TruncationWindow(m, n, d)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------------------

def cmd_check_identity(args) -> int:
    spec = _field(args)
    if (args.preset is None) == (args.grading is None):
        raise UsageError("give exactly one of --preset or --grading")
    grad = grading(args.preset if args.preset is not None else args.grading)
    f = parse_poly(args.poly, spec)
    v = check_identity(f, grad, args.mode, samples=args.samples, seed=args.seed, cap=args.cap)
    if args.json:
        out = {
            "identity": v.identity, "mode": v.mode, "exact": v.exact, "evaluations": v.evaluations,
            "seed": v.seed, "polynomial": str(f), "grading": list(grad.degs), "field": spec.q,
        }
        if not v.identity:
            out["counterexample"] = {str(k): [list(e) for e in m.nonzero_entries()] for k, m in sorted(v.counterexample.items())}
            out["value"] = [list(e) for e in v.value.nonzero_entries()]
        _emit(json.dumps(out, indent=2) + "\n", None)
    else:
        lines = [f"polynomial: {f}", f"grading: {grad} over GF({spec.q})"]
        if v.identity:
            lines.append(v.describe())
        else:
            lines.append(f"counterexample ({v.mode}, after {v.evaluations} evaluations)")
            for var, m in sorted(v.counterexample.items()):
                lines.append(f"  {var} = {m}")
            lines.append(f"  value = {v.value}")
        _emit("\n".join(lines) + "\n", None)
    return EXIT_OK if v.identity else EXIT_NEGATIVE


def cmd_verify_basis(args) -> int:
    spec = _field(args)
    preset = _preset(args.preset)
    config = VerificationConfig(
        preset, spec, _window(args),
        exhaustive_cap=args.exhaustive_cap, samples=args.samples, seed=args.seed,
        schedule_depth=args.schedule_depth, window_cap=args.window_cap,
        cache_dir=_cache_dir(args), threads=args.threads, timings=args.timings,
        inclusion=not args.skip_inclusion,
    )
    report = verify_basis(config)
    _emit(report.to_json() if args.json else report.to_text(), args.output)
    ok = report.pinch and (report.inclusion_ok or not config.inclusion)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _closure_for(args, spec, window):
    return closure(
        presentation(args.preset, spec), window, args.schedule_depth,
        cap=args.window_cap, cache_dir=_cache_dir(args),
    )


def cmd_reduce(args) -> int:
    spec = _field(args)
    preset = _preset(args.preset)
    window = _window(args)
    f = parse_poly(args.poly, spec)
    window.check_cap(args.window_cap)
    if not WindowIndex(window).contains(f):
        raise WindowError(f"{f} does not fit the window {window}")
    family = enumerate_spanning_family(preset, spec, window.yvars, window.zvars, window.max_deg)
    comp = _closure_for(args, spec, window)
    nf = normal_form(f, family, comp)
    if args.json:
        out = {
            "polynomial": str(f), "preset": preset, "field": spec.q, "window": [window.yvars, window.zvars, window.max_deg],
            "residual": nf.residual, "terms": [[lab, spec.format_code(c)] for lab, c in nf.terms()],
        }
        _emit(json.dumps(out, indent=2) + "\n", None)
    else:
        _emit(nf.format() + "\n", None)
    return EXIT_NEGATIVE if nf.residual else EXIT_OK


def cmd_dims(args) -> int:
    spec = _field(args)
    preset = _preset(args.preset)
    window = _window(args)
    family = enumerate_spanning_family(preset, spec, window.yvars, window.zvars, window.max_deg)
    comp = _closure_for(args, spec, window)
    table = degree_table(window, comp, family)
    if args.json:
        _emit(json.dumps({"preset": preset, "field": spec.q, "window": [window.yvars, window.zvars, window.max_deg],
                          "by_degree": table, "dim_W": window.dim, "dim_ideal": comp.dim, "family_size": len(family)},
                         indent=2) + "\n", None)
        return EXIT_OK
    cols = ("degree", "words", "ideal", "family", "quotient")
    lines = ["  ".join(f"{c:>8}" for c in cols)]
    for row in table:
        lines.append("  ".join(f"{row[c]:>8}" for c in cols))
    lines.append("  ".join(f"{v:>8}" for v in ("total", window.dim, comp.dim, len(family), window.dim - comp.dim)))
    _emit("\n".join(lines) + "\n", None)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    spec = _field(args)
    preset = _preset(args.preset)
    window = _window(args)
    family = enumerate_spanning_family(preset, spec, window.yvars, window.zvars, window.max_deg)
    if args.json:
        _emit(json.dumps([{"degree": m.degree, "label": m.label} for m in family], indent=2) + "\n", None)
    else:
        _emit("".join(f"{m.degree}\t{m.label}\n" for m in family), None)
    return EXIT_OK


def cmd_cache(args) -> int:
    root = _cache_dir(argparse.Namespace(cache_dir=args.cache_dir, no_cache=False))
    cache = ClosureCache(root)
    if args.action == "path":
        print(root)
    elif args.action == "list":
        for f in cache.entries():
            header = dict(line.split(" ", 1) for line in f.read_text().splitlines() if line and "\t" not in line)
            print(f"{f.name}\t{header.get('label')}\tq={header.get('q')}\twindow={header.get('window')}"
                  f"\tschedule={header.get('schedule')}\trank={header.get('rank')}")
    else:
        print(f"removed {cache.clear()} file(s) from {root}")
    return EXIT_OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gradedpi", description="Graded polynomial identities of small upper triangular matrix algebras over finite fields.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-identity", help="test whether a polynomial is a graded identity")
    _add_field(p)
    p.add_argument("--preset", help="ut2-canonical | ut3-A | ut3-B | trivial:<n>")
    p.add_argument("--grading", help="comma tuple such as 0,1,1")
    p.add_argument("--poly", required=True, help="polynomial text")
    p.add_argument("--mode", choices=("exhaustive", "random"), default="exhaustive")
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP, help="largest exhaustive assignment space")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check_identity)

    p = sub.add_parser("verify-basis", help="certify the spanning family at a truncation window")
    _add_field(p)
    _add_window(p)
    _add_closure(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10**5, help="draws per generator when not exhaustive")
    p.add_argument("--exhaustive-cap", type=int, default=DEFAULT_EXHAUSTIVE_CAP)
    p.add_argument("--skip-inclusion", action="store_true", help="skip the generator identity checks")
    p.add_argument("--threads", type=int, default=1, help="worker threads for inclusion checks")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")
    p.add_argument("--json", action="store_true")
    p.add_argument("--output", "-o", help="write the report to this file")
    p.set_defaults(func=cmd_verify_basis)

    p = sub.add_parser("reduce", help="express a polynomial over the spanning family")
    _add_field(p)
    _add_window(p)
    _add_closure(p)
    p.add_argument("--poly", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("dims", help="per-degree dimension table")
    _add_field(p)
    _add_window(p)
    _add_closure(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("enumerate", help="list the spanning family")
    _add_field(p)
    _add_window(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("cache", help="inspect or clear the closure cache")
    p.add_argument("action", choices=("list", "clear", "path"))
    p.add_argument("--cache-dir")
    p.set_defaults(func=cmd_cache)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "preset", None) and args.command != "check-identity" and args.preset not in PRESETS:
        parser.error(f"unknown preset {args.preset!r}; expected one of {', '.join(PRESETS)}")
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"error: {exc}; shrink the window or raise the cap", file=sys.stderr)
        return EXIT_CAP
    except ParseError as exc:
        print(f"error: cannot parse polynomial: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, FieldError, GradingError, UnknownPreset, WindowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
