"""Command-line interface: eval, zeros, gaps and verify.

Exit codes: 0 success, 1 internal error or failed check, 2 bad arguments or
domain errors (poles, non-definite forms, heights beyond the reliable range).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

from .errors import DomainError, EpsteinError, PrecisionLossError, ResourceError
from .qform import QuadraticForm
from .verify import DEFAULT_FORMS, DEFAULT_SEED, SUITES, run_suite
from .zeros import (STEP_BASE, GapTable, covers, gap_stats, load_zero_table, merge_zero_sets,
                    save_zero_table, scan_zeros, stark_prediction, uncovered)
from .zeta import EvalConfig, zeta_q

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CACHE_ENV = "EPSTEIN_LAB_CACHE"

log = logging.getLogger("epstein_lab")


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("I", "i").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise UsageError(f"cannot parse complex number {text!r}") from None


def parse_range(text: str) -> tuple[float, float]:
    try:
        a, b = (float(p) for p in text.split(":"))
    except ValueError:
        raise UsageError(f"range must look like t0:t1, got {text!r}") from None
    if not (math.isfinite(a) and math.isfinite(b)) or b < a:
        raise UsageError(f"range {text!r} is not well ordered")
    return a, b


def parse_v_list(text: str) -> list[float]:
    try:
        vs = sorted(float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"V list must be comma separated numbers, got {text!r}") from None
    if not vs or vs[0] <= 0:
        raise UsageError("V values must be positive")
    return vs


def read_config_file(path) -> dict[str, str]:
    """key=value lines; '#' starts a comment; keys mirror the long flags."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, "."))


def default_table_path(form: QuadraticForm) -> Path:
    return cache_dir() / f"zeros_{form.a}_{form.b}_{form.c}.csv"


def eval_config(args) -> EvalConfig:
    kw = {"precision": args.precision}
    if getattr(args, "reliable_height", None) is not None:
        kw["reliable_height"] = float(args.reliable_height)
    return EvalConfig(**kw)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def cmd_eval(args) -> int:
    form = QuadraticForm.parse(args.form)
    s = parse_complex(args.s)
    val = zeta_q(form, s, eval_config(args))
    _emit(val.to_record(form))
    return EXIT_OK


def cmd_zeros(args) -> int:
    form = QuadraticForm.parse(args.form)
    t0, t1 = parse_range(args.range)
    config = eval_config(args)
    out = Path(args.out) if args.out else default_table_path(form)
    existing, ranges = [], []
    if args.resume and out.exists():
        stored_form, existing, ranges = load_zero_table(out)
        if stored_form != form:
            raise UsageError(f"{out} holds zeros of form {stored_form}, not {form}")
    todo = uncovered(ranges, t0, t1) if ranges else ([(t0, t1)] if t1 > t0 else [])
    found = [scan_zeros(form, a, b, config, step_base=args.step, workers=args.workers) for a, b in todo]
    zeros = merge_zero_sets(existing, *found)
    ranges = list(ranges) + [(t0, t1)]
    out.parent.mkdir(parents=True, exist_ok=True)
    save_zero_table(out, form, zeros, ranges, args.step)
    in_range = [z for z in zeros if t0 <= z.t <= t1]
    report = {"schema": 1, "form": str(form), "range": [t0, t1], "count": len(in_range),
              "table": str(out), "table_count": len(zeros)}
    if t0 == 0 and t1 >= 3:
        pred = stark_prediction(form, t1)
        report["stark_prediction"] = pred.main
        report["stark_error_scale"] = pred.error_scale
        report["deviation"] = len(in_range) - pred.main
    if in_range:
        report["first_zero"] = in_range[0].t
    _emit(report)
    return EXIT_OK


def gap_bound(T: float, V: float) -> float:
    return 10 * T * math.log(T) / (V * V)


def cmd_gaps(args) -> int:
    form = QuadraticForm.parse(args.form)
    T = float(args.T)
    if not T > 1:
        raise UsageError("T must exceed 1")
    vs = parse_v_list(args.V)
    path = Path(args.table) if args.table else default_table_path(form)
    if not path.exists():
        raise UsageError(f"no zero table at {path}; run 'zeros --range 0:{T:g}' first")
    stored_form, zeros, ranges = load_zero_table(path)
    if stored_form != form:
        raise UsageError(f"{path} holds zeros of form {stored_form}, not {form}")
    if not covers(ranges, 0.0, T):
        raise UsageError(f"zero table {path} does not cover [0, {T:g}]")
    table = GapTable(form, T, zeros)
    rows, ok = [], True
    for V in sorted(vs, reverse=True):
        R = gap_stats(table, V)
        bound = gap_bound(T, V)
        passed = R <= bound and R * V <= T + V
        ok &= passed
        rows.append({"V": V, "R": R, "bound": bound, "trivial_ok": R * V <= T + V, "pass": passed})
    if args.json:
        _emit({"schema": 1, "form": str(form), "T": T, "zeros": len(table.zeros), "rows": rows, "pass": ok})
    else:
        print(f"form {form}  T={T:g}  zeros={len(table.zeros)}")
        print(f"{'V':>10} {'R(V)':>8} {'10 T log T / V^2':>18}  result")
        for r in rows:
            print(f"{r['V']:>10g} {r['R']:>8d} {r['bound']:>18.6g}  {'PASS' if r['pass'] else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)} or all")
    forms = (QuadraticForm.parse(args.form),) if args.form else DEFAULT_FORMS
    config = eval_config(args)
    reports = [run_suite(n, forms, args.seed, config) for n in names]
    for r in reports:
        _emit(r)
    return EXIT_OK if all(r["pass"] for r in reports) else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", choices=("double", "extended"), default="double")
    common.add_argument("--reliable-height", type=float, default=None)

    p = _Parser(prog="epstein-lab", description="Epstein zeta functions of binary quadratic forms.")
    p.add_argument("--config", help="key=value file supplying defaults for the flags")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", parents=[common], help="evaluate zeta_Q(s)")
    e.add_argument("--form", required=True)
    e.add_argument("--s", required=True, help="complex point, e.g. 0.5+14.1i")
    e.set_defaults(func=cmd_eval)

    z = sub.add_parser("zeros", parents=[common], help="scan critical-line zeros")
    z.add_argument("--form", required=True)
    z.add_argument("--range", required=True, help="t0:t1")
    z.add_argument("--step", type=float, default=STEP_BASE, help="grid step base")
    z.add_argument("--out", help="CSV path (default: $EPSTEIN_LAB_CACHE/zeros_a_b_c.csv)")
    z.add_argument("--resume", action="store_true", help="extend an existing table")
    z.add_argument("--workers", type=int, default=1)
    z.set_defaults(func=cmd_zeros)

    g = sub.add_parser("gaps", help="gap statistics R(V) from a zero table")
    g.add_argument("--form", required=True)
    g.add_argument("--T", required=True, type=float)
    g.add_argument("--V", required=True, help="comma separated gap lengths")
    g.add_argument("--table", "--out", dest="table", help="zero table CSV")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=cmd_gaps)

    v = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    v.add_argument("suite", help=f"one of: {', '.join(SUITES)}, all")
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--form", default=None)
    v.set_defaults(func=cmd_verify)
    return p


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = read_config_file(known.config)
    for action in parser._subparsers._group_actions:  # noqa: SLF001
        for sp in action.choices.values():
            dests = {a.dest for a in sp._actions}  # noqa: SLF001
            defaults = {k: v for k, v in values.items() if k in dests}
            for a in sp._actions:  # noqa: SLF001
                if a.dest in defaults:
                    a.required = False
                    if a.type is not None and a.dest in defaults:
                        defaults[a.dest] = a.type(defaults[a.dest])
                    if isinstance(a, argparse._StoreTrueAction):  # noqa: SLF001
                        defaults[a.dest] = str(defaults[a.dest]).lower() in ("1", "true", "yes")
            sp.set_defaults(**defaults)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
    except (OSError, UsageError, ValueError) as exc:
        print(f"epstein-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, or a usage error already reported
        return int(exc.code or 0)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, DomainError, PrecisionLossError, ResourceError) as exc:
        print(f"epstein-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EpsteinError as exc:
        print(f"epstein-lab: failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"epstein-lab: internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
