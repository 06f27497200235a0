"""Command-line front end: ``verify``, ``list`` and ``dump``.

Exit codes: 0 when every requested verification matches, 1 on any mismatch,
2 on usage errors, unknown names or engine errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Sequence

from .identities import (
    REGISTRY,
    IdentityReport,
    StabilizationError,
    UnknownIdentityError,
    ag_product,
    format_mono,
    gordon_series,
    parse_mono,
    side_series,
    verify,
)
from .qcore import IndeterminateError, NotInvertibleError, PoleError, QSeries, fmt_exp, poch_inf, to_half

EXIT_MATCH, EXIT_MISMATCH, EXIT_ERROR = 0, 1, 2

# flag destination -> identity parameter name
FLAG_PARAMS = {"n": "n", "N": "N", "delta": "delta", "k": "k", "i": "i", "seed": "seed", "shell_cap": "shell_cap"}
# config keys that are run options rather than identity parameters
RUN_KEYS = {"order", "format", "jobs"}


class UsageError(Exception):
    """Invalid command line or configuration."""


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------


def rational(x) -> str:
    """Exact rational as "p/q" (always with a denominator)."""
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def exponent(h: int) -> str:
    """Half-unit exponent h as "h/2"."""
    return f"{h}/2"


def series_block(s: QSeries | None) -> dict | None:
    """Dense coefficient array from the lowest tracked exponent up to the order.

    ``start`` and ``step`` are exponents in "h/2" form; the step is 1 when every
    exponent is integral and 1/2 otherwise.
    """
    if s is None:
        return None
    exps = [e for e, _ in s.items()]
    step = 2 if all(e % 2 == 0 for e in exps) else 1
    start = min(exps + [0]) if exps else 0
    if step == 2 and start % 2:
        start -= 1
    stop = s.order if s.order is not None else (max(exps) if exps else 0)
    coeffs = [rational(s.coefficient(Fraction(e, 2))) for e in range(start, stop + 1, step)]
    return {"coeffs": coeffs, "start": exponent(start), "step": exponent(step)}


def _json_value(v: Any):
    if isinstance(v, tuple):
        return [_json_value(x) for x in v]
    if isinstance(v, Fraction):
        return rational(v)
    return v


def report_to_dict(r: IdentityReport) -> dict:
    mm = None
    if r.first_mismatch is not None:
        e, a, b = r.first_mismatch
        mm = {"exp": exponent(e), "lhs": rational(a), "rhs": rational(b)}
    out = {
        "name": r.name,
        "params": {k: _json_value(v) for k, v in sorted(r.params.items())},
        "status": r.status,
        "verified_order": None if r.verified_order is None else exponent(r.verified_order),
        "first_mismatch": mm,
        "terms": {"lhs": series_block(r.lhs), "rhs": series_block(r.rhs)},
        "millis": int(round(r.elapsed * 1000)),
    }
    if r.failed_check:
        out["failed_check"] = r.failed_check
    if r.message:
        out["message"] = r.message
    return out


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, so that load + dump is byte-stable."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def report_text(r: IdentityReport) -> str:
    shown = " ".join(f"{k}={_text_value(v)}" for k, v in sorted(r.params.items()))
    head = f"{r.name} [{shown}]"
    if r.status == "match":
        return (f"{head}: match to q^{fmt_exp(r.verified_order)} "
                f"({len(r.checks)} checks, {r.term_counts[0]}/{r.term_counts[1]} terms, {r.elapsed:.2f}s)")
    if r.status == "mismatch":
        if r.first_mismatch is None:
            return f"{head}: mismatch in '{r.failed_check}'"
        e, a, b = r.first_mismatch
        return f"{head}: mismatch in '{r.failed_check}' at q^{fmt_exp(e)}: lhs {a}, rhs {b}"
    return f"{head}: error: {r.message}"


def _text_value(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(str(x) for x in v) + ")"
    return str(v)


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------


def read_config(path: str) -> dict[str, str]:
    """Line-oriented key=value file; blank lines and lines starting with '#' are skipped."""
    out: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for num, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{num}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def _order(text) -> Fraction:
    try:
        f = Fraction(str(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid order {text!r}") from None
    if f < 0 or (2 * f).denominator != 1:
        raise argparse.ArgumentTypeError("order must be a non-negative multiple of 1/2")
    return f


def _positive(text) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, help="rank n")
    p.add_argument("--N", type=int, help="chain length N")
    p.add_argument("--delta", type=int, help="specialisation delta in {0, 1}")
    p.add_argument("--k", type=int, help="Andrews-Gordon modulus parameter k")
    p.add_argument("--i", type=int, help="Andrews-Gordon residue parameter i")
    p.add_argument("--order", type=_order, help="truncation order T in q")
    p.add_argument("--format", choices=("text", "json"), default=None)
    p.add_argument("--shell-cap", dest="shell_cap", type=int, help="largest lattice shell before giving up")
    p.add_argument("--seed", type=int, help="seed for sampled specialisations")
    p.add_argument("--config", help="key=value file with the same keys as the flags")
    p.add_argument("--set", dest="sets", action="append", default=[], metavar="KEY=VALUE",
                   help="identity-specific parameter (repeatable), e.g. --set z=-q")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qbailey", description="Exact q-series verification of multilateral Bailey lemma identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify registry identities")
    v.add_argument("names", nargs="+", help="identity names, or 'all'")
    v.add_argument("--jobs", type=_positive, default=None, help="parallel worker processes")
    v.add_argument("--grid", action="store_true", help="run each identity over its default parameter grid")
    _add_common(v)

    ls = sub.add_parser("list", help="list the identity registry")
    ls.add_argument("--filter", default="", help="prefix of a name token, e.g. ag or rr")
    ls.add_argument("--format", choices=("text", "json"), default="text")

    d = sub.add_parser("dump", help="print the coefficients of a named series")
    d.add_argument("expr", help="poch_inf | ag_product | gordon_gf | side")
    d.add_argument("--base", default="q", help="base of poch_inf, a monomial c*q^e")
    d.add_argument("--identity", help="registry name for 'side'")
    d.add_argument("--side", choices=("lhs", "rhs"), default="lhs")
    _add_common(d)
    return parser


def _merged(args: argparse.Namespace) -> tuple[dict[str, str], dict[str, Any]]:
    """(identity parameter overrides, run options) from config, flags and --set, later winning."""
    params: dict[str, Any] = {}
    run: dict[str, Any] = {}
    if getattr(args, "config", None):
        for key, value in read_config(args.config).items():
            if key in RUN_KEYS:
                run[key] = value
            else:
                params[FLAG_PARAMS.get(key, key)] = value
    for dest, pname in FLAG_PARAMS.items():
        val = getattr(args, dest, None)
        if val is not None:
            params[pname] = val
    for item in getattr(args, "sets", []) or []:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        params[key.strip()] = value.strip()
    if getattr(args, "order", None) is not None:
        run["order"] = args.order
    if getattr(args, "format", None) is not None:
        run["format"] = args.format
    if getattr(args, "jobs", None) is not None:
        run["jobs"] = args.jobs
    run.setdefault("format", "text")
    if run["format"] not in ("text", "json"):
        raise UsageError("format must be text or json")
    if "order" in run:
        try:
            run["order"] = _order(run["order"])
        except argparse.ArgumentTypeError as exc:
            raise UsageError(str(exc)) from None
    run["jobs"] = int(run.get("jobs", 1))
    if run["jobs"] < 1:
        raise UsageError("jobs must be >= 1")
    return params, run


def _params_for(name: str, overrides: dict, strict: bool) -> dict:
    schema = REGISTRY[name].schema
    unknown = [k for k in overrides if k not in schema]
    if strict and unknown:
        raise UsageError(f"{name} does not take parameter(s): {', '.join(sorted(unknown))}")
    return {k: v for k, v in overrides.items() if k in schema}


def _run_one(job: tuple[str, dict, Any]) -> IdentityReport:
    name, params, order = job
    return verify(name, params, order)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_verify(args: argparse.Namespace, out) -> int:
    overrides, run = _merged(args)
    names = list(REGISTRY) if args.names == ["all"] else args.names
    for name in names:
        if name not in REGISTRY:
            raise UsageError(f"unknown identity {name!r}")
    strict = len(names) == 1
    jobs = []
    for name in names:
        base = _params_for(name, overrides, strict)
        grid = REGISTRY[name].grid if args.grid and REGISTRY[name].grid else ({},)
        for point in grid:
            params = dict(point)
            params.update(base)
            jobs.append((name, params, run.get("order")))
    try:
        if run["jobs"] > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=run["jobs"]) as pool:
                reports = list(pool.map(_run_one, jobs))
        else:
            reports = [_run_one(j) for j in jobs]
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    if run["format"] == "json":
        payload = [report_to_dict(r) for r in reports]
        out.write(dumps(payload[0] if len(payload) == 1 else payload) + "\n")
    else:
        for r in reports:
            out.write(report_text(r) + "\n")
    if any(r.status == "error" for r in reports):
        for r in reports:
            if r.status == "error":
                print(f"error: {r.name}: {r.message}", file=sys.stderr)
        return EXIT_ERROR
    if any(r.status == "mismatch" for r in reports):
        return EXIT_MISMATCH
    return EXIT_MATCH


def spec_summary(name: str) -> dict:
    spec = REGISTRY[name]
    return {
        "name": name,
        "summary": spec.summary,
        "params": dict(sorted(spec.schema.items())),
        "defaults": {k: _json_value(format_mono(v) if hasattr(v, "half") else v)
                     for k, v in sorted(spec.defaults.items())},
        "grid": [{k: _json_value(v) for k, v in sorted(p.items())} for p in spec.grid],
    }


def _matches(name: str, pattern: str) -> bool:
    """A filter matches when some underscore-separated token of the name starts with it."""
    if not pattern:
        return True
    return name.startswith(pattern) or any(tok.startswith(pattern) for tok in name.split("_"))


def cmd_list(args: argparse.Namespace, out) -> int:
    rows = [spec_summary(n) for n in REGISTRY if _matches(n, args.filter)]
    if args.format == "json":
        out.write(dumps(rows) + "\n")
        return EXIT_MATCH
    for row in rows:
        schema = ", ".join(f"{k}:{v}" for k, v in row["params"].items())
        out.write(f"{row['name']:<30} {row['summary']}\n")
        out.write(f"{'':<30} params: {schema}\n")
        grid = "; ".join(" ".join(f"{k}={v}" for k, v in p.items()) for p in row["grid"]) or "defaults"
        out.write(f"{'':<30} grid: {grid}\n")
    return EXIT_MATCH


def cmd_dump(args: argparse.Namespace, out) -> int:
    overrides, run = _merged(args)
    order = run.get("order", Fraction(10))
    h = to_half(order)
    expr = args.expr
    if expr == "poch_inf":
        try:
            base = parse_mono(args.base)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --base: {exc}") from None
        if base.half <= 0:
            raise UsageError("poch_inf needs a base of positive q-valuation")
        series = poch_inf(base, h).lower(h)
    elif expr in ("ag_product", "gordon_gf"):
        k, i = overrides.get("k"), overrides.get("i")
        if k is None or i is None:
            raise UsageError(f"{expr} needs --k and --i")
        try:
            fn = ag_product if expr == "ag_product" else gordon_series
            series = fn(int(k), int(i), order)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    elif expr == "side":
        if not args.identity:
            raise UsageError("side needs --identity")
        if args.identity not in REGISTRY:
            raise UsageError(f"unknown identity {args.identity!r}")
        params = _params_for(args.identity, overrides, True)
        try:
            series = side_series(args.identity, args.side, params, order)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        raise UsageError(f"unknown expression {expr!r}")
    block = series_block(series)
    if run["format"] == "json":
        out.write(dumps({"expr": expr, "order": exponent(h), "series": block}) + "\n")
        return EXIT_MATCH
    start, step = int(block["start"][:-2]), int(block["step"][:-2])
    for idx, c in enumerate(block["coeffs"]):
        f = Fraction(c)
        out.write(f"{fmt_exp(start + idx * step)} {f}\n")
    return EXIT_MATCH


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_MATCH
    handlers = {"verify": cmd_verify, "list": cmd_list, "dump": cmd_dump}
    try:
        return handlers[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except UnknownIdentityError as exc:
        print(f"error: unknown identity {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (PoleError, IndeterminateError, NotInvertibleError, StabilizationError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
