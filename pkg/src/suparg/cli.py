"""Command-line front end: prove, check, cover, clopen.

Scalar arguments are parsed as exact decimals.  Domain endpoints must be
exactly representable in binary64 (they anchor exact partition arithmetic);
tolerance-like parameters are rounded toward the stricter side.  Output is
deterministic: identical invocations produce byte-identical certificate
JSON.  Proof failures exit 1 with a witness record on stdout; usage, parse
and domain errors exit 2 with a one-line JSON record on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .certificates import (
    CheckResult,
    ClopenVerdict,
    StructureError,
    check,
    conclusion_of,
    dumps,
    from_document,
    to_document,
)
from .expr import ParseError, parse
from .numeric import (
    DomainError,
    float_down,
    float_to_hex,
    interval_to_hex,
    parse_rational,
)
from .sweep import SweepFailure, SweepOptions
from .theorems import (
    Inconclusive,
    PreconditionError,
    prove_bound,
    prove_flat,
    prove_integral,
    prove_max,
    prove_modulus,
    prove_monotone,
    prove_mvi,
    prove_root,
)
from .topology import Cover, RatIntervalSet, UncoveredPoint, analyze_clopen, \
    extract_subcover, parse_interval_file

THEOREMS = ("bvt", "evt", "ivt", "uct", "dit", "sift", "ift", "mvi", "cft")
_NEEDS_EPS = ("evt", "uct", "dit")


class UsageError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # one machine-parsable line instead of usage spam
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="suparg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("prove", help="run a prover and emit a certificate")
    pr.add_argument("theorem", choices=THEOREMS)
    pr.add_argument("--fn", required=True, help="function expression in x")
    pr.add_argument("--a", required=True, help="left endpoint (exact binary64)")
    pr.add_argument("--b", required=True, help="right endpoint (exact binary64)")
    pr.add_argument("--eps", help="tolerance for evt/uct/dit")
    pr.add_argument("--M", help="derivative cap for mvi")
    pr.add_argument("--eta", help="flatness budget for cft")
    pr.add_argument("--tol", default="1e-9", help="bracket width for ivt")
    pr.add_argument("--h-min", dest="h_min", help="smallest step (default (b-a)*2^-40)")
    pr.add_argument("--max-pieces", dest="max_pieces", type=int, default=2 ** 20)
    pr.add_argument("--out", help="write certificate JSON to this file")
    pr.add_argument("--format", choices=("json", "text"), default="text")

    ck = sub.add_parser("check", help="re-verify a certificate file")
    ck.add_argument("file")
    ck.add_argument("--format", choices=("json", "text"), default="text")

    cv = sub.add_parser("cover", help="extract a finite subcover")
    cv.add_argument("--file", required=True, help="one open interval per line")
    cv.add_argument("--a", required=True)
    cv.add_argument("--b", required=True)
    cv.add_argument("--format", choices=("json", "text"), default="text")

    cl = sub.add_parser("clopen", help="analyze a relatively clopen candidate")
    cl.add_argument("--file", required=True, help="one interval per line")
    cl.add_argument("--a", required=True)
    cl.add_argument("--b", required=True)
    cl.add_argument("--format", choices=("json", "text"), default="text")
    return p


def _exact_endpoint(text: str, name: str) -> float:
    q = parse_rational(text)
    f = float_down(q)
    if Fraction(f) != q:
        raise UsageError(
            f"--{name} {text!r} is not exactly representable in binary64; "
            f"use a dyadic value such as {f!r}")
    return f


def _strict_param(text: str | None, name: str) -> float | None:
    if text is None:
        return None
    q = parse_rational(text)
    f = float_down(q)  # round toward the stricter side
    if f <= 0 and q > 0:
        raise UsageError(f"--{name} {text!r} underflows to zero")
    return f


def _error_line(category: str, detail: str, **extra) -> None:
    record = {"error": category, "detail": detail}
    record.update(extra)
    print(json.dumps(record, sort_keys=True), file=sys.stderr)


def _emit_failure(record: dict) -> int:
    print(json.dumps(record, sort_keys=True))
    return 1


def _failure_record(res: SweepFailure) -> dict:
    record = {"failure": res.kind.value, "at": float_to_hex(res.at),
              "detail": res.detail}
    record["witness"] = None if res.witness is None else interval_to_hex(res.witness)
    record["enclosure"] = None if res.enclosure is None else interval_to_hex(res.enclosure)
    return record


def _cmd_prove(args) -> int:
    f = parse(args.fn)
    a = _exact_endpoint(args.a, "a")
    b = _exact_endpoint(args.b, "b")
    if a > b:
        raise UsageError("--a must not exceed --b")
    eps = _strict_param(args.eps, "eps")
    cap = _strict_param(args.M, "M")
    eta = _strict_param(args.eta, "eta") if args.eta is not None else None
    if args.eta is not None and parse_rational(args.eta) == 0:
        eta = 0.0
    tol = _strict_param(args.tol, "tol")
    h_min = _strict_param(args.h_min, "h-min")
    opts = SweepOptions(h_min=h_min, max_pieces=args.max_pieces)

    th = args.theorem
    if th in _NEEDS_EPS and eps is None:
        raise UsageError(f"{th} requires --eps")
    if th == "mvi" and cap is None:
        raise UsageError("mvi requires --M")
    if th == "cft" and eta is None:
        raise UsageError("cft requires --eta")

    if th == "bvt":
        result = prove_bound(f, a, b, opts)
    elif th == "evt":
        result = prove_max(f, a, b, eps, opts)
    elif th == "ivt":
        try:
            result = prove_root(f, a, b, tol, opts)
        except PreconditionError as err:
            return _emit_failure({"failure": "precondition", "detail": str(err)})
        except Inconclusive as err:
            return _emit_failure({"failure": "inconclusive", "detail": str(err)})
    elif th == "uct":
        result = prove_modulus(f, a, b, eps, opts)
    elif th == "dit":
        result = prove_integral(f, a, b, eps, opts)
    elif th in ("sift", "ift"):
        result = prove_monotone(f, a, b, strict=(th == "sift"), opts=opts)
    elif th == "mvi":
        result = prove_mvi(f, a, b, cap, opts)
    else:
        result = prove_flat(f, a, b, eta, opts)

    if isinstance(result, SweepFailure):
        return _emit_failure(_failure_record(result))

    resolved_h_min = h_min if h_min is not None else (b - a) * 2.0 ** -40
    engine = {"pieces": _pieces_of(result), "h_min": float_to_hex(resolved_h_min)}
    text = dumps(result, engine)
    if args.out:
        with open(args.out, "w") as handle:
            handle.write(text)
    if args.format == "json":
        sys.stdout.write(text)
    else:
        print(conclusion_of(result).text)
        if not args.out:
            sys.stdout.write(text)
    return 0


def _pieces_of(cert) -> int:
    part = getattr(cert, "partition", None)
    if part is not None:
        return len(part)
    pieces = getattr(cert, "pieces", None)
    if pieces is not None:
        return len(pieces)
    return 0


def _cmd_check(args) -> int:
    try:
        with open(args.file) as handle:
            doc = json.load(handle)
        cert = from_document(doc)
    except (OSError, json.JSONDecodeError, StructureError, KeyError, ValueError) as err:
        raise UsageError(f"cannot load certificate {args.file!r}: {err}") from None
    result: CheckResult = check(cert)
    if args.format == "json":
        print(json.dumps({"valid": result.valid, "reason": result.reason,
                          "piece": result.piece}, sort_keys=True))
    else:
        print(str(result))
    return 0 if result.valid else 1


def _read_intervals(path: str):
    try:
        with open(path) as handle:
            return parse_interval_file(handle.read())
    except OSError as err:
        raise UsageError(str(err)) from None


def _cmd_cover(args) -> int:
    elements = _read_intervals(args.file)
    a = parse_rational(args.a)
    b = parse_rational(args.b)
    try:
        cover = Cover(tuple(elements))
    except ValueError as err:
        raise UsageError(str(err)) from None
    result = extract_subcover(cover, a, b)
    if isinstance(result, UncoveredPoint):
        return _emit_failure({"failure": "uncovered_point", "point": str(result.point)})
    if args.format == "json":
        sys.stdout.write(dumps(result))
    else:
        print(conclusion_of(result).text)
        print("chain: " + " -> ".join(str(p) for p in result.chain))
    return 0


def _cmd_clopen(args) -> int:
    elements = _read_intervals(args.file)
    a = parse_rational(args.a)
    b = parse_rational(args.b)
    u = RatIntervalSet(tuple(elements))
    try:
        report = analyze_clopen(u, a, b)
    except ValueError as err:
        raise UsageError(str(err)) from None
    if args.format == "json":
        sys.stdout.write(dumps(report))
    else:
        print(conclusion_of(report).text)
    return 0 if report.verdict is ClopenVerdict.COVERS_ALL else 1


def run(argv: list[str]) -> int:
    """Parse argv and run one command; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "prove":
            return _cmd_prove(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "cover":
            return _cmd_cover(args)
        return _cmd_clopen(args)
    except UsageError as err:
        _error_line("usage", str(err))
        return 2
    except ParseError as err:
        _error_line("parse", str(err), position=err.position)
        return 2
    except DomainError as err:
        extra = {}
        context = getattr(err, "context", None)
        if context:
            extra["subexpression"] = context
        piece = getattr(err, "piece", None)
        if piece is not None:
            extra["piece"] = interval_to_hex(piece)
        _error_line("domain", str(err), **extra)
        return 2
    except OverflowError as err:
        _error_line("domain", f"overflow: {err}")
        return 2
    except ValueError as err:
        _error_line("usage", str(err))
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
