"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 series/product cross-check failed,
4 the product path could not certify a single digit.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import List, Optional, TextIO

from mpmath import nstr

from .mp_core import MAX_DIGITS, UsageError, make_context
from .product_oracle import mode_for, partial_product, sandwich_check
from .series import ConstantId, ConstantResult, Method, evaluate, series_value

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_INSUFFICIENT = 4

@dataclass(frozen=True)
class CliRequest:
    constant: ConstantId
    digits: int = 10
    method: str = "series"
    max_prime: int = 10**6
    format: str = "text"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # one-line reason, exit 2
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="kbconst",
        description="Certified digits of the polygon circumscribing constant, "
        "the Kepler-Bouwkamp constant and their prime/nonprime analogs.",
    )
    p.add_argument("--constant", "-c", required=True, help="K, rho, Kp, rhop, Kq or rhoq (any case)")
    p.add_argument("--digits", "-d", type=int, default=10, help="decimal digits to certify (default 10)")
    p.add_argument("--method", choices=("series", "product", "both"), default="series")
    p.add_argument("--max-prime", type=int, default=10**6, help="product factor limit (default 10^6)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--verify", action="store_true", help="same as --method both")
    return p


def parse_request(argv: Optional[List[str]] = None) -> CliRequest:
    args = _parser().parse_args(argv)
    cid = ConstantId.parse(args.constant)
    if not 1 <= args.digits <= MAX_DIGITS:
        raise UsageError(f"--digits must be in [1, {MAX_DIGITS}], got {args.digits}")
    if args.max_prime < 4:
        raise UsageError(f"--max-prime must be >= 4, got {args.max_prime}")
    method = "both" if args.verify else args.method
    return CliRequest(cid, args.digits, method, args.max_prime, args.format)


def _sci(x) -> str:
    return nstr(x, 6, min_fixed=1, max_fixed=0) if x else "0.0"


def _emit(result: ConstantResult, method: str, elapsed_ms: int, fmt: str, out: TextIO) -> None:
    if fmt == "json":
        payload = {
            "constant": result.id.value,
            "value": result.decimal,
            "certified_digits": result.certified_digits,
            "method": method,
            "terms_used": result.terms_used,
            "trunc_bound": _sci(result.trunc_bound),
            "round_bound": _sci(result.round_bound),
            "elapsed_ms": elapsed_ms,
        }
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(
            f"{result.id.display} = {result.decimal}… "
            f"({result.certified_digits} digits certified, {method}, {result.terms_used} terms)\n"
        )


def run(request: CliRequest, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    start = time.perf_counter()
    ctx = make_context(request.digits)
    if request.method == "product":
        result = evaluate(request.constant, ctx, Method.PRODUCT, request.max_prime)
    else:
        result = evaluate(request.constant, ctx, Method.SERIES)
    if not result.ok:
        err.write(f"{request.constant.value}: {result.status}\n")
        return EXIT_INSUFFICIENT
    status = EXIT_OK
    if request.method == "both":
        report = partial_product(mode_for(request.constant), request.max_prime, ctx)
        series = series_value(request.constant, ctx)
        # the oracle encloses K-type products; compare reciprocals directly
        target = 1 / series if request.constant.is_reciprocal else series
        if sandwich_check(target, report):
            err.write(
                f"verified against product over n <= {request.max_prime} "
                f"({report.factors} factors)\n"
            )
        else:
            err.write(f"cross-validation FAILED against product over n <= {request.max_prime}\n")
            status = EXIT_VERIFY
    elapsed_ms = int((time.perf_counter() - start) * 1000)
    _emit(result, request.method, elapsed_ms, request.format, out)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    try:
        request = parse_request(argv)
    except UsageError as exc:
        sys.stderr.write(f"kbconst: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    return run(request)


if __name__ == "__main__":
    sys.exit(main())
