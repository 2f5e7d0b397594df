"""Brute-force partial products of sec(pi/n), used to cross-check the series.

Shares only the multiprecision layer and the prime sieve with the series
path.  Partial products increase with the limit (every factor exceeds 1),
and the omitted factors are bounded through

    ln sec(x) <= (x^2 / 2) (1 + x^2)      for 0 < x <= pi/3,

so the constant lies in [partial, partial * exp(tail_upper)].
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Tuple

from mpmath.ctx_mp_python import mpf

from .mp_core import CertifiedValue, PrecisionContext, UsageError, _up_add, _up_mul, pi
from .number_theory import shared_sieve

__all__ = [
    "Mode",
    "ProductReport",
    "ln_sec_upper",
    "mode_for",
    "partial_product",
    "partial_products",
    "prime_sum_oracle",
    "product_value",
    "report_interval",
    "sandwich_check",
]


class Mode(enum.Enum):
    PRIMES = "primes"
    ALL = "all"
    NONPRIMES = "nonprimes"

    @property
    def start(self) -> int:
        return 4 if self is Mode.NONPRIMES else 3


@dataclass(frozen=True)
class ProductReport:
    mode: Mode
    limit: int
    partial: mpf
    tail_upper: mpf
    round_rel: mpf
    factors: int
    ctx: PrecisionContext

    @property
    def lower(self) -> mpf:
        """Rounding-safe lower end of the enclosure."""
        m = self.ctx.mp
        return m.fmul(self.partial, m.fsub(1, self.round_rel, prec=64, rounding="d"), rounding="d")

    @property
    def upper(self) -> mpf:
        m = self.ctx.mp
        grow = m.fadd(m.expm1(self.tail_upper) * (1 + 2 * self.ctx.unit), 1, rounding="u")
        return m.fmul(
            m.fmul(self.partial, grow, rounding="u"),
            m.fadd(1, self.round_rel, prec=64, rounding="u"),
            rounding="u",
        )


def ln_sec_upper(x):
    """Upper bound (x^2 / 2)(1 + x^2) on ln sec(x), valid on (0, pi/3]."""
    x2 = x * x
    return x2 / 2 * (1 + x2)


def _tail_upper(limit: int, ctx: PrecisionContext) -> mpf:
    # sum over n > limit of ln sec(pi/n) <= (pi^2/2)(1 + (pi/(limit+1))^2) * sum n^-2,
    # and sum_{n > L} n^-2 <= 1/L; the factor is <= 1.2 once limit >= 7
    m = ctx.mp
    p = m.fmul(pi(ctx), 1 + 2 * ctx.unit, prec=64, rounding="u")
    p2 = _up_mul(m, p, p)
    factor = _up_add(m, 1, m.fdiv(p2, (limit + 1) ** 2, prec=64, rounding="u"))
    return m.fdiv(_up_mul(m, p2, factor), 2 * limit, prec=64, rounding="u")


def _check_limit(mode: Mode, limit: int) -> None:
    if limit < mode.start:
        raise UsageError(f"{mode.value} product needs limit >= {mode.start}, got {limit}")


def partial_products(
    modes: Iterable[Mode], limit: int, ctx: PrecisionContext
) -> Dict[Mode, ProductReport]:
    """Partial products for several modes sharing one pass of cosines.

    Each mode multiplies its own factors in ascending n, so the results are
    identical to separate :func:`partial_product` calls.
    """
    modes = tuple(dict.fromkeys(modes))
    for mode in modes:
        _check_limit(mode, limit)
    m = ctx.mp
    flags = shared_sieve(limit).is_prime
    p = pi(ctx)
    # accumulate products of cosines; one reciprocal at the end
    acc = {mode: m.one for mode in modes}
    count = {mode: 0 for mode in modes}
    want_p = Mode.PRIMES in acc
    want_q = Mode.NONPRIMES in acc
    want_a = Mode.ALL in acc
    cos = m.cos
    for n in range(3, limit + 1):
        c = cos(p / n)
        if want_a:
            acc[Mode.ALL] *= c
        if flags[n]:
            if want_p:
                acc[Mode.PRIMES] *= c
        elif want_q:
            acc[Mode.NONPRIMES] *= c
    tail = _tail_upper(limit, ctx)
    reports = {}
    for mode in modes:
        if mode is Mode.ALL:
            count[mode] = limit - 2
        else:
            primes = int(flags[3 : limit + 1].sum())
            count[mode] = primes if mode is Mode.PRIMES else limit - 2 - primes
        # cosine within 4 units absolute (>= 1/2, so 8 relative), argument
        # rounding 3 more, one multiply each, plus the final reciprocal
        round_rel = _up_mul(m, 12 * count[mode] + 2, ctx.unit)
        reports[mode] = ProductReport(mode, limit, 1 / acc[mode], tail, round_rel, count[mode], ctx)
    return reports


def partial_product(mode: Mode, limit: int, ctx: PrecisionContext) -> ProductReport:
    """Product of sec(pi/n) over admissible n <= limit, with its tail bound."""
    return partial_products([mode], limit, ctx)[mode]


def sandwich_check(series_value: CertifiedValue, report: ProductReport) -> bool:
    """True iff the series ball meets [partial, partial * exp(tail_upper)]."""
    return series_value.lower <= report.upper and report.lower <= series_value.upper


def report_interval(report: ProductReport) -> CertifiedValue:
    """The oracle enclosure as a midpoint-radius ball.

    The tail part of the radius is reported as truncation, the rest as
    rounding.
    """
    ctx = report.ctx
    m = ctx.mp
    lo, hi = report.lower, report.upper
    mid = (lo + hi) / 2
    rad = m.fsub(hi, mid, prec=64, rounding="u")
    rad = _up_add(m, rad, _up_mul(m, mid, ctx.unit))
    rnd = min(rad, _up_mul(m, report.partial, report.round_rel, 2))
    return CertifiedValue(mid, m.fsub(rad, rnd, prec=64, rounding="u"), rnd, ctx)


_MODE_OF = {
    "K": Mode.ALL,
    "rho": Mode.ALL,
    "Kp": Mode.PRIMES,
    "rhop": Mode.PRIMES,
    "Kq": Mode.NONPRIMES,
    "rhoq": Mode.NONPRIMES,
}


def mode_for(cid) -> Mode:
    """Product mode whose partial products approach constant ``cid`` (or its reciprocal)."""
    return _MODE_OF[cid.value]


def product_value(cid, limit: int, ctx: PrecisionContext) -> Tuple[CertifiedValue, int]:
    """Oracle enclosure of constant ``cid`` and the number of factors used."""
    report = partial_product(mode_for(cid), limit, ctx)
    ball = report_interval(report)
    if cid.is_reciprocal:
        ball = 1 / ball
    return ball, report.factors


def prime_sum_oracle(s: int, prime_limit: int, ctx: PrecisionContext) -> Tuple[Fraction, Fraction]:
    """Exact rational bracket [lo, hi] for sum over all primes of p^-s.

    Sums floor(2^B / p^s) in integers over primes p < prime_limit, so each
    term is low by less than 2^-B, then adds the integral tail bound
    limit^-s + limit^(1-s) / (s - 1) for the omitted primes.
    """
    if s < 2:
        raise UsageError("exponent must be >= 2")
    bits = int(ctx.working_digits * 3.33) + 32
    scale = 1 << bits
    primes = shared_sieve(prime_limit).primes(2, prime_limit - 1)
    total = 0
    for q in primes.tolist():
        total += scale // q**s
    count = len(primes)
    lo = Fraction(total, scale)
    tail = Fraction(1, prime_limit**s) + Fraction(1, (s - 1) * prime_limit ** (s - 1))
    hi = Fraction(total + count, scale) + tail
    return lo, hi
