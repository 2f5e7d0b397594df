"""Riemann zeta and prime zeta at even integers, with certified bounds.

Two routes for zeta(s):

* small s: the Bernoulli identity zeta(s) = |B_s| (2 pi)^s / (2 s!), exact
  up to pi and rounding;
* large s: the Dirichlet sum over n <= N plus the integral tail bound
  N^(1-s) / (s-1).

Everything downstream needs zeta(s) - 1 to full *relative* precision (the
prime zeta series takes logs of numbers within 2^-s of 1), so both routes
produce zeta(s) - 1 directly and zeta(s) is formed from it.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .mp_core import (
    CertifiedValue,
    DomainError,
    PrecisionContext,
    _up_add,
    _up_mul,
    pi,
    to_fraction,
)
from .number_theory import bernoulli, shared_sieve

__all__ = [
    "CertifiedValue",
    "DIRECT_MAX_TERMS",
    "ln_zeta_tail_bound",
    "prime_zeta_even",
    "prime_zeta_terms",
    "switch_point",
    "zeta_bernoulli",
    "zeta_direct",
    "zeta_even",
    "zeta_even_minus_one",
]

DIRECT_MAX_TERMS = 200_000
_LOG10_2 = math.log10(2)


def _check_even(s: int) -> None:
    if isinstance(s, bool) or not isinstance(s, int) or s < 2 or s % 2:
        raise DomainError(f"argument must be an even integer >= 2, got {s!r}")


def switch_point(ctx: PrecisionContext) -> int:
    """Largest even s evaluated through the Bernoulli identity.

    Above it the Dirichlet sum needs at most a few hundred terms.
    """
    wd = ctx.working_digits
    base = max(4, 2 * math.ceil(wd * math.log(10) / math.log(4)))
    cheap_direct = 2 * math.ceil(wd / (2 * math.log10(256)))
    return max(min(base, 128), cheap_direct)


def _direct_terms_needed(s: int, tol_log10: float) -> int:
    """Smallest N with N^(1-s)/(s-1) <= 10**tol_log10 (float estimate, then +1)."""
    # (1-s) log10 N - log10(s-1) <= tol  ->  log10 N >= (-tol - log10(s-1)) / (s-1)
    lg = (-tol_log10 - math.log10(s - 1)) / (s - 1)
    if lg > 12:
        return 10**13
    return max(2, math.ceil(10**lg) + 1)


def _zm1_direct(s: int, ctx: PrecisionContext, max_terms: int) -> CertifiedValue:
    m = ctx.mp
    # relative target 10^-wd on a quantity of size ~2^-s
    tol_log10 = -ctx.working_digits - s * _LOG10_2
    n_terms = min(_direct_terms_needed(s, tol_log10), max_terms)
    ms = -s
    total = m.zero
    for n in range(2, n_terms + 1):
        total += m.mpf(n) ** ms
    tail = m.fdiv(m.mpf(n_terms) ** (1 - s), s - 1, prec=64, rounding="u")
    # per term: power and addition each within one unit
    rnd = _up_mul(m, total, 2 * n_terms + 2, ctx.unit)
    # the partial sum undershoots; recentre so the ball is symmetric
    half_tail = m.fdiv(tail, 2, prec=64, rounding="u")
    value = total + half_tail
    rnd = _up_add(m, rnd, _up_mul(m, abs(value), ctx.unit))
    return CertifiedValue(value, half_tail, rnd, ctx)


def _zm1_bernoulli(s: int, ctx: PrecisionContext) -> CertifiedValue:
    extra = math.ceil(s * _LOG10_2) + 3
    hi = ctx.with_extra(extra)
    mh = hi.mp
    coeff = abs(bernoulli(s)) / (2 * math.factorial(s))
    zeta = mh.mpf(coeff.numerator) / coeff.denominator * (2 * pi(hi)) ** s
    zm1 = zeta - 1
    # pi^s, the rational and the product: (2s + 8) units relative on zeta,
    # then one unit for the subtraction
    err = _up_add(mh, _up_mul(mh, zeta, 2 * s + 8, hi.unit), _up_mul(mh, abs(zm1), hi.unit))
    m = ctx.mp
    value = m.mpf(zm1)
    err = _up_add(m, err, _up_mul(m, abs(value), ctx.unit))
    return CertifiedValue(value, m.zero, m.mpf(err), ctx)


@lru_cache(maxsize=None)
def zeta_even_minus_one(s: int, ctx: PrecisionContext) -> CertifiedValue:
    """zeta(s) - 1 with relative error about 10^-working_digits."""
    _check_even(s)
    if s <= switch_point(ctx):
        return _zm1_bernoulli(s, ctx)
    return _zm1_direct(s, ctx, DIRECT_MAX_TERMS)


def zeta_even(s: int, ctx: PrecisionContext) -> CertifiedValue:
    return zeta_even_minus_one(s, ctx) + 1


def zeta_bernoulli(s: int, ctx: PrecisionContext) -> CertifiedValue:
    """zeta(s) through the Bernoulli identity, for any even s."""
    _check_even(s)
    return _zm1_bernoulli(s, ctx) + 1


def zeta_direct(s: int, ctx: PrecisionContext, max_terms: int = DIRECT_MAX_TERMS) -> CertifiedValue:
    """zeta(s) through the Dirichlet sum.

    The number of terms comes from the tail bound, capped at ``max_terms``;
    when capped the returned bound is the (wider) one actually achieved.
    """
    _check_even(s)
    return _zm1_direct(s, ctx, max_terms) + 1


def ln_zeta_tail_bound(m: int) -> Fraction:
    """Upper bound 3 * 2^-m on ln zeta(m) (also on zeta(m) - 1), m >= 2."""
    return Fraction(3, 2**m)


def _moebius_cutoff(s: int, tol) -> int:
    """Least J with 3 * 2^(-s J) < tol."""
    frac_tol = tol if isinstance(tol, Fraction) else to_fraction(tol)
    if frac_tol <= 0:
        raise ValueError("tolerance must be positive")
    # estimate from bit lengths, then adjust exactly
    bits = frac_tol.denominator.bit_length() - frac_tol.numerator.bit_length() + 2
    j = max(1, bits // s)
    while Fraction(3, 2 ** (s * j)) >= frac_tol:
        j += 1
    while j > 1 and Fraction(3, 2 ** (s * (j - 1))) < frac_tol:
        j -= 1
    return j


def prime_zeta_terms(s: int, ctx: PrecisionContext, tol=None) -> int:
    """Number of Moebius-series indices used by ``prime_zeta_even``."""
    _check_even(s)
    if tol is None:
        tol = Fraction(1, 10**ctx.working_digits)
    return _moebius_cutoff(s, tol)


def prime_zeta_even(s: int, ctx: PrecisionContext, tol=None) -> CertifiedValue:
    """P(s) = sum over all primes (2 included) of p^-s.

    Sums mu(k) ln zeta(s k) / k over squarefree k <= J, with J the least index
    whose remainder bound 3 * 2^(-s J) is below ``tol`` (default
    10^-working_digits).
    """
    cutoff = prime_zeta_terms(s, ctx, tol)
    m = ctx.mp
    sieve = shared_sieve(max(cutoff, 2))
    total = CertifiedValue.exact(0, ctx)
    for k in range(1, cutoff + 1):
        mu = sieve.mu(k)
        if mu == 0:
            continue
        term = zeta_even_minus_one(s * k, ctx).ln1p()
        if k > 1:
            term = term / k
        total = total + term if mu > 0 else total - term
    remainder = m.mpf(3) * m.mpf(2) ** (-s * cutoff)
    return CertifiedValue(total.value, _up_add(m, total.trunc_bound, remainder), total.round_bound, ctx)
