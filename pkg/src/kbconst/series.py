"""Accelerated series for ln K_p and ln K and the six derived constants.

Both logarithms share the coefficients c_k = (4^k - 1) zeta(2k) / k of the
ln sec expansion; they differ in the inner sum over n >= 3 of n^-2k:

    ln K_p = sum_k c_k (P(2k) - 4^-k)          (primes p >= 3)
    ln K   = sum_k c_k (zeta(2k) - 1 - 4^-k)    (all n >= 3)

Terms decay like (4/9)^k, so the number of terms grows linearly with the
requested digits.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, NamedTuple, Optional

from mpmath.ctx_mp_python import mpf

from .mp_core import CertifiedValue, PrecisionContext, UsageError, _up_add, to_fraction
from .special_functions import prime_zeta_even, zeta_even, zeta_even_minus_one

__all__ = [
    "Certification",
    "ConstantId",
    "ConstantResult",
    "Method",
    "certify",
    "evaluate",
    "ln_K",
    "ln_Kp",
    "ln_sec_coefficient",
    "series_terms",
    "series_value",
    "stop_index",
    "tail_bound",
]

INSUFFICIENT = "insufficient precision"


class ConstantId(enum.Enum):
    K = "K"
    RHO = "rho"
    K_P = "Kp"
    RHO_P = "rhop"
    K_Q = "Kq"
    RHO_Q = "rhoq"

    @classmethod
    def parse(cls, name: str) -> "ConstantId":
        key = name.strip().lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise UsageError(
            f"unknown constant {name!r}; expected one of "
            + ", ".join(m.value for m in cls)
        )

    @property
    def is_reciprocal(self) -> bool:
        return self in (ConstantId.RHO, ConstantId.RHO_P, ConstantId.RHO_Q)

    @property
    def display(self) -> str:
        return {
            ConstantId.K: "K",
            ConstantId.RHO: "rho",
            ConstantId.K_P: "K_p",
            ConstantId.RHO_P: "rho_p",
            ConstantId.K_Q: "K_q",
            ConstantId.RHO_Q: "rho_q",
        }[self]


class Method(enum.Enum):
    SERIES = "series"
    PRODUCT = "product"


class Certification(NamedTuple):
    decimal: str
    digits: int
    status: str


@dataclass(frozen=True)
class ConstantResult:
    id: ConstantId
    decimal: str
    certified_digits: int
    method: Method
    terms_used: int
    trunc_bound: mpf
    round_bound: mpf
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


# -- stopping rule --------------------------------------------------------------

def tail_bound(k_stop: int) -> Fraction:
    """Bound on sum_{k > k_stop} t_k for either series.

    t_k <= zeta(2) (4^k / k) * 4 * 9^-k because sum_{n>=3} n^-2k <= 4 * 9^-k;
    4 zeta(2) < 12 and the geometric tail adds the factor 1 / (1 - 4/9) = 9/5.
    """
    k = k_stop + 1
    return Fraction(12 * 4**k * 9, 9**k * k * 5)


def stop_index(ctx: PrecisionContext) -> int:
    """Least K with tail_bound(K) < 10^-working_digits."""
    wd = ctx.working_digits
    # float estimate in log space, then exact adjustment
    est = max(1, int(wd / math.log10(9 / 4)) - 5)
    limit = Fraction(1, 10**wd)
    while est > 1 and tail_bound(est - 1) < limit:
        est -= 1
    while tail_bound(est) >= limit:
        est += 1
    return est


# -- coefficients and terms -----------------------------------------------------

def ln_sec_coefficient(k: int, ctx: PrecisionContext) -> CertifiedValue:
    """c_k = (4^k - 1) zeta(2k) / k, the weight of p^-2k in ln sec(pi/p)."""
    if k < 1:
        raise UsageError("coefficient index must be >= 1")
    c = zeta_even(2 * k, ctx) * (4**k - 1)
    return c / k if k > 1 else c


def _inner_primes(k: int, ctx: PrecisionContext) -> CertifiedValue:
    # c_k < 2 * 4^k / k, so P(2k) is needed to 10^-wd * k / (2 * 4^k)
    tol = Fraction(k, 2 * 4**k * 10**ctx.working_digits)
    return prime_zeta_even(2 * k, ctx, tol=tol) - Fraction(1, 4**k)


def _inner_all(k: int, ctx: PrecisionContext) -> CertifiedValue:
    return zeta_even_minus_one(2 * k, ctx) - Fraction(1, 4**k)


_INNER = {"primes": _inner_primes, "all": _inner_all}


def series_terms(kind: str, ctx: PrecisionContext, k_stop: Optional[int] = None) -> List[CertifiedValue]:
    """Terms t_1..t_K of the ln K_p (``kind="primes"``) or ln K (``"all"``) series."""
    inner = _INNER[kind]
    k_stop = stop_index(ctx) if k_stop is None else k_stop
    return [ln_sec_coefficient(k, ctx) * inner(k, ctx) for k in range(1, k_stop + 1)]


def _sum_series(kind: str, ctx: PrecisionContext) -> CertifiedValue:
    k_stop = stop_index(ctx)
    total = CertifiedValue.exact(0, ctx)
    for term in series_terms(kind, ctx, k_stop):
        total = total + term
    m = ctx.mp
    tail = m.mpf(tail_bound(k_stop).numerator) / tail_bound(k_stop).denominator
    tail = m.fmul(tail, 1 + 2 * ctx.unit, prec=64, rounding="u")
    return CertifiedValue(total.value, _up_add(m, total.trunc_bound, tail), total.round_bound, ctx)


@lru_cache(maxsize=128)
def ln_Kp(ctx: PrecisionContext) -> CertifiedValue:
    """ln of the product of sec(pi/p) over primes p >= 3."""
    return _sum_series("primes", ctx)


@lru_cache(maxsize=128)
def ln_K(ctx: PrecisionContext) -> CertifiedValue:
    """ln of the product of sec(pi/n) over all n >= 3."""
    return _sum_series("all", ctx)


# -- certification -------------------------------------------------------------

def _format_truncated(scaled: int, digits: int) -> str:
    if digits == 0:
        return str(scaled)
    s = str(scaled).rjust(digits + 1, "0")
    return f"{s[:-digits]}.{s[-digits:]}"


def certify(value, total_bound, ctx: PrecisionContext) -> Certification:
    """Truncated decimal string of ``value`` with every digit guaranteed.

    Returns the largest d <= target_digits such that total_bound < 0.5e-d and
    both ends of [value - bound, value + bound] truncate to the same d-digit
    string.  When not even one decimal is certain, d = 0 and the status says
    so; the string is then the integer part of ``value``.
    """
    v = value if isinstance(value, Fraction) else to_fraction(ctx.mp.mpf(value))
    b = total_bound if isinstance(total_bound, Fraction) else to_fraction(ctx.mp.mpf(total_bound))
    if b < 0:
        raise ValueError("error bound must be nonnegative")
    if v - b < 0:
        return Certification(str(math.floor(v)) if v >= 0 else "0", 0, INSUFFICIENT)
    lo, hi = v - b, v + b
    digits = 0
    for d in range(1, ctx.target_digits + 1):
        scale = 10**d
        if not b * 2 * scale < 1:
            break
        if math.floor(lo * scale) != math.floor(hi * scale):
            break
        digits = d
    if digits == 0:
        return Certification(str(math.floor(v)), 0, INSUFFICIENT)
    return Certification(_format_truncated(math.floor(lo * 10**digits), digits), digits, "ok")


# -- the six constants -----------------------------------------------------------

def series_value(cid: ConstantId, ctx: PrecisionContext) -> CertifiedValue:
    """Certified value of ``cid`` from the series (no certification step)."""
    if cid in (ConstantId.K, ConstantId.RHO):
        base = ln_K(ctx).exp()
    elif cid in (ConstantId.K_P, ConstantId.RHO_P):
        base = ln_Kp(ctx).exp()
    else:
        base = ln_K(ctx).exp() / ln_Kp(ctx).exp()
    return 1 / base if cid.is_reciprocal else base


def _series_terms_used(cid: ConstantId, ctx: PrecisionContext) -> int:
    k = stop_index(ctx)
    return 2 * k if cid in (ConstantId.K_Q, ConstantId.RHO_Q) else k


def evaluate(
    cid: ConstantId,
    ctx: PrecisionContext,
    method: Method = Method.SERIES,
    max_prime: int = 10**6,
) -> ConstantResult:
    """Compute and certify one of the six constants.

    ``max_prime`` is the product oracle's factor limit and is ignored by the
    series method.  A product evaluation that certifies no digit comes back
    with ``status == "insufficient precision"``.
    """
    if method is Method.SERIES:
        cv = series_value(cid, ctx)
        cert = certify(cv.value, cv.abs_error_bound, ctx)
        return ConstantResult(
            cid, cert.decimal, cert.digits, method, _series_terms_used(cid, ctx),
            cv.trunc_bound, cv.round_bound, cert.status,
        )
    from .product_oracle import product_value

    cv, factors = product_value(cid, max_prime, ctx)
    cert = certify(cv.value, cv.abs_error_bound, ctx)
    return ConstantResult(
        cid, cert.decimal, cert.digits, method, factors,
        cv.trunc_bound, cv.round_bound, cert.status,
    )
