"""Multiprecision real arithmetic with a decimal error contract.

Values are ``mpmath`` ``mpf`` numbers.  Every :class:`PrecisionContext` owns
a private mpmath context, so functions here never touch the global
``mpmath.mp`` precision and can be called from several threads.

:class:`CertifiedValue` is a midpoint-radius ball.  Its radius is split into
a truncation part (omitted series terms, product tails) and a rounding part
(finite working precision); both are propagated to first order plus an
exact second-order remainder, and bound arithmetic is rounded upward.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

from mpmath import MPContext
from mpmath.ctx_mp_python import mpf

__all__ = [
    "BigReal",
    "CertifiedValue",
    "DomainError",
    "EngineRangeError",
    "MAX_DIGITS",
    "PrecisionContext",
    "UsageError",
    "cos_real",
    "exp_real",
    "ln1p_real",
    "ln_real",
    "make_context",
    "pi",
    "to_fraction",
]

BigReal = mpf

MAX_DIGITS = 100_000
MIN_GUARD_DIGITS = 10

# bound arithmetic runs at this many bits, rounded toward +inf
_BOUND_PREC = 64


class UsageError(ValueError):
    """Caller supplied an argument outside the accepted range."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of the function."""


class EngineRangeError(ValueError):
    """Argument inside the domain but outside the supported engine range."""


@lru_cache(maxsize=None)
def _mp_for(digits: int) -> MPContext:
    ctx = MPContext()
    ctx.dps = digits
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    target_digits: int
    guard_digits: int

    def __post_init__(self) -> None:
        if self.target_digits < 1:
            raise UsageError("target_digits must be >= 1")
        if self.guard_digits < MIN_GUARD_DIGITS:
            raise UsageError(f"guard_digits must be >= {MIN_GUARD_DIGITS}")

    @property
    def working_digits(self) -> int:
        return self.target_digits + self.guard_digits

    @property
    def mp(self) -> MPContext:
        """The mpmath context running at ``working_digits``."""
        return _mp_for(self.working_digits)

    @property
    def unit(self) -> mpf:
        """Relative rounding unit 10**(1 - working_digits) of one operation."""
        return self.mp.mpf(10) ** (1 - self.working_digits)

    def with_extra(self, digits: int) -> "PrecisionContext":
        """Same target, ``digits`` more guard digits."""
        return PrecisionContext(self.target_digits, self.guard_digits + digits)


def make_context(target_digits: int) -> PrecisionContext:
    """Context with the standard guard-digit budget for ``target_digits``.

    >>> make_context(10).working_digits
    27
    """
    if isinstance(target_digits, bool) or not isinstance(target_digits, int):
        raise UsageError("target_digits must be an integer")
    if not 1 <= target_digits <= MAX_DIGITS:
        raise UsageError(f"target_digits must be in [1, {MAX_DIGITS}], got {target_digits}")
    guard = 10 + math.ceil(math.log10(target_digits + 10)) + 5
    return PrecisionContext(target_digits, guard)


def pi(ctx: PrecisionContext) -> mpf:
    return +ctx.mp.pi


def exp_real(x, ctx: PrecisionContext) -> mpf:
    m = ctx.mp
    x = m.mpf(x)
    if abs(x) > 100:
        raise EngineRangeError(f"exp argument {m.nstr(x, 8)} outside [-100, 100]")
    return m.exp(x)


def ln_real(x, ctx: PrecisionContext) -> mpf:
    m = ctx.mp
    x = m.mpf(x)
    if x <= 0:
        raise DomainError("ln requires a positive argument")
    return m.ln(x)


def ln1p_real(x, ctx: PrecisionContext) -> mpf:
    """ln(1 + x) without forming 1 + x; relative error as for ``ln_real``."""
    m = ctx.mp
    x = m.mpf(x)
    if x <= -1:
        raise DomainError("ln1p requires x > -1")
    return m.log1p(x)


def cos_real(x, ctx: PrecisionContext) -> mpf:
    m = ctx.mp
    x = m.mpf(x)
    if abs(x) > 2 * m.pi:
        raise EngineRangeError("cos argument outside [-2*pi, 2*pi]")
    return m.cos(x)


def to_fraction(x: mpf) -> Fraction:
    """Exact rational value of a binary ``mpf``."""
    man, exp = x.man_exp
    man = int(man)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


# -- upward-rounded bound arithmetic ------------------------------------------

def _up_add(m: MPContext, *terms) -> mpf:
    acc = m.zero
    for t in terms:
        acc = m.fadd(acc, t, prec=_BOUND_PREC, rounding="u")
    return acc


def _up_mul(m: MPContext, *factors) -> mpf:
    acc = m.one
    for f in factors:
        acc = m.fmul(acc, f, prec=_BOUND_PREC, rounding="u")
    return acc


def _up_div(m: MPContext, a, b) -> mpf:
    return m.fdiv(a, b, prec=_BOUND_PREC, rounding="u")


def _down_sub(m: MPContext, a, b) -> mpf:
    return m.fsub(a, b, prec=_BOUND_PREC, rounding="d")


Number = Union[int, Fraction, mpf, "CertifiedValue"]


@dataclass(frozen=True)
class CertifiedValue:
    """``value`` with a rigorous bound on ``|value - true|``.

    The bound is ``trunc_bound + round_bound``.  Arithmetic between
    certified values (and exact ints/Fractions) propagates both parts.
    """

    value: mpf
    trunc_bound: mpf
    round_bound: mpf
    ctx: PrecisionContext = field(repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.trunc_bound < 0 or self.round_bound < 0:
            raise ValueError("error bounds must be nonnegative")

    @classmethod
    def exact(cls, x, ctx: PrecisionContext) -> "CertifiedValue":
        """Wrap ``x``; ints and dyadic values that fit are stored exactly."""
        m = ctx.mp
        if isinstance(x, Fraction):
            target = x
            v = m.mpf(x.numerator) / x.denominator
        elif isinstance(x, int):
            target = Fraction(x)
            v = m.mpf(x)
        else:
            target = to_fraction(x)
            v = m.mpf(x)
        err = m.zero if to_fraction(v) == target else _up_mul(m, abs(v), ctx.unit)
        return cls(v, m.zero, err, ctx)

    @property
    def abs_error_bound(self) -> mpf:
        return _up_add(self.ctx.mp, self.trunc_bound, self.round_bound)

    @property
    def lower(self) -> mpf:
        m = self.ctx.mp
        return m.fsub(self.value, self.abs_error_bound, rounding="d")

    @property
    def upper(self) -> mpf:
        m = self.ctx.mp
        return m.fadd(self.value, self.abs_error_bound, rounding="u")

    def contains(self, x) -> bool:
        x = self.ctx.mp.mpf(x)
        return self.lower <= x <= self.upper

    def overlaps(self, other: "CertifiedValue") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    # -- propagation ---------------------------------------------------------

    def _coerce(self, other: Number) -> "CertifiedValue":
        if isinstance(other, CertifiedValue):
            return other
        return CertifiedValue.exact(other, self.ctx)

    def _combine(self, value: mpf, pairs, extra_round: mpf) -> "CertifiedValue":
        """New ball whose error is sum(weight * operand_error) + extra_round."""
        m = self.ctx.mp
        trunc = _up_add(m, *(_up_mul(m, w, x.trunc_bound) for w, x in pairs))
        rnd = _up_add(m, extra_round, *(_up_mul(m, w, x.round_bound) for w, x in pairs))
        return CertifiedValue(value, trunc, rnd, self.ctx)

    def _op_round(self, value: mpf) -> mpf:
        return _up_mul(self.ctx.mp, abs(value), self.ctx.unit)

    def __add__(self, other: Number) -> "CertifiedValue":
        o = self._coerce(other)
        v = self.value + o.value
        return self._combine(v, [(1, self), (1, o)], self._op_round(v))

    __radd__ = __add__

    def __neg__(self) -> "CertifiedValue":
        return CertifiedValue(-self.value, self.trunc_bound, self.round_bound, self.ctx)

    def __sub__(self, other: Number) -> "CertifiedValue":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Number) -> "CertifiedValue":
        return self._coerce(other) - self

    def __mul__(self, other: Number) -> "CertifiedValue":
        o = self._coerce(other)
        m = self.ctx.mp
        v = self.value * o.value
        # |ab - AB| <= (|b| + rb) ra + |a| rb
        w_self = _up_add(m, abs(o.value), o.abs_error_bound)
        return self._combine(v, [(w_self, self), (abs(self.value), o)], self._op_round(v))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "CertifiedValue":
        o = self._coerce(other)
        m = self.ctx.mp
        b = abs(o.value)
        rb = o.abs_error_bound
        gap = _down_sub(m, b, rb)
        if gap <= 0:
            raise DomainError("divisor ball contains zero")
        v = self.value / o.value
        # |a/b - A/B| <= ra / (|b| - rb) + rb |a| / (|b| (|b| - rb))
        w_self = _up_div(m, 1, gap)
        w_other = _up_div(m, abs(self.value), m.fmul(b, gap, prec=_BOUND_PREC, rounding="d"))
        return self._combine(v, [(w_self, self), (w_other, o)], self._op_round(v))

    def __rtruediv__(self, other: Number) -> "CertifiedValue":
        return self._coerce(other) / self

    def exp(self) -> "CertifiedValue":
        m = self.ctx.mp
        v = exp_real(self.value, self.ctx)
        r = self.abs_error_bound
        if r > 1:
            raise EngineRangeError("error ball too wide for exp propagation")
        # exp(a + d) - exp(a) <= exp(a) (exp(r) - 1) <= exp(a) * r * (1 + r), |d| <= r
        upper_v = m.fadd(v, _up_mul(m, abs(v), 4, self.ctx.unit), rounding="u")
        w = _up_mul(m, upper_v, _up_add(m, 1, r))
        return self._combine(v, [(w, self)], _up_mul(m, abs(v), 4, self.ctx.unit))

    def ln1p(self) -> "CertifiedValue":
        """ln(1 + self); requires the ball to stay inside (-1, inf)."""
        m = self.ctx.mp
        r = self.abs_error_bound
        gap = _down_sub(m, m.fadd(1, self.value, prec=_BOUND_PREC, rounding="d"), r)
        if gap <= 0:
            raise DomainError("ln1p ball reaches -1")
        v = ln1p_real(self.value, self.ctx)
        # |ln(1 + x + d) - ln(1 + x)| <= |d| / (1 + x - r)
        return self._combine(v, [(_up_div(m, 1, gap), self)], _up_mul(m, abs(v), 4, self.ctx.unit))

    def __repr__(self) -> str:
        m = self.ctx.mp
        return (
            f"CertifiedValue({m.nstr(self.value, 20)} ± "
            f"{m.nstr(self.abs_error_bound, 3)})"
        )
