from fractions import Fraction

import mpmath
import pytest

from kbconst.mp_core import DomainError, make_context, to_fraction
from kbconst.product_oracle import prime_sum_oracle
from kbconst.special_functions import (
    ln_zeta_tail_bound,
    prime_zeta_even,
    switch_point,
    zeta_bernoulli,
    zeta_direct,
    zeta_even,
    zeta_even_minus_one,
)


def _bracket(cv):
    return to_fraction(cv.lower), to_fraction(cv.upper)


def test_zeta_small_values(ctx30):
    with mpmath.workdps(80):
        for s, ref in ((2, mpmath.pi**2 / 6), (4, mpmath.pi**4 / 90)):
            z = zeta_even(s, ctx30)
            assert z.abs_error_bound < mpmath.mpf(10) ** (2 - ctx30.working_digits)
            assert z.lower <= ref <= z.upper
    assert mpmath.nstr(zeta_even(2, ctx30).value, 15).startswith("1.6449340668")
    assert mpmath.nstr(zeta_even(4, ctx30).value, 15).startswith("1.0823232337")


def test_zeta_40_bracket(ctx30):
    lo, hi = _bracket(zeta_even(40, ctx30))
    base = 1 + Fraction(1, 2**40)
    assert lo - base > 0
    assert hi - base < 2 * Fraction(1, 3**40)


@pytest.mark.parametrize("bad", [1, 3, 0, -2, 41])
def test_zeta_domain(ctx10, bad):
    with pytest.raises(DomainError):
        zeta_even(bad, ctx10)
    with pytest.raises(DomainError):
        prime_zeta_even(bad, ctx10)


def test_zeta_decreasing(ctx30):
    # strictness is resolved on zeta - 1, which carries relative precision
    values = [zeta_even_minus_one(s, ctx30) for s in range(2, 300, 2)]
    for a, b in zip(values, values[1:]):
        assert 0 < b.lower and b.upper < a.lower
    assert zeta_even(2, ctx30).value == 1 + values[0].value


def test_zeta_minus_one_relative_precision(ctx30):
    # far above the switch point zeta - 1 keeps full relative accuracy
    for s in (200, 1000, 4000):
        zm1 = zeta_even_minus_one(s, ctx30)
        assert zm1.abs_error_bound < zm1.value * mpmath.mpf(10) ** (3 - ctx30.working_digits)
        with mpmath.workdps(40):
            ref = mpmath.mpf(2) ** -s * (1 + (mpmath.mpf(2) / 3) ** s)
            assert abs(zm1.value / ref - 1) < mpmath.mpf(10) ** -20


def test_cross_method_around_switch(ctx30):
    sw = switch_point(ctx30)
    for s in range(sw - 4, sw + 6, 2):
        a, b = zeta_bernoulli(s, ctx30), zeta_direct(s, ctx30)
        assert a.overlaps(b)


def test_switch_point_grows_with_precision():
    assert switch_point(make_context(10)) >= 4
    assert switch_point(make_context(30)) == 128
    # high precision keeps direct sums short
    assert switch_point(make_context(1000)) > 400


def test_direct_sum_reports_capped_bound(ctx30):
    z = zeta_direct(2, ctx30, max_terms=1000)
    assert Fraction(1, 1000) / 2 <= to_fraction(z.trunc_bound) < Fraction(1, 999)
    assert z.lower <= mpmath.pi**2 / 6 <= z.upper


def test_ln_zeta_tail_bound_holds(ctx30):
    for m in range(2, 80, 2):
        zm1 = to_fraction(zeta_even_minus_one(m, ctx30).upper)
        assert zm1 <= ln_zeta_tail_bound(m)


def test_prime_zeta_examples(ctx30):
    assert mpmath.nstr(prime_zeta_even(2, ctx30).value, 15).startswith("0.4522474200")
    assert mpmath.nstr(prime_zeta_even(4, ctx30).value, 15).startswith("0.0769931397")


@pytest.mark.parametrize("s,limit", [(2, 10**6), (4, 10**4)])
def test_prime_zeta_against_direct_prime_sum(ctx30, s, limit):
    lo, hi = prime_sum_oracle(s, limit, ctx30)
    p = prime_zeta_even(s, ctx30)
    plo, phi = _bracket(p)
    assert plo <= hi and lo <= phi
    if s == 4:
        assert hi - lo < Fraction(1, 10**12)


def test_prime_zeta_100_bracket(ctx30):
    lo, hi = _bracket(prime_zeta_even(100, ctx30))
    base = Fraction(1, 2**100)
    assert lo - base > 0
    assert hi - base < 4 * Fraction(1, 3**100)


def test_prime_zeta_below_zeta_minus_one(ctx30):
    # the gap is ~4^-s, so ask for precision relative to 2^-s
    for s in range(2, 120, 2):
        tol = Fraction(1, 10**ctx30.working_digits * 2**s)
        assert prime_zeta_even(s, ctx30, tol=tol).upper < zeta_even_minus_one(s, ctx30).lower


def test_prime_zeta_includes_two(ctx30):
    # against mpmath's own prime zeta, which sums over every prime
    with mpmath.workdps(60):
        for s in (2, 6, 20):
            p = prime_zeta_even(s, ctx30)
            assert p.lower <= mpmath.primezeta(s) <= p.upper


def test_bounds_survive_precision_reduction():
    lo, hi = make_context(12), make_context(60)
    for s in (2, 4, 10, 64, 130, 300):
        for fn in (zeta_even, prime_zeta_even):
            coarse, fine = fn(s, lo), fn(s, hi)
            assert coarse.lower <= fine.value <= coarse.upper


def test_tighter_tolerance_uses_more_terms(ctx30):
    from kbconst.special_functions import prime_zeta_terms

    assert prime_zeta_terms(2, ctx30) < prime_zeta_terms(2, ctx30, tol=Fraction(1, 10**80))
    p = prime_zeta_even(2, ctx30, tol=Fraction(1, 10**60))
    assert p.trunc_bound < mpmath.mpf(10) ** -60
