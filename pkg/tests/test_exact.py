import math
from fractions import Fraction as F

import mpmath
import pytest

from fairdiv.exact import ceil_sqrt, cmp_sqrt_log, log2_bounds, sqrt_bounds

mpmath.mp.dps = 60


def test_ceil_sqrt():
    assert [ceil_sqrt(k) for k in range(1, 11)] == [1, 2, 2, 2, 3, 3, 3, 3, 3, 4]


@pytest.mark.parametrize("n", [2, 3, 5, 16, 99, 12345])
def test_sqrt_bounds_enclose(n):
    lo, hi = sqrt_bounds(n, 40)
    exact = mpmath.sqrt(n)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= exact <= mpmath.mpf(hi.numerator) / hi.denominator
    assert hi - lo <= F(1, 2**40)


@pytest.mark.parametrize("k", [1, 2, 3, 6, 7, 1000, 2**20 + 1, 3**30])
def test_log2_bounds_enclose(k):
    lo, hi = log2_bounds(k, 48)
    exact = mpmath.log(k, 2)
    assert mpmath.mpf(lo.numerator) / lo.denominator <= exact <= mpmath.mpf(hi.numerator) / hi.denominator
    assert hi - lo <= F(1, 2**47)


def test_log2_rejects_nonpositive():
    with pytest.raises(ValueError):
        log2_bounds(0, 8)


@pytest.mark.parametrize("n,k,coef", [(2, 8, 65), (3, 6, 4), (4, 8, 1), (7, 30, 65), (1, 1, 65)])
def test_cmp_sqrt_log_against_mpmath(n, k, coef):
    target = coef * mpmath.sqrt(n) * mpmath.log(k, 2)
    for delta in (F(-1, 10**6), F(0), F(1, 10**6)):
        approx = F(str(mpmath.nstr(target, 40))) + delta
        sign = cmp_sqrt_log(approx, n, k, coef)
        expected = mpmath.sign(mpmath.mpf(approx.numerator) / approx.denominator - target)
        if sign is not None:
            assert sign == expected


def test_exact_threshold_equality():
    # sqrt(4) * log2(8) = 6 exactly
    assert cmp_sqrt_log(F(6), 4, 8) == 0
    assert cmp_sqrt_log(F(6), 4, 8, coef=2) == -1
    assert cmp_sqrt_log(F(13), 4, 8, coef=2) == 1
