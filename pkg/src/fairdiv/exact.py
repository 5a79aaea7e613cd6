"""Exact comparisons against thresholds of the form ``c * sqrt(n) * log2(K)``.

Irrational quantities are enclosed in rational intervals computed with
integer arithmetic only, then refined until the comparison is decided.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def ceil_sqrt(n: int) -> int:
    s = isqrt(n)
    return s if s * s == n else s + 1


def sqrt_bounds(n: int, bits: int) -> tuple[Fraction, Fraction]:
    s = isqrt(n << (2 * bits))
    lo = Fraction(s, 1 << bits)
    return (lo, lo) if s * s == n << (2 * bits) else (lo, Fraction(s + 1, 1 << bits))


def log2_bounds(k: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational interval containing log2(k), of width at most 2**-bits (k >= 1)."""
    if k < 1:
        raise ValueError("log2 of a non-positive integer")
    e = k.bit_length() - 1
    if k == 1 << e:
        return Fraction(e), Fraction(e)
    # mantissa x = k / 2**e in (1, 2) as a fixed-point interval [lo, hi] / 2**q
    q = 2 * bits + 64
    lo = (k << q) >> e
    hi = -((-k << q) >> e)
    acc = 0
    for i in range(1, bits + 1):
        lo = (lo * lo) >> q
        hi = -((-hi * hi) >> q)
        two = 2 << q
        if lo >= two:
            acc |= 1 << (bits - i)
            lo >>= 1
            hi = -((-hi) >> 1)
        elif hi < two:
            pass
        else:  # enclosure straddles 2: stop with the digits known so far
            width = Fraction(1, 1 << (i - 1))
            base = e + Fraction(acc, 1 << bits)
            return base, base + width
    base = e + Fraction(acc, 1 << bits)
    return base, base + Fraction(1, 1 << bits)


def cmp_sqrt_log(value: Fraction, n: int, k: int, coef: int = 1, max_bits: int = 256) -> int | None:
    """Sign of ``value - coef * sqrt(n) * log2(k)``; None if undecided at ``max_bits``."""
    value = Fraction(value)
    s = isqrt(n)
    e = k.bit_length() - 1
    if s * s == n and k == 1 << e:
        t = coef * s * e
        return (value > t) - (value < t)
    bits = 32
    while bits <= max_bits:
        slo, shi = sqrt_bounds(n, bits)
        llo, lhi = log2_bounds(k, bits)
        if value < coef * slo * llo:
            return -1
        if value > coef * shi * lhi:
            return 1
        bits *= 2
    return None
