"""Expansion of q-Pochhammer products and eta quotients."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .series import Series, SeriesError, _sparse_mul, divide, shift


class ValuationError(SeriesError):
    """An eta-quotient term would need a negative power of q."""


@lru_cache(maxsize=None)
def pentagonal_terms(r: int, order: int) -> tuple[tuple[int, int], ...]:
    """Sorted nonzero ``(index, sign)`` pairs of ``(q^r; q^r)_inf`` below ``order``.

    Euler's pentagonal number theorem puts ``(-1)^k`` at ``r*k*(3k-1)/2`` for
    every integer ``k``.
    """
    if r < 1:
        raise SeriesError(f"pochhammer subscript must be >= 1, got {r}")
    terms = [(0, 1)]
    k = 1
    while r * k * (3 * k - 1) // 2 < order:
        sign = -1 if k % 2 else 1
        terms.append((r * k * (3 * k - 1) // 2, sign))
        g = r * k * (3 * k + 1) // 2
        if g < order:
            terms.append((g, sign))
        k += 1
    terms.sort()
    return tuple(terms)


@lru_cache(maxsize=256)
def pochhammer(r: int, order: int, modulus: int | None = None) -> Series:
    """Truncated expansion of ``f_r = prod_{j>=1} (1 - q^(r*j))``."""
    if order < 1:
        raise SeriesError(f"order must be >= 1, got {order}")
    coeffs = [0] * order
    for i, sign in pentagonal_terms(r, order):
        coeffs[i] = sign
    return Series(coeffs, modulus)


def pochhammer_general(sign: int, a: int, b: int, order: int,
                       modulus: int | None = None) -> Series:
    """Truncated ``prod_{j>=0} (1 + sign * q^(a + j*b))``."""
    if sign not in (1, -1):
        raise SeriesError(f"sign must be +1 or -1, got {sign}")
    if a < 1 or b < 1:
        raise SeriesError(f"need a >= 1 and b >= 1, got a={a}, b={b}")
    coeffs = [0] * order
    coeffs[0] = 1
    e = a
    while e < order:
        # multiply in place by (1 + sign*q^e), top-down
        for i in range(order - 1, e - 1, -1):
            coeffs[i] += sign * coeffs[i - e]
        e += b
    return Series(coeffs, modulus)


@dataclass(frozen=True)
class EtaQuotient:
    """``coeff * q^qpow * prod f_r^e_r``.

    ``factors`` is stored as a tuple of ``(r, e)`` sorted by subscript with
    zero exponents dropped, so equal quotients compare and hash equal.
    """

    coeff: int = 1
    qpow: int = 0
    factors: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        merged: dict[int, int] = {}
        for r, e in self.factors:
            if r < 1:
                raise SeriesError(f"subscript must be >= 1, got f{r}")
            merged[r] = merged.get(r, 0) + e
        canon = tuple(sorted((r, e) for r, e in merged.items() if e))
        object.__setattr__(self, "factors", canon)

    @classmethod
    def of(cls, factors: Mapping[int, int], coeff: int = 1,
           qpow: int = 0) -> EtaQuotient:
        return cls(coeff, qpow, tuple(factors.items()))

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self.factors)

    def __mul__(self, other: EtaQuotient) -> EtaQuotient:
        return EtaQuotient(self.coeff * other.coeff, self.qpow + other.qpow,
                           self.factors + other.factors)

    def __str__(self) -> str:
        from .expr import format_term
        return format_term(self)


def eta_quotient(t: EtaQuotient, order: int,
                 modulus: int | None = None) -> Series:
    """Expand an eta quotient to ``order`` coefficients.

    Positive powers are multiplied in first as sparse pentagonal series, then
    the negative powers are divided out one factor at a time.
    """
    if order < 1:
        raise SeriesError(f"order must be >= 1, got {order}")
    if t.qpow < 0:
        raise ValuationError(
            f"term {t} has q-valuation {t.qpow} < 0 "
            "(negative powers of q are not supported)")
    if t.qpow >= order or t.coeff == 0 or (
            modulus is not None and t.coeff % modulus == 0):
        return Series.zero(order, modulus)
    # f_r factors have constant term 1, so only qpow moves the valuation
    n = order - t.qpow
    coeffs = [0] * n
    coeffs[0] = t.coeff
    for r, e in t.factors:
        for _ in range(max(e, 0)):
            coeffs = _sparse_mul(coeffs, pentagonal_terms(r, n), n)
            if modulus is not None:
                coeffs = [c % modulus for c in coeffs]
    result = Series(coeffs, modulus)
    for r, e in t.factors:
        for _ in range(max(-e, 0)):
            result = divide(result, pochhammer(r, n, modulus))
    if t.qpow:
        result = shift(Series._raw(result.coeffs + (0,) * t.qpow, modulus),
                       t.qpow)
    return result


def pentagonal_support_bound(r: int, order: int) -> int:
    return 2 * math.ceil(math.sqrt(2 * order / (3 * r))) + 1
