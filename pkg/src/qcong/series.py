"""Truncated formal power series in q with exact integer coefficients.

A :class:`Series` knows the coefficients of ``q^0 .. q^(order-1)``.  It may
carry a modulus, in which case every coefficient is kept as a canonical
residue in ``[0, modulus)``.  Results of binary operations never claim more
precision than the least precise operand.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class SeriesError(ValueError):
    """Raised for invalid series operations."""


class ModulusMismatch(SeriesError):
    pass


class NonUnitError(SeriesError):
    pass


class Series:
    __slots__ = ("coeffs", "modulus", "_nonzero")

    def __init__(self, coeffs: Iterable[int], modulus: int | None = None):
        coeffs = tuple(int(c) for c in coeffs)
        if not coeffs:
            raise SeriesError("a series needs order >= 1")
        if modulus is not None:
            modulus = int(modulus)
            if modulus < 2:
                raise SeriesError(f"modulus must be >= 2, got {modulus}")
            coeffs = tuple(c % modulus for c in coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "_nonzero", None)

    def __setattr__(self, name, value):
        raise AttributeError("Series is immutable")

    @classmethod
    def _raw(cls, coeffs: tuple[int, ...], modulus: int | None) -> Series:
        # coeffs must already be canonical for the modulus
        s = cls.__new__(cls)
        object.__setattr__(s, "coeffs", coeffs)
        object.__setattr__(s, "modulus", modulus)
        object.__setattr__(s, "_nonzero", None)
        return s

    @classmethod
    def zero(cls, order: int, modulus: int | None = None) -> Series:
        return cls._raw((0,) * _check_order(order), modulus)

    @classmethod
    def one(cls, order: int, modulus: int | None = None) -> Series:
        return cls.monomial(0, order, 1, modulus)

    @classmethod
    def monomial(cls, power: int, order: int, coeff: int = 1,
                 modulus: int | None = None) -> Series:
        """``coeff * q^power`` truncated to ``order``."""
        if power < 0:
            raise SeriesError("negative powers of q are not supported")
        coeffs = [0] * _check_order(order)
        if power < order:
            coeffs[power] = coeff
        return cls(coeffs, modulus)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def nonzero_terms(self) -> tuple[tuple[int, int], ...]:
        """``(index, coefficient)`` pairs for the nonzero coefficients."""
        nz = self._nonzero
        if nz is None:
            nz = tuple((i, c) for i, c in enumerate(self.coeffs) if c)
            object.__setattr__(self, "_nonzero", nz)
        return nz

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, key):
        return self.coeffs[key]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.modulus == other.modulus and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.modulus, self.coeffs))

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        if self.order > 8:
            head += ", ..."
        mod = f", modulus={self.modulus}" if self.modulus else ""
        return f"Series([{head}], order={self.order}{mod})"

    def __add__(self, other):
        return add(self, _coerce(other, self))

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1)

    def __sub__(self, other):
        return add(self, -_coerce(other, self))

    def __rsub__(self, other):
        return add(_coerce(other, self), -self)

    def __mul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return divide(self, other)

    def __pow__(self, exponent: int):
        return power(self, exponent)

    def truncate(self, order: int) -> Series:
        order = _check_order(order)
        if order >= self.order:
            return self
        return Series._raw(self.coeffs[:order], self.modulus)


def _check_order(order: int) -> int:
    if order < 1:
        raise SeriesError(f"order must be >= 1, got {order}")
    return order


def _coerce(value, like: Series) -> Series:
    if isinstance(value, Series):
        return value
    if isinstance(value, int):
        return Series.monomial(0, like.order, value, like.modulus)
    raise TypeError(f"cannot combine Series with {type(value).__name__}")


def _common(a: Series, b: Series) -> tuple[int, int | None]:
    if a.modulus != b.modulus:
        raise ModulusMismatch(
            f"modulus mismatch: {a.modulus} vs {b.modulus}")
    return min(a.order, b.order), a.modulus


def add(a: Series, b: Series) -> Series:
    n, m = _common(a, b)
    ac, bc = a.coeffs, b.coeffs
    if m is None:
        out = tuple(ac[i] + bc[i] for i in range(n))
    else:
        out = tuple((ac[i] + bc[i]) % m for i in range(n))
    return Series._raw(out, m)


def scale(a: Series, k: int) -> Series:
    m = a.modulus
    if m is None:
        return Series._raw(tuple(k * c for c in a.coeffs), None)
    return Series._raw(tuple(k * c % m for c in a.coeffs), m)


def _sparse_mul(dense: Sequence[int], sparse: Sequence[tuple[int, int]],
                n: int) -> list[int]:
    out = [0] * n
    for k, c in sparse:
        if k >= n:
            break
        if c == 1:
            for i in range(n - k):
                out[i + k] += dense[i]
        elif c == -1:
            for i in range(n - k):
                out[i + k] -= dense[i]
        else:
            for i in range(n - k):
                out[i + k] += c * dense[i]
    return out


def mul(a: Series, b: Series) -> Series:
    """Truncated Cauchy product, driven by the sparser operand."""
    n, m = _common(a, b)
    a_nz, b_nz = a.nonzero_terms(), b.nonzero_terms()
    if len(a_nz) <= len(b_nz):
        out = _sparse_mul(b.coeffs, a_nz, n)
    else:
        out = _sparse_mul(a.coeffs, b_nz, n)
    if m is not None:
        out = [c % m for c in out]
    return Series._raw(tuple(out), m)


def _unit_inverse(c: int, modulus: int | None) -> int:
    if modulus is None:
        if c == 0:
            raise NonUnitError(
                "constant term is 0 (positive q-valuation, shift first)")
        if c not in (1, -1):
            raise NonUnitError(f"constant term {c} is not a unit in Z")
        return c
    if c == 0:
        raise NonUnitError(
            "constant term is 0 (positive q-valuation, shift first)")
    try:
        return pow(c, -1, modulus)
    except ValueError:
        raise NonUnitError(
            f"constant term {c} is not a unit modulo {modulus}") from None


def divide(a: Series, b: Series) -> Series:
    """Solve ``b * x = a`` for ``x``; ``b`` must have a unit constant term.

    Runs the convolution recurrence over the nonzero terms of ``b`` only, so
    dividing by a pochhammer series costs O(N^1.5).
    """
    n, m = _common(a, b)
    inv0 = _unit_inverse(b.coeffs[0], m)
    tail = [(k, c) for k, c in b.nonzero_terms() if 0 < k < n]
    plus = [k for k, c in tail if c == 1]
    minus = [k for k, c in tail if c == -1]
    other = [(k, c) for k, c in tail if c not in (1, -1)]
    ac = a.coeffs
    x = [0] * n
    for i in range(n):
        s = ac[i]
        for k in plus:
            if k > i:
                break
            s -= x[i - k]
        for k in minus:
            if k > i:
                break
            s += x[i - k]
        for k, c in other:
            if k > i:
                break
            s -= c * x[i - k]
        s *= inv0
        if m is not None:
            s %= m
        x[i] = s
    return Series._raw(tuple(x), m)


def invert(a: Series) -> Series:
    return divide(Series.one(a.order, a.modulus), a)


def power(a: Series, exponent: int) -> Series:
    if exponent < 0:
        return power(invert(a), -exponent)
    result = Series.one(a.order, a.modulus)
    for _ in range(exponent):
        result = mul(result, a)
    return result


def substitute_power(a: Series, k: int) -> Series:
    """Replace q by q^k, keeping the order of ``a``."""
    if k < 1:
        raise SeriesError(f"substitution power must be >= 1, got {k}")
    if k == 1:
        return a
    n = a.order
    out = [0] * n
    for j, c in enumerate(a.coeffs[: (n - 1) // k + 1]):
        out[j * k] = c
    return Series._raw(tuple(out), a.modulus)


def shift(a: Series, s: int) -> Series:
    """Multiply by q^s; the top ``s`` coefficients fall off."""
    if s < 0:
        raise SeriesError(
            f"cannot shift by {s}: negative q-valuation is not supported")
    if s == 0:
        return a
    n = a.order
    out = (0,) * min(s, n) + a.coeffs[: max(n - s, 0)]
    return Series._raw(out, a.modulus)


def component(a: Series, m: int, r: int) -> Series:
    """Coefficients ``a[m*j + r]`` reindexed to ``q^j``."""
    if m < 1:
        raise SeriesError(f"dissection modulus must be >= 1, got {m}")
    if not 0 <= r < m:
        raise SeriesError(f"residue {r} out of range [0, {m - 1}]")
    if r >= a.order:
        raise SeriesError(
            f"residue {r} lies beyond the known range (order {a.order})")
    return Series._raw(a.coeffs[r::m], a.modulus)


def reduce_mod(a: Series, modulus: int) -> Series:
    if modulus < 2:
        raise SeriesError(f"modulus must be >= 2, got {modulus}")
    if a.modulus is not None:
        if a.modulus % modulus:
            raise ModulusMismatch(
                f"cannot reduce a series mod {a.modulus} to mod {modulus}")
        if a.modulus == modulus:
            return a
    return Series._raw(tuple(c % modulus for c in a.coeffs), modulus)


@dataclass(frozen=True)
class Difference:
    """Outcome of :func:`first_difference` over ``[0, compared)``."""

    compared: int
    index: int | None = None
    left: int | None = None
    right: int | None = None

    def __bool__(self) -> bool:
        return self.index is not None


def first_difference(a: Series, b: Series) -> Difference:
    """Smallest index where ``a`` and ``b`` disagree.

    The result is falsy when they agree on the common range.
    """
    n, _ = _common(a, b)
    ac, bc = a.coeffs, b.coeffs
    for i in range(n):
        if ac[i] != bc[i]:
            return Difference(n, i, ac[i], bc[i])
    return Difference(n)
