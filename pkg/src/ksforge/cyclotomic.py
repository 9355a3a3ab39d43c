"""Exact arithmetic in the cyclotomic integers Z[zeta_L].

A value is stored as a coefficient vector ``(c_0, ..., c_{L-1})`` standing for
``sum(c_i * zeta_L**i)``.  The representation is not unique (``1 + zeta_3 +
zeta_3**2`` is zero), so equality is decided by reducing modulo the cyclotomic
polynomial Phi_L, which is exact over the integers because Phi_L is monic.

Coefficients are Python ints, but every constructed value is checked against
the signed 64-bit range so that overflow surfaces as an error instead of
silently growing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def _check_range(coeffs: Sequence[int]) -> None:
    for c in coeffs:
        if c > INT64_MAX or c < INT64_MIN:
            raise OverflowError(f"coefficient {c} exceeds signed 64-bit range")


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial, coefficients in ascending degree.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __mul__(self, other: IntPoly) -> IntPoly:
        if not self.coeffs or not other.coeffs:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    def __divmod__(self, other: IntPoly) -> tuple[IntPoly, IntPoly]:
        if not other.is_monic():
            raise ValueError("only division by a monic polynomial is exact over Z")
        q, r = _divmod_monic(list(self.coeffs), other.coeffs)
        return IntPoly(tuple(q)), IntPoly(tuple(r))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            s += f" {sign} {body}"
        return s


def _divmod_monic(num: list[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    # Long division by a monic divisor never leaves the integers.
    dd = len(den) - 1
    rem = list(num)
    if len(rem) <= dd:
        return [], rem
    quot = [0] * (len(rem) - dd)
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        quot[i - dd] = c
        for j in range(dd + 1):
            rem[i - dd + j] -= c * den[j]
    return quot, rem[:dd]


def _reduce_monic(num: Sequence[int], den: Sequence[int]) -> list[int]:
    dd = len(den) - 1
    rem = list(num)
    for i in range(len(rem) - 1, dd - 1, -1):
        c = rem[i]
        if c:
            for j in range(dd + 1):
                rem[i - dd + j] -= c * den[j]
    rem = rem[:dd]
    if len(rem) < dd:
        rem.extend([0] * (dd - len(rem)))
    return rem


@lru_cache(maxsize=None)
def cyclotomic_poly(L: int) -> IntPoly:
    """Return Phi_L via (x^L - 1) / prod(Phi_d for proper divisors d of L)."""
    if L < 1:
        raise ValueError(f"cyclotomic order must be positive, got {L}")
    quotient = IntPoly((-1,) + (0,) * (L - 1) + (1,))
    for d in divisors(L):
        if d == L:
            continue
        quotient, rem = divmod(quotient, cyclotomic_poly(d))
        assert not rem.coeffs, f"inexact division computing Phi_{L} by Phi_{d}"
    return quotient


@dataclass(frozen=True, eq=False)
class CycInt:
    """Element of Z[zeta_L] as ``sum(coeffs[i] * zeta_L**i)``.

    ``==`` compares represented values (zero test of the difference);
    ``same_coeffs`` compares representations.
    """

    order: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.order, int) or self.order < 1:
            raise ValueError(f"order must be a positive integer, got {self.order!r}")
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) != self.order:
            raise ValueError(
                f"expected {self.order} coefficients, got {len(coeffs)}"
            )
        _check_range(coeffs)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_int(cls, L: int, k: int) -> CycInt:
        if L < 1:
            raise ValueError(f"order must be positive, got {L}")
        return cls(L, (k,) + (0,) * (L - 1))

    @cached_property
    def canonical(self) -> tuple[int, ...]:
        """Remainder modulo Phi_L: the unique coordinates in the power basis
        ``1, zeta, ..., zeta**(phi(L)-1)``."""
        return tuple(_reduce_monic(self.coeffs, cyclotomic_poly(self.order).coeffs))

    def is_zero(self) -> bool:
        return not any(self.canonical)

    def as_int(self) -> int | None:
        """The integer this element equals, or None if it is not rational."""
        c = self.canonical
        if any(c[1:]):
            return None
        return c[0] if c else 0

    def same_coeffs(self, other: CycInt) -> bool:
        return self.order == other.order and self.coeffs == other.coeffs

    def _coerce(self, other) -> CycInt:
        if isinstance(other, CycInt):
            if other.order != self.order:
                raise ValueError(
                    f"order mismatch: {self.order} vs {other.order}; lift_order both "
                    "operands to a common multiple first"
                )
            return other
        if isinstance(other, int):
            return CycInt.from_int(self.order, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycInt(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        L = self.order
        out = [0] * L
        b_terms = [(j, b) for j, b in enumerate(other.coeffs) if b]
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in b_terms:
                    out[(i + j) % L] += a * b
        return CycInt(L, tuple(out))

    __rmul__ = __mul__

    def conj(self) -> CycInt:
        L = self.order
        out = [0] * L
        for i, c in enumerate(self.coeffs):
            out[(-i) % L] = c
        return CycInt(L, tuple(out))

    def __eq__(self, other):
        other = self._coerce(other) if isinstance(other, (CycInt, int)) else NotImplemented
        if other is NotImplemented:
            return other
        return self.canonical == other.canonical

    def __hash__(self):
        return hash((self.order, self.canonical))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z{self.order}^{i}")
        return f"CycInt({' + '.join(terms) or '0'})"

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data) -> CycInt:
        if not isinstance(data, dict) or set(data) != {"order", "coeffs"}:
            raise ValueError(f"malformed CycInt object: {data!r}")
        order, coeffs = data["order"], data["coeffs"]
        if not isinstance(order, int) or isinstance(order, bool):
            raise ValueError("CycInt order must be an integer")
        if not isinstance(coeffs, list) or not all(
            isinstance(c, int) and not isinstance(c, bool) for c in coeffs
        ):
            raise ValueError("CycInt coeffs must be a list of integers")
        return cls(order, tuple(coeffs))


def cyc_root(L: int, k: int) -> CycInt:
    """zeta_L ** k."""
    if L < 1:
        raise ValueError(f"root order must be positive, got {L}")
    coeffs = [0] * L
    coeffs[k % L] = 1
    return CycInt(L, tuple(coeffs))


def zero(L: int) -> CycInt:
    return CycInt.from_int(L, 0)


def one(L: int) -> CycInt:
    return CycInt.from_int(L, 1)


def add(a: CycInt, b: CycInt) -> CycInt:
    return a + b


def mul(a: CycInt, b: CycInt) -> CycInt:
    return a * b


def neg(a: CycInt) -> CycInt:
    return -a


def conj(a: CycInt) -> CycInt:
    return a.conj()


def is_zero(a: CycInt) -> bool:
    return a.is_zero()


def lift_order(a: CycInt, M: int) -> CycInt:
    """Re-express ``a`` in Z[zeta_M]; requires ``a.order`` to divide ``M``."""
    if M < 1 or M % a.order:
        raise ValueError(f"cannot lift order {a.order} to {M}: not a multiple")
    step = M // a.order
    coeffs = [0] * M
    for i, c in enumerate(a.coeffs):
        coeffs[i * step] = c
    return CycInt(M, tuple(coeffs))


def inner_product(x: Sequence[CycInt], y: Sequence[CycInt]) -> CycInt:
    """<x, y> = sum(x_i * conj(y_i))."""
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if not x:
        raise ValueError("inner product of empty vectors has no defined order")
    L = x[0].order
    acc = [0] * L
    for a, b in zip(x, y):
        if a.order != L or b.order != L:
            raise ValueError("inner_product requires a uniform root order")
        b_terms = [(j, c) for j, c in enumerate(b.coeffs) if c]
        for i, ca in enumerate(a.coeffs):
            if ca:
                for j, cb in b_terms:
                    acc[(i - j) % L] += ca * cb
    return CycInt(L, tuple(acc))


def exponent_inner_product(a: Sequence[int], b: Sequence[int], L: int) -> CycInt:
    """<zeta^a, zeta^b> for exponent vectors: the histogram of (a_j - b_j) mod L."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    hist = [0] * L
    for p, q in zip(a, b):
        hist[(p - q) % L] += 1
    return CycInt(L, tuple(hist))


def root_vector(exponents: Sequence[int], L: int) -> tuple[CycInt, ...]:
    return tuple(cyc_root(L, e) for e in exponents)
