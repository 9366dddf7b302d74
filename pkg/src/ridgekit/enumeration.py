"""A computable bijection between positive integers and rational polynomials.

The enumeration is a pairing tower, fixed bit-exactly so indices are stable
across runs and implementations:

* positive rationals <-> positive integers through the Calkin-Wilf tree
  (index 1 is 1/1; the left child of a/b is a/(a+b), the right child is
  (a+b)/b; the index's binary digits below the leading 1 record the
  root-to-node path);
* arbitrary rationals fold the sign in: 0 -> 0, q > 0 -> 2*cw(q) - 1,
  q < 0 -> 2*cw(-q);
* a coefficient list (c_0 .. c_D, c_D != 0) maps each entry through the
  rational code, decrements the last (nonzero) code, and folds the list
  right-to-left with the Cantor pair;
* finally m = 2 + pair(D, folded), and index 1 is reserved for the zero
  polynomial.

Decoding is total on positive integers of any size.  Indices decode to
polynomials whose degree can be astronomically larger than the number of
nonzero terms, so polynomials are stored sparsely and zero runs are folded
in closed form (pair(0, 0) = 0) instead of one step at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from .rationals import RationalLike, rationalize


def cantor_pair(a: int, b: int) -> int:
    s = a + b
    return s * (s + 1) // 2 + b


def cantor_unpair(z: int) -> tuple[int, int]:
    w = (isqrt(8 * z + 1) - 1) // 2
    b = z - w * (w + 1) // 2
    return w - b, b


_CW_BIT_CAP = 10**7


def calkin_wilf_index(q: Fraction) -> int:
    """Index (>= 1) of a positive rational in the Calkin-Wilf tree.

    The index's bit length is the sum of the continued-fraction quotients of
    ``q``, so rationals with a huge quotient (like 10^9 or 1/10^9) have
    indices too large to materialize; those raise OverflowError.
    """
    if q <= 0:
        raise ValueError("calkin_wilf_index needs a positive rational")
    num, den = q.numerator, q.denominator
    runs: list[tuple[str, int]] = []  # path segments, leaf upward
    total_bits = 0
    while num != den:
        if num < den:
            k = (den - 1) // num  # steps of den -= num while still num < den
            runs.append(("0", k))
            den -= k * num
        else:
            k = (num - 1) // den
            runs.append(("1", k))
            num -= k * den
        total_bits += k
        if total_bits > _CW_BIT_CAP:
            raise OverflowError("rational code too large to materialize")
    bits = "".join(bit * count for bit, count in reversed(runs))
    return int("1" + bits, 2)


def calkin_wilf_rational(index: int) -> Fraction:
    """Inverse of :func:`calkin_wilf_index`."""
    if index < 1:
        raise ValueError("index must be >= 1")
    num, den = 1, 1
    for bit in bin(index)[3:]:
        if bit == "0":
            den = num + den
        else:
            num = num + den
    return Fraction(num, den)


def rational_code(q: Fraction) -> int:
    """Sign-folded rational code: a bijection rationals <-> nonnegative integers."""
    if q == 0:
        return 0
    c = calkin_wilf_index(abs(q))
    return 2 * c - 1 if q > 0 else 2 * c


def code_rational(z: int) -> Fraction:
    if z < 0:
        raise ValueError("codes are nonnegative")
    if z == 0:
        return Fraction(0)
    if z % 2 == 1:
        return calkin_wilf_rational((z + 1) // 2)
    return -calkin_wilf_rational(z // 2)


_EVAL_DEGREE_CAP = 100_000


@dataclass(frozen=True)
class RationalPoly:
    """A polynomial with exact rational coefficients, stored sparsely.

    ``terms`` holds (exponent, coefficient) pairs with ascending exponents
    and nonzero coefficients; the empty tuple is the zero polynomial.  The
    sparse form matters: decoded indices can have enormous degree with only
    a handful of nonzero terms.
    """

    terms: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        last = -1
        for e, c in self.terms:
            if e <= last:
                raise ValueError("exponents must be strictly ascending")
            if c == 0:
                raise ValueError("stored coefficients must be nonzero")
            last = e

    @classmethod
    def zero(cls) -> "RationalPoly":
        return cls(())

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[RationalLike]) -> "RationalPoly":
        """Dense constant-first coefficient list; zeros are dropped."""
        terms = []
        for e, c in enumerate(coeffs):
            q = rationalize(c)
            if q != 0:
                terms.append((e, q))
        return cls(tuple(terms))

    @classmethod
    def from_terms(cls, items: Iterable[tuple[int, RationalLike]]) -> "RationalPoly":
        merged: dict[int, Fraction] = {}
        for e, c in items:
            merged[e] = merged.get(e, Fraction(0)) + rationalize(c)
        return cls(tuple(sorted((e, c) for e, c in merged.items() if c != 0)))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self.terms[-1][0] if self.terms else -1

    def coefficient(self, exponent: int) -> Fraction:
        for e, c in self.terms:
            if e == exponent:
                return c
        return Fraction(0)

    def dense_coefficients(self) -> list[Fraction]:
        if self.degree > _EVAL_DEGREE_CAP:
            raise ValueError("degree too large for a dense coefficient list")
        out = [Fraction(0)] * (self.degree + 1)
        for e, c in self.terms:
            out[e] = c
        return out

    def eval_exact(self, t: RationalLike) -> Fraction:
        if self.degree > _EVAL_DEGREE_CAP:
            raise ValueError("degree too large to evaluate")
        x = rationalize(t)
        total = Fraction(0)
        power_cache: dict[int, Fraction] = {}
        prev_e, prev_p = 0, Fraction(1)
        for e, c in self.terms:
            prev_p = prev_p * x ** (e - prev_e)
            prev_e = e
            total += c * prev_p
        return total

    def eval_float(self, t: float) -> float:
        if self.degree > _EVAL_DEGREE_CAP:
            raise ValueError("degree too large to evaluate")
        total = 0.0
        for e, c in self.terms:
            total += float(c) * t**e
        return total

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = [f"({c})*t^{e}" if e else f"({c})" for e, c in self.terms]
        return " + ".join(parts)


_ZERO_RUN_CAP = 1_000_000


def _fold_zero_run(acc: int, count: int) -> int:
    """Apply acc -> pair(0, acc) ``count`` times; identity when acc == 0."""
    if acc == 0 or count == 0:
        return acc
    if count > _ZERO_RUN_CAP:
        raise OverflowError(
            "encoding this sparse polynomial would produce an index too large"
            " to represent"
        )
    for _ in range(count):
        acc = cantor_pair(0, acc)
    return acc


def encode_poly(p: RationalPoly) -> int:
    """Index of a polynomial under the enumeration (1 = zero polynomial)."""
    if p.is_zero:
        return 1
    terms = p.terms
    degree = terms[-1][0]
    acc = rational_code(terms[-1][1]) - 1
    prev_e = degree
    for e, c in reversed(terms[:-1]):
        acc = _fold_zero_run(acc, prev_e - e - 1)
        acc = cantor_pair(rational_code(c), acc)
        prev_e = e
    acc = _fold_zero_run(acc, prev_e)
    return 2 + cantor_pair(degree, acc)


def decode_poly(m: int) -> RationalPoly:
    """Total inverse of :func:`encode_poly` on positive integers."""
    if m < 1:
        raise ValueError("indices start at 1")
    if m == 1:
        return RationalPoly.zero()
    degree, folded = cantor_unpair(m - 2)
    codes: dict[int, int] = {}
    rest = folded
    completed = True
    for i in range(degree):
        if rest == 0:
            completed = False
            break
        z, rest = cantor_unpair(rest)
        if z:
            codes[i] = z
    top_code = (rest if completed else 0) + 1
    codes[degree] = top_code
    terms = tuple(sorted((e, code_rational(z)) for e, z in codes.items()))
    return RationalPoly(terms)
