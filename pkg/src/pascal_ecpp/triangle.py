"""Generalized Pascal triangles built from the powers of a digit string.

Row n of the ``a0 a1 ... a(m-1)``-based triangle holds the coefficients of
``(a0 + a1 x + ... + a(m-1) x^(m-1))^n``, lowest power first, so row 1 is
the digit string itself and the decimal value of row n (with carries) is
the n-th power of the base number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import NotFound
from .numtheory import FactoredInteger, bounded_factor, is_probable_prime


@dataclass(frozen=True)
class TriangleBase:
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) < 2:
            raise ValueError("a base needs at least two digits")
        if any(not 0 <= d <= 9 for d in self.digits):
            raise ValueError("base digits must lie in [0, 9]")
        if self.digits[0] == 0:
            raise ValueError("leading digit must be nonzero")

    @classmethod
    def parse(cls, text: str | int) -> "TriangleBase":
        text = str(text)
        if not text.isdigit():
            raise ValueError(f"base must be a digit string, got {text!r}")
        return cls(tuple(int(c) for c in text))

    @property
    def m(self) -> int:
        return len(self.digits)

    def __str__(self):
        return "".join(map(str, self.digits))


BASE_112 = TriangleBase((1, 1, 2))


@dataclass(frozen=True)
class TriangleRow:
    n: int
    coeffs: tuple[int, ...]

    def __str__(self):
        return f"{self.n}: " + " ".join(map(str, self.coeffs))


def first_row() -> TriangleRow:
    return TriangleRow(0, (1,))


def next_row(base: TriangleBase, row: TriangleRow) -> TriangleRow:
    """E[k, n+1] = sum_j a_j E[k-j, n], missing indices read as zero."""
    old = row.coeffs
    width = (base.m - 1) * (row.n + 1) + 1
    new = [0] * width
    for j, a in enumerate(base.digits):
        if a:
            for k, e in enumerate(old):
                new[k + j] += a * e
    return TriangleRow(row.n + 1, tuple(new))


def rows(base: TriangleBase, max_row: int) -> Iterator[TriangleRow]:
    row = first_row()
    yield row
    for _ in range(max_row):
        row = next_row(base, row)
        yield row


def power_row(base: TriangleBase, n: int) -> TriangleRow:
    """Row n by binary powering of the base polynomial (Kronecker packing)."""
    width = n * max(sum(base.digits), 2).bit_length() + 1
    packed = sum(a << (width * j) for j, a in enumerate(base.digits))
    value = packed**n
    mask = (1 << width) - 1
    size = (base.m - 1) * n + 1
    return TriangleRow(n, tuple((value >> (width * k)) & mask for k in range(size)))


def center(base: TriangleBase, n: int) -> int:
    """E[n, n] of a three-digit base, read off the n-th power directly."""
    if base.m != 3:
        raise ValueError("the center element is defined for three-digit bases")
    width = n * max(sum(base.digits), 2).bit_length() + 1
    packed = sum(a << (width * j) for j, a in enumerate(base.digits))
    return ((packed**n) >> (width * n)) & ((1 << width) - 1)


def hunt_center_primes(base: TriangleBase, max_row: int,
                       prp_bases: int = 20) -> list[tuple[int, int, int]]:
    """(row, digit count, value) for every row in [2, max_row] whose center is PRP."""
    if base.m != 3:
        raise ValueError("the center element is defined for three-digit bases")
    hits = []
    for row in rows(base, max_row):
        if row.n < 2:
            continue
        value = row.coeffs[row.n]
        if is_probable_prime(value, prp_bases):
            hits.append((row.n, len(str(value)), value))
    return hits


def rows_mod(base: TriangleBase, modulus: int, max_row: int) -> Iterator[np.ndarray]:
    """Rows 0..max_row reduced modulo ``modulus``, as int64 arrays."""
    if modulus * sum(base.digits) >= 2**62:
        raise ValueError("modulus too large for int64 row arithmetic")
    kernel = np.array(base.digits, dtype=np.int64)
    row = np.ones(1, dtype=np.int64)
    yield row
    for _ in range(max_row):
        row = np.convolve(row, kernel) % modulus
        yield row


def first_factor_row(base: TriangleBase, p: int, max_row: int) -> int:
    """First row in which p divides an element at a position k >= 2."""
    for n, row in enumerate(rows_mod(base, p, max_row)):
        if (row[2:] == 0).any():
            return n
    raise NotFound(f"{p} divides no interior element up to row {max_row}")


def first_factor_rows(base: TriangleBase, primes: Iterable[int],
                      max_row: int) -> dict[int, int | None]:
    """:func:`first_factor_row` for several primes; None where not found."""
    out = {}
    for p in primes:
        try:
            out[p] = first_factor_row(base, p, max_row)
        except NotFound:
            out[p] = None
    return out


def easy_factor_center(base: TriangleBase, n: int, bound: int = 10**6,
                       effort: int = 1) -> FactoredInteger:
    return bounded_factor(center(base, n), bound, effort)


def center_divisibility_stats(base: TriangleBase, max_row: int,
                              divisors: Iterable[int],
                              checkpoints: Iterable[int] = ()) -> dict:
    """Fraction of rows 1..max_row whose center is divisible by each d.

    Returns ``{"final": {d: (hits, rows)}, "trace": {checkpoint: {d: (hits, rows)}}}``.
    """
    if base.m != 3:
        raise ValueError("the center element is defined for three-digit bases")
    divisors = list(divisors)
    modulus = math.lcm(*divisors)
    marks = set(checkpoints)
    hits = dict.fromkeys(divisors, 0)
    trace = {}
    for n, row in enumerate(rows_mod(base, modulus, max_row)):
        if n == 0:
            continue
        c = int(row[n])
        for d in divisors:
            if c % d == 0:
                hits[d] += 1
        if n in marks:
            trace[n] = {d: (hits[d], n) for d in divisors}
    return {"final": {d: (hits[d], max_row) for d in divisors}, "trace": trace}
