"""Affine short-Weierstrass arithmetic over Z/nZ for a probable prime n.

Points are ``(x, y)`` tuples and the point at infinity is ``None``.  All
inversions are explicit so that a non-invertible denominator surfaces as
:class:`FactorFound` instead of being silently absorbed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import FactorFound, RetryLimit
from .numtheory import jacobi, sqrt_mod_prime

Point = tuple[int, int] | None
INFINITY: Point = None

MAX_RESAMPLES = 32


@dataclass(frozen=True)
class CurveSpec:
    """The curve y^2 = x^3 + a x + b over Z/nZ."""

    modulus: int
    a: int
    b: int

    def __post_init__(self):
        n = self.modulus
        object.__setattr__(self, "a", self.a % n)
        object.__setattr__(self, "b", self.b % n)
        g = math.gcd(4 * self.a**3 + 27 * self.b**2, n)
        if g == n:
            raise ValueError(f"singular curve modulo {n}")
        if g > 1:
            raise FactorFound(n, g)

    def contains(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        n = self.modulus
        return (y * y - (x * x * x + self.a * x + self.b)) % n == 0


def _inverse(v: int, n: int) -> int:
    g = math.gcd(v, n)
    if g != 1:
        # v == 0 mod n never reaches here: callers handle vertical lines
        raise FactorFound(n, g)
    return pow(v, -1, n)


def add(P: Point, Q: Point, E: CurveSpec) -> Point:
    if P is None:
        return Q
    if Q is None:
        return P
    n = E.modulus
    x1, y1 = P
    x2, y2 = Q
    if (x1 - x2) % n == 0:
        if (y1 + y2) % n == 0:
            return INFINITY
        if (y1 - y2) % n:
            # same x, y1 != +-y2: only possible when n is composite
            g = math.gcd(y1 - y2, n)
            if g in (1, n):
                g = math.gcd(y1 + y2, n)
            raise FactorFound(n, g)
        lam = (3 * x1 * x1 + E.a) * _inverse(2 * y1 % n, n) % n
    else:
        lam = (y2 - y1) * _inverse((x2 - x1) % n, n) % n
    x3 = (lam * lam - x1 - x2) % n
    return x3, (lam * (x1 - x3) - y1) % n


def negate(P: Point, E: CurveSpec) -> Point:
    if P is None:
        return None
    return P[0], -P[1] % E.modulus


def scalar_mul(k: int, P: Point, E: CurveSpec) -> Point:
    """k*P by left-to-right double-and-add."""
    if k < 0:
        return scalar_mul(-k, negate(P, E), E)
    R = INFINITY
    for bit in bin(k)[2:]:
        R = add(R, R, E)
        if bit == "1":
            R = add(R, P, E)
    return R


def random_point(E: CurveSpec, rng: random.Random) -> tuple[int, int]:
    """Uniform x until the right-hand side is a square, then take its root."""
    n = E.modulus
    while True:
        x = rng.randrange(n)
        rhs = (x * x * x + E.a * x + E.b) % n
        if rhs == 0:
            return x, 0
        if jacobi(rhs, n) == 1:
            return x, sqrt_mod_prime(rhs, n)


def proof_step(E: CurveSpec, m: int, f: int, rng: random.Random,
               max_resamples: int = MAX_RESAMPLES) -> Point:
    """Look for a point P with f*P != O and m*P = O.

    Returns P on success and ``None`` when m*P != O (wrong group order).
    :class:`FactorFound` or :class:`CompositeModulus` propagate when the
    modulus turns out composite; :class:`RetryLimit` when every sampled point
    was killed by ``f``.
    """
    for _ in range(max_resamples):
        P = random_point(E, rng)
        Q = scalar_mul(f, P, E)
        if Q is None:
            continue
        if scalar_mul(m // f, Q, E) is not None:
            return None
        return P
    raise RetryLimit(f"f*P = O for {max_resamples} random points")
