"""Dense univariate polynomials over Z/pZ.

A polynomial is a list of residues, lowest degree first, with no trailing
zeros (the zero polynomial is ``[]``).  Products go through Kronecker
substitution so one big-integer multiply does the O(d^2) work.
"""

from __future__ import annotations

import math
import random

from .errors import CompositeModulus, NoRoot


def trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f: list[int]) -> int:
    return len(f) - 1


def _pack(f: list[int], width: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(width, "little") for c in f), "little")


def mul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    # byte width big enough for any coefficient of the exact product
    bits = 2 * p.bit_length() + min(len(f), len(g)).bit_length() + 1
    width = (bits + 7) // 8
    prod = _pack(f, width) * _pack(g, width)
    raw = prod.to_bytes(width * (len(f) + len(g)), "little")
    out = [int.from_bytes(raw[i * width:(i + 1) * width], "little") % p
           for i in range(len(f) + len(g) - 1)]
    return trim(out)


def divmod_poly(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    inv = _inverse(g[-1], p)
    r = list(f)
    dg = len(g) - 1
    q = [0] * max(len(f) - dg, 0)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] % p * inv % p
        if c:
            q[i - dg] = c
            for j in range(dg):
                r[i - dg + j] -= c * g[j]
        r[i] = 0
    return trim(q), trim([c % p for c in r[:dg]])


def mod(f: list[int], g: list[int], p: int) -> list[int]:
    return divmod_poly(f, g, p)[1]


def mulmod(f: list[int], g: list[int], h: list[int], p: int) -> list[int]:
    return mod(mul(f, g, p), h, p)


def powmod(f: list[int], e: int, h: list[int], p: int) -> list[int]:
    """f^e mod (h, p)."""
    result = [1]
    base = mod(f, h, p)
    for bit in bin(e)[2:]:
        result = mulmod(result, result, h, p)
        if bit == "1":
            result = mulmod(result, base, h, p)
    return result


def _inverse(c: int, p: int) -> int:
    g = math.gcd(c, p)
    if g != 1:
        raise CompositeModulus(p, g if g < p else None, "non-invertible leading coefficient")
    return pow(c, -1, p)


def monic(f: list[int], p: int) -> list[int]:
    inv = _inverse(f[-1], p)
    return [c * inv % p for c in f]


def gcd(f: list[int], g: list[int], p: int) -> list[int]:
    while g:
        f, g = g, mod(f, g, p)
    return monic(f, p) if f else f


def evaluate(f: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def find_root(h: list[int], p: int, rng: random.Random) -> int:
    """One root of ``h`` modulo the odd (probable) prime ``p``.

    Equal-degree splitting: isolate the product of linear factors with
    gcd(x^p - x, h), then split it with gcd((x + a)^((p-1)/2) - 1, .) for
    random a, always descending into the smaller factor.
    """
    h = monic(trim([c % p for c in h]), p)
    if degree(h) < 1:
        raise NoRoot("constant polynomial")
    if degree(h) == 1:
        return -h[0] % p
    xp = powmod([0, 1], p, h, p)
    xp_minus_x = trim(xp + [0] * (2 - len(xp)))
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = gcd(h, trim(xp_minus_x), p)
    if degree(g) < 1:
        raise NoRoot(f"no root modulo {p}")
    half = (p - 1) // 2
    tries = 0
    while degree(g) > 1:
        tries += 1
        if tries > 200:
            raise CompositeModulus(p, reason="root splitting does not converge")
        t = powmod([rng.randrange(p), 1], half, g, p)
        t = t + [0] * (1 - len(t)) if t else [0]
        t[0] = (t[0] - 1) % p
        d = gcd(g, trim(t), p)
        if 0 < degree(d) < degree(g):
            other = monic(divmod_poly(g, d, p)[0], p)
            g = d if degree(d) <= degree(other) else other
    return -g[0] % p
