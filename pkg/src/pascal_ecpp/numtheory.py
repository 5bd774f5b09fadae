"""Modular arithmetic primitives on Python integers.

Everything here works on arbitrary-precision ``int`` values: the Jacobi
symbol, Miller-Rabin, Tonelli-Shanks, Cornacchia's equation in the
``u^2 + |D| v^2 = 4n`` form, and a bounded "easy" factorization that only
pulls out small primes (plus an optional Brent-rho pass).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import CompositeModulus, NonResidue, NoSolution

SMALL_LIMIT = 1 << 16

# bounded_factor effort ladder: level -> rho iteration budget
RHO_BUDGET = {0: 0, 1: 10**5, 2: 10**7}


@lru_cache(maxsize=8)
def _sieve(limit: int) -> tuple[int, ...]:
    if limit < 2:
        return ()
    flags = bytearray([1]) * (limit + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return tuple(i for i, f in enumerate(flags) if f)


def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes ``p <= limit`` (cached sieve)."""
    return _sieve(int(limit))


def is_prime_trial(n: int) -> bool:
    """Deterministic primality by trial division (only sensible for small n)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    d = 5
    r = math.isqrt(n)
    while d <= r:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 3."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"jacobi needs an odd modulus >= 3, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_probable_prime(n: int, bases: int = 20, rng: random.Random | None = None) -> bool:
    """Miller-Rabin with ``bases`` random bases drawn from [2, n-2].

    Below 2^16 the answer is exact (trial division).  Without an explicit
    ``rng`` the bases come from a generator seeded with ``n`` itself, so the
    answer for a given input never changes between runs.
    """
    if n < 2:
        return False
    if n < SMALL_LIMIT:
        return is_prime_trial(n)
    for p in primes_up_to(257):
        if n % p == 0:
            return False
    if rng is None:
        rng = random.Random(n)
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for _ in range(bases):
        x = pow(rng.randint(2, n - 2), d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def sqrt_mod_prime(a: int, p: int) -> int:
    """Square root of ``a`` modulo the (probable) prime ``p``.

    Returns the smaller of the two roots.  Raises :class:`NonResidue` when
    ``(a|p) = -1`` and :class:`CompositeModulus` when the computation can only
    fail because ``p`` is not actually prime.
    """
    a %= p
    if p == 2:
        return a
    if a == 0:
        return 0
    j = jacobi(a, p)
    if j == -1:
        raise NonResidue(f"{a} is not a square mod {p}")
    if j == 0:
        raise CompositeModulus(p, math.gcd(a, p))
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    elif p % 8 == 5:
        v = pow(2 * a, (p - 5) // 8, p)
        i = 2 * a * v * v % p
        r = a * v * (i - 1) % p
    else:
        r = _tonelli_shanks(a, p)
    if r * r % p != a:
        raise CompositeModulus(p, reason="square root check failed")
    return min(r, p - r)


def _tonelli_shanks(a: int, p: int) -> int:
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while jacobi(z, p) != -1:
        z += 1
        if z > 10_000:
            # a prime always has a non-residue far below this
            raise CompositeModulus(p, reason="no quadratic non-residue found")
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
            if i == m:
                raise CompositeModulus(p, reason="Tonelli-Shanks did not converge")
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass
class SqrtCache:
    """Square roots modulo a fixed ``modulus``, reused across discriminants.

    ``entries`` maps an element ``q`` (-1 or a prime) to a root of ``q`` when
    ``q`` is a residue, or to a root of ``q * pivot`` when it is not; ``pivot``
    is a fixed non-residue chosen on first need.
    """

    modulus: int
    entries: dict[int, int] = field(default_factory=dict)
    pivot: int | None = None
    computed: int = 0

    def _root(self, q: int) -> tuple[int, bool]:
        """Cached root for element q and whether it needed the pivot."""
        n = self.modulus
        if q not in self.entries:
            if jacobi(q, n) == 1:
                self.entries[q] = sqrt_mod_prime(q, n)
            else:
                self.entries[q] = sqrt_mod_prime(q * self._pivot(), n)
            self.computed += 1
        return self.entries[q], jacobi(q, n) != 1

    def _pivot(self) -> int:
        if self.pivot is None:
            n = self.modulus
            g = -1 if n % 4 == 3 else 2
            while jacobi(g, n) != -1:
                g += 1
                if g > 10_000:
                    raise CompositeModulus(n, reason="no quadratic non-residue found")
            self.pivot = g
        return self.pivot


def factor_small(n: int) -> list[tuple[int, int]]:
    """Complete factorization of a small positive integer by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def sqrt_of_discriminant(
    D: int,
    n: int,
    cache: SqrtCache,
    abs_factors: list[tuple[int, int]] | None = None,
) -> int:
    """A root of ``D`` modulo ``n`` assembled from cached per-prime roots."""
    if cache.modulus != n:
        raise ValueError("cache belongs to a different modulus")
    if abs_factors is None:
        abs_factors = factor_small(-D)
    root = 1
    odd_parts = [-1]
    for q, e in abs_factors:
        root = root * pow(q, e // 2, n) % n
        if e % 2:
            odd_parts.append(q)
    pivots = 0
    for q in odd_parts:
        r, used_pivot = cache._root(q)
        root = root * r % n
        pivots += used_pivot
    if pivots % 2:
        raise NonResidue(f"{D} is not a square mod {n}")
    if pivots:
        g = pow(cache.pivot, pivots // 2, n)
        try:
            root = root * pow(g, -1, n) % n
        except ValueError:
            raise CompositeModulus(n, math.gcd(g, n)) from None
    if (root * root - D) % n:
        raise CompositeModulus(n, reason="discriminant root check failed")
    return min(root, n - root)


def cornacchia(D: int, n: int, cache: SqrtCache | None = None,
               abs_factors: list[tuple[int, int]] | None = None) -> tuple[int, int]:
    """Solve ``u^2 + |D| v^2 = 4n`` with ``u = D (mod 2)``.

    Raises :class:`NoSolution` when ``n`` is not represented (which happens
    for about ``1 - 1/h`` of the split primes).
    """
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"bad discriminant {D}")
    if 4 * n <= -D:
        raise NoSolution(f"n={n} too small for D={D}")
    if n == 2:
        r = D % 2
    elif cache is not None:
        r = sqrt_of_discriminant(D, n, cache, abs_factors)
    else:
        r = sqrt_mod_prime(D, n)
    if r % 2 != D % 2:
        r = n - r
    a, b = 2 * n, r
    limit = math.isqrt(4 * n)
    while b > limit:
        a, b = b, a % b
    rest = 4 * n - b * b
    if rest % -D:
        raise NoSolution(f"{n} not represented by the principal form of {D}")
    v2 = rest // -D
    v = math.isqrt(v2)
    if v * v != v2 or v == 0:
        raise NoSolution(f"{n} not represented by the principal form of {D}")
    return b, v


@dataclass
class FactoredInteger:
    value: int
    factors: list[tuple[int, int]]
    cofactor: int = 1
    cofactor_is_prp: bool = False

    @property
    def smooth_part(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    @property
    def complete(self) -> bool:
        return self.cofactor == 1

    def check(self) -> bool:
        return self.smooth_part * self.cofactor == self.value

    def __str__(self) -> str:
        parts = [f"({p})" if e == 1 else f"({p})^{e}" for p, e in self.factors]
        if self.cofactor > 1:
            parts.append(f"({self.cofactor})")
        return "*".join(parts) or "1"


def pollard_rho(n: int, budget: int, rng: random.Random) -> int | None:
    """Brent's variant of Pollard rho; a nontrivial factor of n, or None."""
    if n % 2 == 0:
        return 2
    spent = 0
    while spent < budget:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


def bounded_factor(m: int, smooth_bound: int, effort: int = 0,
                   rng: random.Random | None = None) -> FactoredInteger:
    """Easy factorization: trial division up to ``smooth_bound``, then rho.

    Effort 0 is trial division only; efforts 1 and 2 add a Brent-rho pass on
    the cofactor with 10^5 and 10^7 iterations.  Whatever does not split is
    returned as the cofactor.
    """
    if m < 1:
        raise ValueError("bounded_factor needs m >= 1")
    if effort not in RHO_BUDGET:
        raise ValueError(f"effort must be one of {sorted(RHO_BUDGET)}")
    found: dict[int, int] = {}
    rest = m
    for p in primes_up_to(smooth_bound):
        if p * p > rest:
            break
        if rest % p == 0:
            e = 0
            while rest % p == 0:
                rest //= p
                e += 1
            found[p] = e
    if 1 < rest <= smooth_bound:
        # every prime up to sqrt(rest) was tried, so rest is prime
        found[rest] = found.get(rest, 0) + 1
        rest = 1

    leftovers = []
    if rest > 1:
        if RHO_BUDGET[effort] and not is_probable_prime(rest):
            rng = rng or random.Random(m)
            work = [rest]
            while work:
                x = work.pop()
                if is_probable_prime(x):
                    leftovers.append((x, True))
                    continue
                g = pollard_rho(x, RHO_BUDGET[effort], rng)
                if g is None:
                    leftovers.append((x, False))
                else:
                    work += [g, x // g]
        else:
            leftovers.append((rest, is_probable_prime(rest)))

    cofactor, prp = 1, False
    if leftovers:
        if all(ok for _, ok in leftovers):
            leftovers.sort()
            cofactor, prp = leftovers.pop()[0], True
            for x, _ in leftovers:
                found[x] = found.get(x, 0) + 1
        else:
            for x, ok in leftovers:
                if ok:
                    found[x] = found.get(x, 0) + 1
                else:
                    cofactor *= x
    return FactoredInteger(m, sorted(found.items()), cofactor, prp)


def exceeds_size_bound(s: int, modulus: int) -> bool:
    """Exact, conservative test of ``s > (modulus^(1/4) + 1)^2``.

    Uses ``(isqrt(s) - 1)^4 > modulus``, which implies the real inequality.
    """
    t = math.isqrt(s) - 1
    return t > 0 and t**4 > modulus


def within_hasse(m: int, modulus: int) -> bool:
    """``|m - (modulus + 1)| <= 2 sqrt(modulus)``, exactly."""
    d = m - modulus - 1
    return d * d <= 4 * modulus
