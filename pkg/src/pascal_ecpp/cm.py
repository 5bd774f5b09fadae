"""Complex multiplication: discriminants, class polynomials, CM curves.

Class polynomials are generated offline from reduced binary quadratic forms
and a q-series evaluation of the j-invariant, then shipped as a text table
(``data/discriminants.txt``).  At proof time only table lookups and root
finding modulo n happen.
"""

from __future__ import annotations

import math
import os
import random
from collections import defaultdict
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from . import polynomial as poly
from .ecurve import CurveSpec
from .errors import (
    CompositeModulus,
    DegenerateJ,
    GenerationPrecisionFailure,
    NoRoot,
    TableExhausted,
)
from .numtheory import factor_small, jacobi

TABLE_ENV = "PASCAL_ECPP_TABLES"
DEFAULT_S_LIMIT = 1000
TABLE_MAX_ABS_D = 10**5
TABLE_MAX_CLASS_NUMBER = 16


def _squarefree(m: int) -> bool:
    return all(e == 1 for _, e in factor_small(m))


def is_fundamental(D: int) -> bool:
    """Fundamental discriminant test, restricted to D <= -7 (no -3, -4)."""
    if D > -7:
        return False
    if D % 4 == 1:
        return _squarefree(-D)
    if D % 4 == 0:
        return (D // 4) % 4 in (2, 3) and _squarefree(-D // 4)
    return False


def fundamental_discriminants(limit: int):
    """Yield -7, -8, -11, ... down to -limit."""
    for m in range(7, limit + 1):
        if is_fundamental(-m):
            yield -m


def reduced_forms(D: int) -> list[tuple[int, int, int]]:
    """Primitive reduced forms (a, b, c) of discriminant D < 0."""
    forms = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) == 1:
                forms.append((a, b, c))
        a += 1
    return forms


def class_number(D: int) -> int:
    return len(reduced_forms(D))


def _all_forms(limit: int) -> dict[int, list[tuple[int, int, int]]]:
    """Reduced primitive forms for every discriminant down to -limit at once."""
    out = defaultdict(list)
    a = 1
    while 3 * a * a <= limit:
        for b in range(-a + 1, a + 1):
            c = a
            while True:
                D = b * b - 4 * a * c
                if -D > limit:
                    break
                if not (c == a and b < 0) and math.gcd(math.gcd(a, b), c) == 1:
                    out[D].append((a, b, c))
                c += 1
        a += 1
    return out


# --- j-invariant by q-series ----------------------------------------------


def _euler_product(q, mp):
    """prod_{n>=1} (1 - q^n) via the pentagonal number series."""
    eps = mp.mpf(2) ** (-mp.prec - 10)
    total = mp.mpf(1)
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        term = q**e1 + q**(e1 + k)
        total += -term if k % 2 else term
        if abs(q) ** e1 < eps:
            return total
        k += 1


def j_invariant(tau, mp):
    """j(tau) = (256 t + 1)^3 / t with t = Delta(2 tau) / Delta(tau)."""
    q = mp.exp(2j * mp.pi * tau)
    t = q * (_euler_product(q * q, mp) / _euler_product(q, mp)) ** 24
    return (256 * t + 1) ** 3 / t


def _precision_estimate(D: int, forms) -> int:
    # log10 of prod(1 + |j_i|) bounds every coefficient
    digits = sum(math.pi * math.sqrt(-D) / a / math.log(10) for a, _, _ in forms)
    return int(digits + len(forms) * math.log10(2)) + 1


def class_polynomial(D: int, dps: int | None = None, forms=None) -> list[int]:
    """Monic H_D as integer coefficients, lowest degree first.

    ``dps`` fixes the working precision in decimal digits; by default it is
    the size estimate of the largest coefficient plus 20 guard digits, and
    it is doubled when rounding is ambiguous.
    """
    import mpmath

    if forms is None:
        forms = reduced_forms(D)
    fixed = dps is not None
    if dps is None:
        dps = _precision_estimate(D, forms) + 20
    for _ in range(1 if fixed else 4):
        mp = mpmath.mp
        with mpmath.workdps(dps):
            sq = mp.sqrt(-D)
            coeffs = [mp.mpc(1)]
            for a, b, _ in forms:
                j = j_invariant(mp.mpc(-b, sq) / (2 * a), mp)
                # multiply by (x - j)
                coeffs = [mp.mpc(0)] + coeffs
                for i in range(len(coeffs) - 1):
                    coeffs[i] -= j * coeffs[i + 1]
            tol = mp.mpf(10) ** (-8)
            out = []
            for c in coeffs:
                r = int(mp.nint(c.real))
                if abs(c.real - r) > tol or abs(c.imag) > tol:
                    break
                out.append(r)
            else:
                return out
        dps *= 2
    raise GenerationPrecisionFailure(f"class polynomial of {D} not resolved at {dps // 2} digits")


# --- discriminant table ----------------------------------------------------


@dataclass(frozen=True)
class DiscriminantRecord:
    D: int
    abs_factors: tuple[tuple[int, int], ...]
    class_number: int
    class_poly: tuple[int, ...]  # lowest degree first, monic

    @property
    def max_prime(self) -> int:
        return max(q for q, _ in self.abs_factors)

    def to_line(self) -> str:
        fac = ",".join(f"{q}^{e}" for q, e in self.abs_factors)
        coeffs = ",".join(str(c) for c in reversed(self.class_poly))
        return f"{self.D};{fac};{self.class_number};{coeffs}"

    @classmethod
    def from_line(cls, line: str) -> "DiscriminantRecord":
        d, fac, h, coeffs = line.strip().split(";")
        factors = tuple(tuple(int(v) for v in item.split("^")) for item in fac.split(","))
        poly_ = tuple(int(c) for c in reversed(coeffs.split(",")))
        rec = cls(int(d), factors, int(h), poly_)
        if math.prod(q**e for q, e in factors) != -rec.D:
            raise ValueError(f"factorization does not match |D| in record {d}")
        if len(poly_) != rec.class_number + 1 or poly_[-1] != 1:
            raise ValueError(f"class polynomial of {d} has wrong degree or is not monic")
        return rec


def make_record(D: int, forms=None, dps: int | None = None) -> DiscriminantRecord:
    forms = forms or reduced_forms(D)
    return DiscriminantRecord(D, tuple(factor_small(-D)), len(forms),
                              tuple(class_polynomial(D, dps, forms)))


def generate_table(path: str | Path, max_abs_d: int = TABLE_MAX_ABS_D,
                   max_class_number: int = TABLE_MAX_CLASS_NUMBER, progress=None) -> int:
    """Recompute the bundled table; returns the number of records written."""
    forms = _all_forms(max_abs_d)
    count = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# D;|D| factorization;class number;H_D coefficients (leading first)\n")
        fh.write(f"# fundamental D <= -7, |D| <= {max_abs_d}, h <= {max_class_number}\n")
        for D in fundamental_discriminants(max_abs_d):
            if len(forms[D]) > max_class_number:
                continue
            fh.write(make_record(D, forms[D]).to_line() + "\n")
            count += 1
            if progress:
                progress(D)
    return count


def default_table_path() -> Path:
    env = os.environ.get(TABLE_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("pascal_ecpp") / "data" / "discriminants.txt"))


class DiscriminantTable:
    """Immutable list of records sorted by increasing |D|."""

    def __init__(self, records):
        self.records = sorted(records, key=lambda r: -r.D)
        self._by_d = {r.D: r for r in self.records}

    def __len__(self):
        return len(self.records)

    def __getitem__(self, D: int) -> DiscriminantRecord:
        return self._by_d[D]

    def __contains__(self, D: int) -> bool:
        return D in self._by_d

    @classmethod
    def load(cls, path: str | Path | None = None, s_limit: int | None = None,
             d_limit: int | None = None) -> "DiscriminantTable":
        """Read a table file, dropping records outside the S and |D| limits."""
        records = []
        with open(path or default_table_path(), encoding="utf-8") as fh:
            for line in fh:
                if not line.strip() or line.startswith("#"):
                    continue
                rec = DiscriminantRecord.from_line(line)
                if s_limit is not None and rec.max_prime > s_limit:
                    continue
                if d_limit is not None and -rec.D > d_limit:
                    continue
                records.append(rec)
        return cls(records)


_TABLE_CACHE: dict = {}


def load_table(path=None, s_limit: int | None = DEFAULT_S_LIMIT, d_limit=None) -> DiscriminantTable:
    key = (str(path or default_table_path()), s_limit, d_limit)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = DiscriminantTable.load(key[0], s_limit, d_limit)
    return _TABLE_CACHE[key]


class DiscriminantCursor:
    """Per-n enumeration state for :func:`next_d`."""

    def __init__(self, table: DiscriminantTable, n: int):
        self.table = table
        self.n = n
        self.position = 0
        self.last_D: int | None = None

    def next(self, abs_limit: int | None = None) -> DiscriminantRecord | None:
        """Next record with (D|n) = 1, or None once |D| would exceed abs_limit."""
        records = self.table.records
        while self.position < len(records):
            rec = records[self.position]
            if abs_limit is not None and -rec.D > abs_limit:
                return None
            self.position += 1
            if self.n % 2 and self.n > 2 and jacobi(rec.D, self.n) == 1:
                self.last_D = rec.D
                return rec
        raise TableExhausted(f"discriminant table exhausted for n={self.n}")


def next_d(n: int, cursor: DiscriminantCursor, abs_limit: int | None = None):
    if cursor.n != n:
        raise ValueError("cursor belongs to a different n")
    return cursor.next(abs_limit)


def hilbert_root(n: int, record: DiscriminantRecord, rng: random.Random) -> int:
    """A root of H_D modulo n (requires (D|n) = 1)."""
    if jacobi(record.D, n) != 1:
        raise NoRoot(f"({record.D}|{n}) != 1, H_D does not split")
    return poly.find_root(list(record.class_poly), n, rng)


@dataclass(frozen=True)
class CurvePair:
    k: int
    c: int
    curve: CurveSpec
    twist: CurveSpec
    orders: tuple[int, int]


def curve_pair(n: int, x0: int, u: int, rng: random.Random) -> CurvePair:
    """The curve with j-invariant x0 and its quadratic twist."""
    x0 %= n
    if x0 == 0 or x0 == 1728 % n:
        raise DegenerateJ(f"j = {x0} has extra automorphisms")
    g = math.gcd(1728 - x0, n)
    if g != 1:
        raise CompositeModulus(n, g)
    k = x0 * pow(1728 - x0, -1, n) % n
    while True:
        c = rng.randrange(2, n)
        j = jacobi(c, n)
        if j == -1:
            break
        if j == 0:
            raise CompositeModulus(n, math.gcd(c, n))
    curve = CurveSpec(n, 3 * k, 2 * k)
    twist = CurveSpec(n, 3 * k * c * c, 2 * k * c**3)
    return CurvePair(k, c, curve, twist, (n + 1 - u, n + 1 + u))
