"""Primality certificates: data model, ``ECPP-CERT v1`` text format, verifier.

A certificate for n is a list of steps ordered from the smallest prime up.
Step i names a prime s_i, a curve y^2 = x^3 + a_i x + b_i and a point
(x_i, y_i) over Z/MZ, where M is s_(i+1) (or n for the last step), and the
fully factored cofactor f_i with m_i = s_i f_i.  The verifier only needs
integer arithmetic and curve arithmetic; it never touches the prover's
discriminant machinery.

Text format::

    ECPP-CERT v1
    N <n>
    <i>;<s>;<a>;<b>;<x>;<y>;f=<p1>^<e1>*<p2>*...

Exponents equal to 1 are omitted, ``f=1`` stands for an empty product and
every line ends with a newline.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .ecurve import CurveSpec, scalar_mul
from .errors import CompositeModulus
from .numtheory import (
    FactoredInteger,
    exceeds_size_bound,
    is_prime_trial,
    is_probable_prime,
    within_hasse,
)

HEADER = "ECPP-CERT v1"
# largest base prime the verifier is willing to check by trial division
BASE_CASE_LIMIT = 1 << 40

_DEC = r"(?:0|[1-9][0-9]*)"
_NUM = re.compile(_DEC)
_FACTOR = re.compile(rf"({_DEC})(?:\^([2-9]|[1-9][0-9]+))?")


class CertificateSyntaxError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class InvariantError(ValueError):
    pass


@dataclass(frozen=True)
class CertStep:
    i: int
    s: int
    a: int
    b: int
    x: int
    y: int
    f: tuple[tuple[int, int], ...]

    @property
    def f_value(self) -> int:
        out = 1
        for p, e in self.f:
            out *= p**e
        return out

    @property
    def m(self) -> int:
        return self.s * self.f_value

    @classmethod
    def from_factored(cls, i, s, a, b, point, f: FactoredInteger) -> "CertStep":
        if f.cofactor != 1:
            raise InvariantError("f must be fully factored")
        return cls(i, s, a, b, point[0], point[1], tuple(f.factors))


@dataclass
class Certificate:
    n: int
    steps: list[CertStep] = field(default_factory=list)

    def modulus(self, i: int) -> int:
        """Modulus of step i (1-based): the next step's s, or n at the top."""
        return self.steps[i].s if i < len(self.steps) else self.n


def _format_f(f) -> str:
    if not f:
        return "1"
    return "*".join(str(p) if e == 1 else f"{p}^{e}" for p, e in f)


def emit(cert: Certificate) -> str:
    if not cert.steps:
        raise InvariantError("a certificate needs at least one step")
    lines = [HEADER, f"N {cert.n}"]
    for st in cert.steps:
        lines.append(f"{st.i};{st.s};{st.a};{st.b};{st.x};{st.y};f={_format_f(st.f)}")
    return "\n".join(lines) + "\n"


def _parse_f(text: str, lineno: int, col: int) -> tuple[tuple[int, int], ...]:
    if text == "1":
        return ()
    factors = []
    pos = 0
    while True:
        mt = _FACTOR.match(text, pos)
        if not mt:
            raise CertificateSyntaxError(lineno, col + pos, "expected factor")
        p = int(mt.group(1))
        e = int(mt.group(2)) if mt.group(2) else 1
        if p < 2:
            raise CertificateSyntaxError(lineno, col + pos, "factor must be at least 2")
        factors.append((p, e))
        pos = mt.end()
        if pos == len(text):
            return tuple(factors)
        if text[pos] != "*":
            raise CertificateSyntaxError(lineno, col + pos, "expected '*'")
        pos += 1


def parse(text: str) -> Certificate:
    if not text:
        raise CertificateSyntaxError(1, 1, "empty certificate")
    if not text.endswith("\n"):
        raise CertificateSyntaxError(text.count("\n") + 1, len(text) - text.rfind("\n"),
                                     "missing final newline (truncated?)")
    lines = text[:-1].split("\n")
    if lines[0] != HEADER:
        raise CertificateSyntaxError(1, 1, f"expected header {HEADER!r}")
    if len(lines) < 2 or not lines[1].startswith("N "):
        raise CertificateSyntaxError(2, 1, "expected 'N <n>'")
    if not _NUM.fullmatch(lines[1][2:]):
        raise CertificateSyntaxError(2, 3, "bad number")
    cert = Certificate(int(lines[1][2:]))
    if len(lines) < 3:
        raise CertificateSyntaxError(3, 1, "no steps (truncated?)")
    for lineno, line in enumerate(lines[2:], start=3):
        fields = line.split(";")
        if len(fields) != 7:
            raise CertificateSyntaxError(lineno, 1, f"expected 7 ';'-separated fields, got {len(fields)}")
        values = []
        col = 1
        for k, text_ in enumerate(fields[:6]):
            if not _NUM.fullmatch(text_):
                raise CertificateSyntaxError(lineno, col, f"field {k + 1} is not a decimal number")
            values.append(int(text_))
            col += len(text_) + 1
        if not fields[6].startswith("f="):
            raise CertificateSyntaxError(lineno, col, "expected 'f='")
        f = _parse_f(fields[6][2:], lineno, col + 2)
        primes = [p for p, _ in f]
        if primes != sorted(set(primes)):
            raise InvariantError(f"line {lineno}: factors of f must be strictly increasing")
        step = CertStep(*values, f)
        if step.i != lineno - 2:
            raise InvariantError(f"line {lineno}: step index {step.i}, expected {lineno - 2}")
        cert.steps.append(step)
    return cert


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    reason: str = ""
    step: int | None = None

    def __bool__(self):
        return self.accepted

    def __str__(self):
        if self.accepted:
            return "accepted"
        where = f" at step {self.step}" if self.step is not None else ""
        return f"rejected{where}: {self.reason}"


def _factor_is_prime(p: int) -> bool:
    if p < BASE_CASE_LIMIT:
        return is_prime_trial(p)
    return is_probable_prime(p)


def verify_step(step: CertStep, modulus: int) -> str | None:
    """Reason the step fails to prove ``modulus`` prime (given s prime), or None."""
    M = modulus
    if M < 5 or M % 2 == 0:
        return "modulus must be odd and at least 5"
    for name in ("a", "b", "x", "y"):
        if not 0 <= getattr(step, name) < M:
            return f"{name} not reduced modulo {M}"
    for p, _ in step.f:
        if not _factor_is_prime(p):
            return f"factor {p} of f is not prime"
    if not exceeds_size_bound(step.s, M):
        return "s does not exceed (M^(1/4) + 1)^2"
    m = step.m
    if not within_hasse(m, M):
        return "m outside the Hasse interval"
    try:
        E = CurveSpec(M, step.a, step.b)
    except CompositeModulus as exc:
        return f"composite modulus (factor {exc.witness})"
    except ValueError:
        return "singular curve"
    P = (step.x, step.y)
    if not E.contains(P):
        return "point not on curve"
    try:
        Q = scalar_mul(step.f_value, P, E)
        if Q is None:
            return "f*P is the identity"
        if scalar_mul(step.s, Q, E) is not None:
            return "m*P is not the identity"
    except CompositeModulus as exc:
        return f"composite modulus (factor {exc.witness})"
    return None


def verify(cert: Certificate) -> Verdict:
    """Check every step; accepted means n is prime unconditionally."""
    if not cert.steps:
        return Verdict(False, "no steps")
    for k, step in enumerate(cert.steps, start=1):
        if step.i != k:
            return Verdict(False, f"step index {step.i} out of order", k)
    base = cert.steps[0].s
    if base >= BASE_CASE_LIMIT:
        return Verdict(False, "base prime too large for trial division", 1)
    if not is_prime_trial(base):
        return Verdict(False, "base s is not prime", 1)
    for k, step in enumerate(cert.steps, start=1):
        reason = verify_step(step, cert.modulus(k))
        if reason:
            return Verdict(False, reason, k)
    return Verdict(True)
