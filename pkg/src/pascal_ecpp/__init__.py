"""Generalized Pascal triangles and elliptic curve primality proving."""

from .certificate import Certificate, CertStep, emit, parse, verify
from .ecpp import ProofConfig, prove
from .triangle import BASE_112, TriangleBase, center

__all__ = [
    "BASE_112",
    "Certificate",
    "CertStep",
    "ProofConfig",
    "TriangleBase",
    "center",
    "emit",
    "parse",
    "prove",
    "verify",
]
