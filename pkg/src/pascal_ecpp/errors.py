"""Exception types shared across the package."""


class CompositeModulus(ArithmeticError):
    """The modulus was shown to be composite while it was assumed prime.

    ``witness`` is a nontrivial factor when one is known, else ``None``.
    """

    def __init__(self, modulus: int, witness: int | None = None, reason: str = ""):
        self.modulus = modulus
        self.witness = witness
        msg = f"{modulus} is composite"
        if witness is not None:
            msg += f" (factor {witness})"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)


class FactorFound(CompositeModulus):
    """A modular inversion failed with gcd strictly between 1 and the modulus."""

    def __init__(self, modulus: int, witness: int):
        super().__init__(modulus, witness, "non-invertible denominator")


class NonResidue(ValueError):
    pass


class NoSolution(ValueError):
    pass


class NoRoot(ArithmeticError):
    pass


class DegenerateJ(ValueError):
    pass


class TableExhausted(LookupError):
    pass


class GenerationPrecisionFailure(ArithmeticError):
    pass


class RetryLimit(RuntimeError):
    pass


class NotFound(LookupError):
    pass


class Stuck(RuntimeError):
    pass
