"""Exception types shared across the library."""


class QuatFHEError(Exception):
    """Base class for every error raised by this package."""


class NotInvertible(QuatFHEError):
    """A residue or quaternion has no inverse modulo n."""


class PivotNotInvertible(NotInvertible):
    """The leading block of a matrix is not invertible; callers should redraw."""


class SchurNotInvertible(NotInvertible):
    """The Schur complement is not invertible; callers should redraw."""


class RandomnessExhausted(QuatFHEError):
    """Rejection sampling hit its retry bound (pathological modulus)."""


class ModulusMismatch(QuatFHEError):
    """Operands live over different moduli."""


class ShapeMismatch(QuatFHEError):
    """Matrix or block dimensions are incompatible."""


class PlaintextOutOfRange(QuatFHEError):
    """Plaintext is not a residue in [0, N^2)."""


class VerificationFailure(QuatFHEError):
    """Decryption detected a modified or inconsistent ciphertext."""


class FormatError(QuatFHEError):
    """A serialized key or ciphertext is malformed."""


class KeyConsistencyError(QuatFHEError):
    """A deserialized key failed its internal consistency checks."""


class ParseError(QuatFHEError):
    """Expression text could not be parsed.

    Attributes:
      offset: character offset of the offending token in the input.
      expected: set of token descriptions that would have been valid there.
    """

    def __init__(self, offset, expected, found):
        self.offset = offset
        self.expected = frozenset(expected)
        self.found = found
        expected_str = ", ".join(sorted(self.expected))
        super().__init__(
            f"parse error at offset {offset}: found {found}, "
            f"expected one of: {expected_str}")


class UnboundVariable(QuatFHEError):
    """An expression variable has no binding in the environment."""

    def __init__(self, name):
        self.name = name
        super().__init__(f"unbound variable: {name!r}")


class ExpressionTooLarge(QuatFHEError):
    """Expression exceeds the node-count cap."""
