"""Exception hierarchy shared by every module of the package."""


class IslpError(Exception):
    """Base class for all errors raised by :mod:`islp`."""


class GrammarFormatError(IslpError, ValueError):
    """A grammar file could not be parsed."""


class InvalidGrammar(IslpError, ValueError):
    """A grammar violates a structural invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations) or "invalid grammar")


class CapExceeded(IslpError):
    """An expansion would exceed the caller-supplied length cap."""


class LengthOverflow(IslpError, OverflowError):
    """An expansion length or path count does not fit in 62 bits."""


class NonIntegerResult(IslpError, ArithmeticError):
    """A closed-form power sum did not reduce to an integer (arithmetic bug)."""


class InvalidExponent(IslpError, ValueError):
    """An iteration exponent is inconsistent with the represented text length."""


class OutOfRange(IslpError, IndexError):
    """A query position or length lies outside the text."""


class NotRlslp(IslpError, ValueError):
    """A run-length-only operation was given a general iteration rule."""


class BadParams(IslpError, ValueError):
    """Fingerprint parameters are unusable (modulus not prime, or base zero)."""


class EmptyImage(IslpError, ValueError):
    """A morphism maps some symbol to the empty string."""


class TooLarge(IslpError, ValueError):
    """Input exceeds the size a brute-force oracle accepts."""
