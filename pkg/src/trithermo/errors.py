"""Exception types shared across the package."""

from __future__ import annotations


class TriThermoError(Exception):
    """Base class for every error raised by this package."""

    code = "error"


class ZeroLeadCoordinate(TriThermoError):
    code = "zero_lead_coordinate"


class OutOfDomain(TriThermoError):
    code = "out_of_domain"


class Terminated(TriThermoError):
    """The orbit reached the segment beta = 0."""

    code = "terminated"


class PrecisionExhausted(TriThermoError):
    """An interval comparison straddles zero at the working precision.

    ``certified`` holds whatever was established before the failure
    (for instance the digits already certified).
    """

    code = "precision_exhausted"

    def __init__(self, message: str, certified=None):
        super().__init__(message)
        self.certified = certified


class ZeroX(TriThermoError):
    code = "zero_x"


class DegenerateTriangle(TriThermoError):
    code = "degenerate_triangle"


class DepthOverflow(TriThermoError):
    """The next Theorem-1 digit would exceed the configured bit budget."""

    code = "depth_overflow"

    def __init__(self, message: str, digits=(), needed_bits: int = 0):
        super().__init__(message)
        self.digits = tuple(digits)
        self.needed_bits = needed_bits


class Pole(TriThermoError):
    """Some word has a denominator that is zero (or not certified nonzero)."""

    code = "pole"

    def __init__(self, message: str, word: tuple[int, ...] = (), words=()):
        super().__init__(message)
        self.word = tuple(word)
        self.words = tuple(tuple(w) for w in words) or ((self.word,) if self.word else ())


class ExactZero(TriThermoError):
    """An integer relation p + q*alpha + r*beta = 0 was found."""

    code = "exact_zero"

    def __init__(self, message: str, witness: tuple[int, int, int]):
        super().__init__(message)
        self.witness = witness
