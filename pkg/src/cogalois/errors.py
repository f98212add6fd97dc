"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
1 for a violated mathematical invariant, 2 for bad input, 3 for an exceeded bound.
"""
from __future__ import annotations


class CogaloisError(Exception):
    exit_code = 2


class InvariantViolation(CogaloisError):
    """A structure fails one of its defining laws."""

    exit_code = 1


class InputError(CogaloisError):
    exit_code = 2


class BoundError(CogaloisError):
    exit_code = 3


class TheoremViolation(InvariantViolation):
    """A check that is a theorem at finite scale failed. Should never fire."""


# group-core
class NotAssociative(InvariantViolation):
    def __init__(self, a: int, b: int, c: int):
        super().__init__(f"table is not associative at ({a}, {b}, {c})")
        self.triple = (a, b, c)


class NoIdentity(InvariantViolation):
    def __init__(self, element: int):
        super().__init__(f"index 0 is not a two-sided identity (fails at element {element})")
        self.element = element


class NoInverse(InvariantViolation):
    def __init__(self, element: int):
        super().__init__(f"element {element} has no two-sided inverse")
        self.element = element


class NotNormal(InputError):
    pass


class OrderBoundExceeded(BoundError):
    pass


class BoundExceeded(BoundError):
    pass


class ParseError(InputError):
    pass


# operator groups
class NotAutomorphism(InvariantViolation):
    def __init__(self, gamma: int, detail: str = ""):
        super().__init__(f"element {gamma} of the acting group does not act by an automorphism{detail}")
        self.gamma = gamma


class NotAnAction(InvariantViolation):
    def __init__(self, sigma: int, tau: int):
        super().__init__(f"action is not multiplicative at ({sigma}, {tau})")
        self.pair = (sigma, tau)


class NotAnIdeal(InputError):
    pass


# cocycles
class CocycleLawViolated(InvariantViolation):
    def __init__(self, sigma: int, tau: int):
        super().__init__(f"cocycle law fails at ({sigma}, {tau})")
        self.pair = (sigma, tau)


class NotAbelian(InputError):
    pass


class NotAboveKernel(InputError):
    pass


class NotGenerating(InputError):
    pass


class NotSurjective(InputError):
    pass


class NotNilpotent(InputError):
    pass


class ImageNotIdeal(InputError):
    pass


class NotKneser(InputError):
    pass


class NotAdequate(InputError):
    pass


class BadParameters(InputError):
    pass


class BadShape(InputError):
    pass


class ModelUnavailable(InputError):
    pass


class NotLocal(InvariantViolation):
    pass


class SuiteUnknown(InputError):
    pass
