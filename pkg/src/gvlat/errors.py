"""Named exceptions.

Every library failure is an instance of :class:`GVLatError`; ``error.name``
is the string the CLI reports.
"""

from __future__ import annotations


class GVLatError(Exception):
    """Base class; ``name`` defaults to the class name."""

    @property
    def name(self) -> str:
        return type(self).__name__


class MalformedInput(GVLatError, ValueError):
    pass


class NonSymmetricGram(GVLatError, ValueError):
    pass


class DegenerateForm(GVLatError, ValueError):
    pass


class DependentBasis(GVLatError, ValueError):
    pass


class OddLattice(GVLatError, ValueError):
    pass


class FFNotInDual(GVLatError, ValueError):
    pass


class NotInDual(GVLatError, ValueError):
    pass


class InfiniteDiscriminant(GVLatError):
    pass


class ParentMismatch(GVLatError, ValueError):
    pass


class NotABasis(GVLatError, ValueError):
    pass


class InfiniteQuotient(GVLatError):
    pass


class NotASublattice(GVLatError, ValueError):
    pass


class FFMismatch(GVLatError, ValueError):
    pass


class Unsolvable(GVLatError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class TwistNotTrivial(GVLatError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class LevelOverflow(GVLatError):
    pass


class ConvergenceNotReached(GVLatError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NonDiscreteCharacter(GVLatError):
    pass


class InconclusiveCancellation(GVLatError, ArithmeticError):
    pass
