"""Exceptions raised across the wal package.

WalError and its subclasses describe bad input and are reported to the
user; InvariantViolation means the library itself is wrong.
"""


class WalError(Exception):
    """Base class for domain errors caused by bad input"""
    pass


class DomainMismatchError(WalError):
    """Raised when a value does not belong to the semiring it is used with"""
    pass


class ValueParseError(WalError):
    """Raised on malformed textual values; position is a 0-based offset"""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class UnknownLetterError(WalError):
    """Raised when a word uses a letter outside the alphabet"""
    pass


class UnknownStateError(WalError):
    """Raised when a state name is not declared by an automaton"""
    pass


class AutomatonFormatError(WalError):
    """Raised when an automaton description is malformed"""
    pass


class SystemFormatError(WalError):
    """Raised when a linear system description is malformed"""
    pass


class InfiniteSolutionSetError(WalError):
    """Raised when enumeration is requested for a possibly infinite solution set"""
    pass


class LiteralizationError(WalError):
    """Raised when a literalized automaton disagrees with its target"""
    pass


class UnknownFixtureError(WalError):
    """Raised when a fixture name is not registered"""
    pass


class BudgetExhaustedError(Exception):
    """Raised when a budget or a solver bound runs out before a verdict"""
    pass


class InvariantViolation(Exception):
    """Raised when an internal invariant fails; indicates a bug, not bad input"""
    pass
