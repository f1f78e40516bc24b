"""Exception hierarchy shared by the library and the command-line front end."""

from __future__ import annotations


class QRankError(Exception):
    """Base class for all library errors."""


class FieldError(QRankError, ValueError):
    """Invalid field parameters or an arithmetic domain error."""


class DataError(QRankError, ValueError):
    """Malformed input data (files, matrices, codewords)."""


class BudgetExceeded(QRankError):
    """An exhaustive enumeration would exceed the configured budget."""

    def __init__(self, needed: int, budget: int, what: str = "subspaces"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"enumerating {needed} {what} exceeds budget {budget}")


class NotAlmostAffine(QRankError):
    """A projection size was not a power of q^m."""


class ConsistencyError(QRankError, AssertionError):
    """Two computations that must agree did not."""


class NotSimple(QRankError, ValueError):
    """The induced q-matroid has a loop or a 2-dimensional circuit."""
