"""Exception types raised across the toolkit.

Every error carries a human-readable message naming the offending label,
cell, line, or triple, so CLI users can fix their input files.
"""


class SimvoteError(Exception):
    """Base class for all data and validation errors in this package."""


class MalformedInput(SimvoteError):
    """Input text does not follow the expected file format."""


class DuplicateLabel(SimvoteError):
    """The same label occurs twice in one domain."""


class NotReflexive(SimvoteError):
    """A similarity matrix has a diagonal entry other than 1.0."""


class NotSymmetric(SimvoteError):
    """A similarity matrix has s(x, y) != s(y, x)."""


class ValueOutOfRange(SimvoteError):
    """A similarity degree lies outside [0, 1]."""


class NotTransitive(SimvoteError):
    """An alpha-cut of the matrix is not an equivalence relation."""


class InvariantViolation(SimvoteError):
    """A structural invariant of a value (e.g. a partition tree) is broken."""


class UnknownLabel(SimvoteError):
    """A record references a label outside the tree's domain."""


class EmptyQuery(SimvoteError):
    """A record holds no values after deduplication."""


class QueryTooLarge(SimvoteError):
    """Subset enumeration was requested for a query too large to expand."""


class InfeasibleSpec(SimvoteError):
    """A generation spec cannot be satisfied (bad branching, counts, ...)."""


class InsufficientPoints(SimvoteError):
    """Scaling analysis needs at least three distinct record counts."""
