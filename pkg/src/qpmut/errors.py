"""Exception taxonomy.

Every failure mode the library reports deliberately derives from QPError, so
callers (and the CLI) can separate domain errors from genuine bugs.  Capacity
guards get their own subclass because they are recoverable by rerunning with a
larger budget, unlike semantic errors.
"""

from __future__ import annotations


class QPError(Exception):
    """Base class for all errors raised on purpose by this package."""


class ParseError(QPError):
    """A document or word failed validation; the message carries the position."""


class PreconditionError(QPError):
    """An operation was called on input that violates its stated preconditions."""


class CapacityError(QPError):
    """A size guard tripped (too many vertices, class too large, ...).

    ``partial`` optionally carries whatever was computed before the guard hit,
    e.g. the explored part of a mutation class together with its frontier.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class SearchBudgetError(QPError):
    """A search exhausted its state budget without reaching its target."""


class NonterminationError(QPError):
    """Reduction failed to terminate within its cap, or got stuck on a term
    that no reduction step can remove."""


class UnsupportedPresentationError(QPError):
    """The degree-zero part does not present as a quadratic monomial algebra."""


class InfiniteDimensionError(QPError):
    """The path algebra modulo relations has unbounded path lengths."""


class ConventionError(QPError):
    """A numeric convention check failed (e.g. non-unimodular Cartan matrix)."""


class AmbiguityError(QPError):
    """Two structurally valid readings of the input disagree on an invariant."""


class ScopeError(QPError):
    """The input is outside the classes this tool decides."""


class InternalInvariantError(QPError):
    """An internal consistency check failed; indicates a bug or bad input
    masquerading as in-scope data (e.g. degree homogeneity lost mid-algorithm)."""


class DriftError(QPError):
    """A freshly computed pinned report differs from the one on disk."""
