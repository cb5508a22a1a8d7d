"""Semantic exception hierarchy.

Two families matter to callers:

* :class:`ValidationError` — the input violates a contract (bad pmf, bad
  epsilon, mismatched alphabets, ...).  The CLI maps these to exit code 2.
* :class:`GuardError` — the input is well-formed but the requested
  computation would exceed a hard enumeration/size guard.  The CLI maps
  these to exit code 3.

Public functions never raise bare ``ValueError`` for contract violations;
they raise one of the classes below so callers can dispatch on meaning.
"""

from __future__ import annotations


class SkagreeError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(SkagreeError, ValueError):
    """Input violates a documented precondition."""


class GuardError(SkagreeError):
    """Computation refused because it exceeds a size/enumeration guard."""


# --- validation errors (exit code 2) ----------------------------------------


class NegativeEntryError(ValidationError):
    """A probability table contains a negative (or non-finite) entry."""


class NotNormalizedError(ValidationError):
    """A probability table does not sum to 1 within the accepted slack."""


class DimensionMismatchError(ValidationError):
    """Array shape or document structure does not match the declared schema."""


class AlphabetMismatchError(ValidationError):
    """Symbol labels are inconsistent (duplicates, unknown labels, wrong size)."""


class EpsilonOutOfRangeError(ValidationError):
    """An erasure probability lies outside [0, 1]."""


class InvalidPmfError(ValidationError):
    """A distribution vector is not a valid pmf."""


class InvalidAlphaError(ValidationError):
    """A divergence order lies outside its legal range."""


class OutOfRangeError(ValidationError):
    """A scalar parameter lies outside its legal range."""


class InvalidPathError(ValidationError):
    """An alternating index path is malformed (lengths, range, repeats)."""


class DegenerateWitnessError(ValidationError):
    """A product-tilt witness is degenerate (identically zero scaling)."""


class EmptySetError(ValidationError):
    """A block-symbol set is empty."""


class SetsNotDisjointError(ValidationError):
    """Two block-symbol sets that must be disjoint intersect."""


class NotErasureSourceError(ValidationError):
    """The operation requires an erasure eavesdropper model."""


class PairsCollideError(ValidationError):
    """The two selected symbols coincide in some coordinate."""


# --- guard errors (exit code 3) ----------------------------------------------


class AlphabetTooLargeError(GuardError):
    """Exhaustive path enumeration refused: alphabet beyond the hard cap."""


class EnumerationTooLargeError(GuardError):
    """Exhaustive block enumeration refused: state space beyond the hard cap."""
