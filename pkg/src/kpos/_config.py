"""Library-wide numerical tolerances and exception types."""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Absolute/relative thresholds used across the package.

    Attributes
    ----------
    atol : float
        Hermiticity, projector, normalization and frame-orthogonality checks.
    rank_rtol : float
        Singular values below ``rank_rtol * s_1`` count as zero.
    split_rtol : float
        Eigenvalues below ``split_rtol * ||c||`` are dropped when a Choi
        operator is split into positive and negative parts.
    psd : float
        Minimum eigenvalue accepted as non-negative in direct PSD checks.
    tie_rtol : float
        Relative slack used when comparing a coefficient to a threshold,
        so that exact boundary cases are not lost to rounding.
    block : float
        Variational minima above ``-block`` are reported as non-negative.
    witness : float
        A witness expectation must fall below ``-witness`` to count.
    """

    atol: float = 1e-10
    rank_rtol: float = 1e-9
    split_rtol: float = 1e-10
    psd: float = 1e-12
    tie_rtol: float = 1e-12
    block: float = 1e-8
    witness: float = 1e-10

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "kpos_tolerances", default=Tolerances()
)


def get_tolerances() -> Tolerances:
    return _current.get()


@contextlib.contextmanager
def tolerances(**overrides):
    """Temporarily override tolerance fields (context-local, thread-safe).

    >>> with tolerances(atol=1e-8):
    ...     get_tolerances().atol
    1e-08
    """
    token = _current.set(dataclasses.replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)


class ValidationError(ValueError):
    """Input violates a structural invariant (shape, Hermiticity, ...)."""


class ShapeError(ValidationError):
    pass


class NormalizationError(ValidationError):
    pass


class OrthogonalityError(ValidationError):
    pass


class ProjectorError(ValidationError):
    pass


class InapplicableError(ValueError):
    """Hypotheses of a theorem do not hold for the given input."""
