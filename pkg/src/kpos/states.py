"""Schmidt decompositions, the rho_mu state families and Schmidt-number witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from ._config import ShapeError, ValidationError, get_tolerances
from .certificates import certify_k_positive
from .maps import ChoiOperator, choi_of_map, make_generalized_choi
from .spectral import (
    check_hermitian,
    check_projector,
    frame_to_projector,
    ky_fan_overlap,
    maximally_entangled_frame,
)

__all__ = [
    "SchmidtDecomposition",
    "StateFamilyRhoMu",
    "schmidt_decompose",
    "witness_expectation",
    "make_rho_mu",
    "schmidt_thresholds",
    "classify_rho_mu",
    "sn_lower_bound",
    "builtin_witnesses",
]


@dataclass(frozen=True)
class SchmidtDecomposition:
    """``psi = sum_r c_r u_r (x) v_r`` with ``u_r = left[:, r]``, ``v_r = right[:, r]``."""

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray
    rank: int

    def reconstruct(self) -> np.ndarray:
        return np.einsum("r,ar,br->ab", self.coefficients, self.left_vectors,
                         self.right_vectors).reshape(-1)


def schmidt_decompose(psi, d1: int, d2: int) -> SchmidtDecomposition:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d1 * d2:
        raise ShapeError(f"vector of length {psi.size} does not live on C^{d1} (x) C^{d2}")
    U, s, Vh = np.linalg.svd(psi.reshape(d1, d2), full_matrices=False)
    r = int(np.count_nonzero(s > 1e-10 * s[0])) if s[0] > 0 else 0
    return SchmidtDecomposition(s[:r], U[:, :r], Vh[:r].T, r)


def witness_expectation(c: ChoiOperator, sigma) -> float:
    """``tr(sigma c)`` for a Hermitian ``sigma`` on the same space."""
    sigma = check_hermitian(sigma, name="sigma")
    if sigma.shape != c.matrix.shape:
        raise ShapeError(f"sigma shape {sigma.shape} does not match operator {c.matrix.shape}")
    return float(np.einsum("ij,ji->", sigma, c.matrix).real)


@dataclass(frozen=True)
class StateFamilyRhoMu:
    """``rho = (1 - mu)/(d^2 - m) (I - P) + (mu/m) P`` with ``tr(P rho) = mu``."""

    d: int
    mu: float
    P: np.ndarray = field(repr=False)
    m: int
    rho: np.ndarray = field(repr=False)


def make_rho_mu(d: int, mu: float, P=None) -> StateFamilyRhoMu:
    """State family interpolating between ``(I - P)/(d^2 - m)`` and ``P/m``.

    ``P`` defaults to the maximally entangled projector, giving the isotropic
    states.  Unit trace and PSD for ``0 <= mu <= 1``.
    """
    if P is None:
        P = frame_to_projector(maximally_entangled_frame(d))
    P = check_projector(P, name="P")
    D = d * d
    if P.shape != (D, D):
        raise ShapeError(f"P must act on C^{d} (x) C^{d}, got shape {P.shape}")
    m = int(round(np.trace(P).real))
    if not 1 <= m < D:
        raise ValidationError(f"rank of P must be in [1, {D - 1}], got {m}")
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    I = np.eye(D)
    rho = (1.0 - mu) / (D - m) * (I - P) + (mu / m) * P
    return StateFamilyRhoMu(d, float(mu), P, m, rho)


def schmidt_thresholds(frames: Sequence) -> np.ndarray:
    """``f[k] = sum_alpha overlap(F_alpha, k)`` for ``k = 0 .. d`` (``f[0] = 0``)."""
    frames = [np.asarray(F, dtype=complex) for F in frames]
    d = min(frames[0].shape)
    f = np.zeros(d + 1)
    for k in range(1, d + 1):
        f[k] = sum(ky_fan_overlap(F, k) for F in frames)
    return f


def classify_rho_mu(family: StateFamilyRhoMu, frames: Sequence) -> int:
    """Schmidt number of ``rho_mu``: the ``k`` with ``f[k-1] < mu <= f[k]``.

    ``frames`` must generate ``family.P``.  For ``P = P+`` this gives
    ``SN = k`` iff ``(k-1)/d < mu <= k/d``.
    """
    frames = [np.asarray(F, dtype=complex) for F in frames]
    P = sum(frame_to_projector(F) for F in frames)
    if np.max(np.abs(P - family.P)) > get_tolerances().atol:
        raise ValidationError("frames do not generate the family's projector")
    f = schmidt_thresholds(frames)
    slack = get_tolerances().tie_rtol
    if not 0.0 < family.mu <= f[-1] + slack:
        raise ValueError(f"mu = {family.mu} outside the classified range (0, {f[-1]:.6g}]")
    for k in range(1, len(f)):
        if family.mu <= f[k] + slack:
            return k
    return len(f) - 1


@lru_cache(maxsize=16)
def _builtin_witnesses(d: int) -> tuple[tuple[np.ndarray, int], ...]:
    out = []
    F1 = maximally_entangled_frame(d)
    for k in range(1, d):
        lam = d / k * (1 - 1e-6)
        m = make_generalized_choi(d, lam, F1)
        if not certify_k_positive(m, k).certified:
            raise RuntimeError(f"built-in witness at k={k} failed certification")
        out.append((choi_of_map(m).matrix, k))
    return tuple(out)


def builtin_witnesses(d: int) -> list[tuple[ChoiOperator, int]]:
    """Certified ``k``-positive Choi operators ``I (x) I - lam_k P+``, ``lam_k`` just below ``d/k``."""
    return [(ChoiOperator((d, d), C), k) for C, k in _builtin_witnesses(d)]


def sn_lower_bound(sigma, d: int,
                   witnesses: Iterable[tuple[ChoiOperator, int]] = ()) -> int:
    """Lower bound on the Schmidt number of ``sigma`` from witness violations.

    A ``k``-positive Choi operator with negative expectation on ``sigma``
    shows ``SN(sigma) >= k + 1``.  User ``witnesses`` are ``(operator, k)``
    pairs and are trusted to be ``k``-positive.
    """
    sigma = check_hermitian(sigma, name="sigma")
    if sigma.shape != (d * d, d * d):
        raise ShapeError(f"sigma must be {d * d}x{d * d}, got {sigma.shape}")
    thr = -get_tolerances().witness
    bound = 1
    for c, k in [*builtin_witnesses(d), *witnesses]:
        if witness_expectation(c, sigma) < thr:
            bound = max(bound, k + 1)
    return bound
