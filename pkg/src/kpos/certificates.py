"""Spectral certificates of k-positivity and explicit non-k-positivity witnesses.

Every threshold uses :func:`kpos.spectral.ky_fan_overlap` (the sum of the
``k`` largest squared singular values of a frame) as the size of a negative
frame at level ``k``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from ._config import InapplicableError, get_tolerances
from .maps import MapDecomposition, choi_of_map
from .spectral import frame_to_vector, ky_fan_overlap, top_k_projector

__all__ = [
    "Verdict",
    "Witness",
    "Certificate",
    "certify_k_positive",
    "certify_not_k_positive",
    "positivity_window",
    "block_quadratic_form",
]


class Verdict(str, enum.Enum):
    K_POSITIVE_CERTIFIED = "K_POSITIVE_CERTIFIED"
    NOT_K_POSITIVE_CERTIFIED = "NOT_K_POSITIVE_CERTIFIED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class Witness:
    """Unit vector ``xi0`` in the range of ``I (x) p0`` with negative expectation."""

    xi0: np.ndarray
    p0: np.ndarray
    value: float


@dataclass(frozen=True)
class Certificate:
    """Outcome of a positivity test.

    ``kind`` is ``"k_positive"`` for the bipartite tests and
    ``"sep_positive"`` for positivity on separable elements
    (:func:`kpos.multipartite.certify_sep_positive`).  ``mu`` is the
    single-negative-term threshold, ``nu`` the general one; ``bounds``
    carries a two-sided bracket when the threshold is only known up to one.
    """

    verdict: Verdict
    k: int
    mu: float | None = None
    nu: float | None = None
    witness: Witness | None = None
    reason: str = ""
    kind: str = "k_positive"
    bounds: tuple[float, float] | None = None

    def __post_init__(self):
        negative = self.verdict is Verdict.NOT_K_POSITIVE_CERTIFIED
        if negative != (self.witness is not None):
            raise ValueError("a witness is attached exactly to negative verdicts")
        if negative and not self.witness.value < 0:
            raise ValueError(f"witness value {self.witness.value} is not negative")

    @property
    def certified(self) -> bool:
        return self.verdict is Verdict.K_POSITIVE_CERTIFIED

    @property
    def refuted(self) -> bool:
        return self.verdict is Verdict.NOT_K_POSITIVE_CERTIFIED


def _check_level(m: MapDecomposition, k: int) -> None:
    d = min(m.d1, m.d2)
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= d):
        raise ValueError(f"k must be an integer in [1, {d}], got {k!r}")


def _min_positive_coefficient(m: MapDecomposition) -> float:
    # directions outside every frame have coefficient zero
    if not m.spans_full_space() or not m.positive:
        return 0.0
    return min(t.lam for t in m.positive)


def _at_least(value: float, threshold: float) -> bool:
    slack = get_tolerances().tie_rtol * max(1.0, abs(threshold))
    return value >= threshold - slack


def block_quadratic_form(choi: np.ndarray, xi: np.ndarray, p: np.ndarray) -> float:
    """``<xi|(I (x) p) C (I (x) p)|xi>`` for a bipartite Choi matrix ``C``."""
    d2 = p.shape[0]
    Q = np.kron(np.eye(choi.shape[0] // d2), p)
    v = Q @ xi
    return float(np.vdot(v, choi @ v).real)


def certify_k_positive(m: MapDecomposition, k: int) -> Certificate:
    """Sufficient spectral condition for k-positivity.

    With ``S = sum_neg overlap(F, k) < 1`` the map is k-positive whenever
    every positive coefficient is at least

        nu = sum_neg lam * overlap(F, k) / (1 - S).

    Negative terms with zero coefficient still count towards ``S``.
    """
    _check_level(m, k)
    if all(t.lam == 0 for t in m.negative):
        return Certificate(Verdict.K_POSITIVE_CERTIFIED, k, mu=0.0, nu=0.0,
                           reason="no negative part: completely positive")
    f = [ky_fan_overlap(t.F, k) for t in m.negative]
    S = float(sum(f))
    if S >= 1.0:
        return Certificate(Verdict.INCONCLUSIVE, k,
                           reason=f"sum of negative overlaps {S:.6g} >= 1")
    nu = sum(t.lam * fa for t, fa in zip(m.negative, f)) / (1.0 - S)
    mu = nu if len(m.negative) == 1 else None
    lam_min = _min_positive_coefficient(m)
    if _at_least(lam_min, nu):
        return Certificate(Verdict.K_POSITIVE_CERTIFIED, k, mu=mu, nu=nu,
                           reason=f"min positive coefficient {lam_min:.6g} >= nu")
    return Certificate(Verdict.INCONCLUSIVE, k, mu=mu, nu=nu,
                       reason=f"min positive coefficient {lam_min:.6g} < nu")


def _single_negative(m: MapDecomposition):
    if len(m.negative) != 1:
        raise ValueError(f"exactly one negative term required, got {len(m.negative)}")
    return m.negative[0]


def _witness_from_frame(m: MapDecomposition, F1: np.ndarray, k: int, choi=None):
    """The vector ``sum_i e_i (x) p0 F1 e_i``, normalized, and its expectation."""
    p0 = top_k_projector(F1, k)
    xi = frame_to_vector(p0 @ F1)
    xi = xi / np.linalg.norm(xi)
    C = choi_of_map(m).matrix if choi is None else choi
    return xi, p0, block_quadratic_form(C, xi, p0)


def certify_not_k_positive(m: MapDecomposition, k: int) -> Certificate:
    """Constructive refutation of k-positivity for a single negative term.

    When every positive coefficient is strictly below
    ``mu = lam1 f / (1 - f)`` with ``f = overlap(F1, k)``, the vector
    built from ``p0 F1`` (``p0`` the top-k left singular projector of
    ``F1``) has negative expectation in the compressed Choi operator.
    """
    _check_level(m, k)
    neg = _single_negative(m)
    f = ky_fan_overlap(neg.F, k)
    if f >= 1.0 - get_tolerances().atol:
        raise InapplicableError(
            f"overlap(F1, {k}) = {f:.12g} is not below 1; use a direct PSD check")
    mu = neg.lam * f / (1.0 - f)
    lam_max = max((t.lam for t in m.positive), default=0.0)
    # ties lam = mu belong to the k-positive side
    if _at_least(lam_max, mu):
        return Certificate(Verdict.INCONCLUSIVE, k, mu=mu, nu=mu,
                           reason=f"max positive coefficient {lam_max:.6g} >= mu")
    xi, p0, v = _witness_from_frame(m, neg.F, k)
    if not v < 0:
        return Certificate(Verdict.INCONCLUSIVE, k, mu=mu, nu=mu,
                           reason=f"witness value {v:.3e} not negative (boundary rounding)")
    return Certificate(Verdict.NOT_K_POSITIVE_CERTIFIED, k, mu=mu, nu=mu,
                       witness=Witness(xi, p0, v),
                       reason=f"max positive coefficient {lam_max:.6g} < mu")


def _extend_projector(p: np.ndarray, k: int) -> np.ndarray:
    """A rank-``k`` projector containing the range of ``p``."""
    w, V = np.linalg.eigh(p)
    order = np.argsort(w)[::-1]
    return V[:, order[:k]] @ V[:, order[:k]].conj().T


def _direct_level(m: MapDecomposition, k: int, choi: np.ndarray) -> Certificate:
    """Decide a level where theorems do not apply.

    At ``k = min(d1, d2)`` the Choi operator's spectrum decides.  Below
    that, ``overlap(F1, k) = 1`` means ``F1`` has rank at most ``k``, so
    its own vector is an admissible witness with value ``-lam1``.
    """
    tol = get_tolerances()
    d = min(m.d1, m.d2)
    if k == d:
        w, V = np.linalg.eigh(choi)
        scale = max(1.0, float(np.max(np.abs(w))))
        if w[0] >= -tol.psd * scale:
            return Certificate(Verdict.K_POSITIVE_CERTIFIED, k,
                               reason=f"Choi operator PSD (min eigenvalue {w[0]:.3e})")
        xi = V[:, 0]
        G = xi.reshape(m.d1, m.d2).T
        p0 = top_k_projector(G, k)
        v = block_quadratic_form(choi, xi, p0)
        return Certificate(Verdict.NOT_K_POSITIVE_CERTIFIED, k, witness=Witness(xi, p0, v),
                           reason=f"Choi operator has eigenvalue {w[0]:.6g} < 0")
    neg = _single_negative(m)
    xi, p0, v = _witness_from_frame(m, neg.F, k, choi)
    if v < -tol.witness:
        return Certificate(Verdict.NOT_K_POSITIVE_CERTIFIED, k, witness=Witness(xi, p0, v),
                           reason="negative frame has rank <= k")
    return Certificate(Verdict.INCONCLUSIVE, k, reason="negative frame saturates level k")


def positivity_window(m: MapDecomposition) -> list[Certificate]:
    """Per-level verdicts for ``k = 1 .. min(d1, d2)`` (at most one negative term).

    Levels are decided by :func:`certify_k_positive`, then
    :func:`certify_not_k_positive`, falling back to direct checks where the
    theorems are inapplicable.  Verdicts are then propagated: a witness of
    Schmidt rank ``k`` also refutes every higher level, and k-positivity
    implies every lower level.
    """
    if len(m.negative) > 1:
        raise ValueError(f"at most one negative term allowed, got {len(m.negative)}")
    d = min(m.d1, m.d2)
    choi = choi_of_map(m).matrix
    tol = get_tolerances().atol
    out: list[Certificate] = []
    for k in range(1, d + 1):
        cert = certify_k_positive(m, k)
        if not cert.certified:
            if ky_fan_overlap(m.negative[0].F, k) < 1.0 - tol:
                cert = certify_not_k_positive(m, k)
            else:
                cert = _direct_level(m, k, choi)
        out.append(cert)

    for i in range(1, d):
        prev, cur = out[i - 1], out[i]
        if prev.refuted and not cur.refuted:
            if cur.certified:
                raise RuntimeError(f"inconsistent verdicts: not {i}-positive but {i + 1}-positive")
            w = prev.witness
            out[i] = replace(cur, verdict=Verdict.NOT_K_POSITIVE_CERTIFIED,
                             witness=Witness(w.xi0, _extend_projector(w.p0, i + 1), w.value),
                             reason=f"inherited from level {i} witness")
    for i in range(d - 2, -1, -1):
        nxt, cur = out[i + 1], out[i]
        if nxt.certified and not cur.certified:
            if cur.refuted:
                raise RuntimeError(f"inconsistent verdicts: {i + 2}-positive but not {i + 1}-positive")
            out[i] = replace(cur, verdict=Verdict.K_POSITIVE_CERTIFIED,
                             reason=f"implied by level {i + 2}")
    return out
