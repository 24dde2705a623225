"""Linear maps in coefficient-frame form and their Choi operators.

A map is stored as

    phi(a) = sum_{+} lam F a F^*  -  sum_{-} lam F a F^*

with frames ``F`` of shape ``(d2, d1)``.  Frames are Hilbert-Schmidt
normalized and mutually orthogonal, so the Choi operator
``sum_ij e_ij (x) phi(e_ij)`` is diagonal in the rank-1 projectors they
encode and its spectrum is read off the coefficients directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._config import (
    NormalizationError,
    OrthogonalityError,
    ShapeError,
    ValidationError,
    get_tolerances,
)
from .spectral import (
    check_hermitian,
    frame_to_vector,
    maximally_entangled_frame,
    orthonormal_complement,
    vector_to_frame,
)

__all__ = [
    "Term",
    "MapDecomposition",
    "ChoiOperator",
    "map_diagnostics",
    "apply_map",
    "choi_of_map",
    "map_of_choi",
    "dual_map",
    "compose_with_transpose",
    "make_generalized_choi",
    "make_rank_m_family",
    "choi_map",
    "reduction_map",
    "identity_map",
    "transpose_map",
]


@dataclass(frozen=True)
class Term:
    lam: float
    F: np.ndarray


def map_diagnostics(d1: int, d2: int, positive, negative) -> list[tuple[type, str]]:
    """Every invariant violation of a candidate decomposition.

    Returns ``(exception class, message)`` pairs; an empty list means valid.
    """
    tol = get_tolerances().atol
    out: list[tuple[type, str]] = []
    frames = []
    for label, terms, strict in (("positive", positive, True), ("negative", negative, False)):
        for idx, t in enumerate(terms):
            F = np.asarray(t.F)
            name = f"{label}[{idx}]"
            if F.shape != (d2, d1):
                out.append((ShapeError, f"{name}: frame shape {F.shape}, expected {(d2, d1)}"))
                continue
            if not np.isfinite(t.lam) or t.lam < 0 or (strict and t.lam == 0):
                bound = "> 0" if strict else ">= 0"
                out.append((ValidationError, f"{name}: coefficient {t.lam!r} must be {bound}"))
            hs = np.vdot(F, F).real
            if abs(hs - 1.0) > tol:
                out.append((NormalizationError, f"{name}: tr FF* = {hs:.12g}, expected 1"))
            frames.append((name, F))
    if len(frames) > d1 * d2:
        out.append((ValidationError, f"{len(frames)} terms exceed D = d1*d2 = {d1 * d2}"))
    if len(frames) > 1:
        V = np.stack([frame_to_vector(F) for _, F in frames], axis=1)
        G = V.conj().T @ V
        np.fill_diagonal(G, 0.0)
        for a, b in zip(*np.nonzero(np.abs(G) > tol)):
            if a < b:
                out.append((OrthogonalityError,
                            f"frames {frames[a][0]} and {frames[b][0]} not orthogonal: "
                            f"|tr(Fa* Fb)| = {abs(G[a, b]):.3e}"))
    return out


@dataclass(frozen=True)
class MapDecomposition:
    """``phi = phi_+ - phi_-`` with orthonormal frames.

    ``positive`` coefficients are strictly positive, ``negative`` ones
    non-negative (a zero negative coefficient keeps its frame in the
    threshold denominators of :func:`kpos.certificates.certify_k_positive`).
    """

    d1: int
    d2: int
    positive: tuple[Term, ...] = ()
    negative: tuple[Term, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "positive", tuple(self._coerce(self.positive)))
        object.__setattr__(self, "negative", tuple(self._coerce(self.negative)))
        problems = map_diagnostics(self.d1, self.d2, self.positive, self.negative)
        if problems:
            cls, _ = problems[0]
            raise cls("; ".join(msg for _, msg in problems))

    @staticmethod
    def _coerce(terms):
        for t in terms:
            if isinstance(t, Term):
                yield Term(float(t.lam), np.asarray(t.F, dtype=complex))
            else:
                lam, F = t
                yield Term(float(lam), np.asarray(F, dtype=complex))

    @property
    def D(self) -> int:
        return self.d1 * self.d2

    @property
    def n_terms(self) -> int:
        return len(self.positive) + len(self.negative)

    def spans_full_space(self) -> bool:
        """True when the frames form a complete orthonormal basis."""
        return self.n_terms == self.D

    def signed_terms(self):
        for t in self.positive:
            yield t.lam, t.F
        for t in self.negative:
            yield -t.lam, t.F


@dataclass(frozen=True)
class ChoiOperator:
    """Hermitian operator on ``C^{dims[0]} (x) ... (x) C^{dims[-1]}``."""

    dims: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or min(dims) < 1:
            raise ShapeError(f"invalid factor dimensions {self.dims!r}")
        n = int(np.prod(dims))
        M = check_hermitian(self.matrix, name="Choi operator")
        if M.shape != (n, n):
            raise ShapeError(f"matrix shape {M.shape} does not match dims {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", (M + M.conj().T) / 2)

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])


def apply_map(m: MapDecomposition, a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape != (m.d1, m.d1):
        raise ShapeError(f"input must be {m.d1}x{m.d1}, got {a.shape}")
    out = np.zeros((m.d2, m.d2), dtype=complex)
    for lam, F in m.signed_terms():
        out += lam * (F @ a @ F.conj().T)
    return out


def choi_of_map(m: MapDecomposition) -> ChoiOperator:
    """``sum_ij e_ij (x) phi(e_ij)`` assembled as ``sum +-lam |psi><psi|``."""
    D = m.D
    if m.n_terms == 0:
        return ChoiOperator((m.d1, m.d2), np.zeros((D, D), dtype=complex))
    lams = np.array([lam for lam, _ in m.signed_terms()])
    V = np.stack([frame_to_vector(F) for _, F in m.signed_terms()], axis=1)
    return ChoiOperator((m.d1, m.d2), (V * lams) @ V.conj().T)


def map_of_choi(c: ChoiOperator) -> MapDecomposition:
    """Split a bipartite Choi operator by eigenvalue sign into a decomposition."""
    if len(c.dims) != 2:
        raise ShapeError(f"map_of_choi needs two tensor factors, got dims {c.dims}")
    d1, d2 = c.dims
    w, V = np.linalg.eigh(c.matrix)
    cut = get_tolerances().split_rtol * max(np.max(np.abs(w)), 0.0)
    pos, neg = [], []
    for lam, v in zip(w, V.T):
        if abs(lam) <= cut:
            continue
        F = vector_to_frame(v, d1, d2)
        (pos if lam > 0 else neg).append(Term(float(abs(lam)), F))
    return MapDecomposition(d1, d2, tuple(pos), tuple(neg))


def dual_map(m: MapDecomposition) -> MapDecomposition:
    """The map ``b -> sum +-lam F^* b F``, so that ``tr[phi(a) b] = tr[a phi#(b)]``."""
    conj = lambda terms: tuple(Term(t.lam, t.F.conj().T) for t in terms)
    return MapDecomposition(m.d2, m.d1, conj(m.positive), conj(m.negative))


def compose_with_transpose(m: MapDecomposition) -> ChoiOperator:
    """Choi operator of ``a -> phi(a^T)``; PSD iff ``phi`` is completely co-positive."""
    if m.d1 != m.d2:
        raise ShapeError(f"transpose composition needs d1 = d2, got {m.d1} and {m.d2}")
    d = m.d1
    C = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[j, i] = 1.0
            C[i * d:(i + 1) * d, j * d:(j + 1) * d] = apply_map(m, e)
    return ChoiOperator((d, d), C)


def _complement_frames(frames: Sequence[np.ndarray]) -> list[np.ndarray]:
    d2, d1 = frames[0].shape
    V = np.stack([frame_to_vector(F) for F in frames], axis=1)
    Q = orthonormal_complement(V)
    return [vector_to_frame(q, d1, d2) for q in Q.T]


def make_rank_m_family(d: int, lam: float, frames: Sequence) -> MapDecomposition:
    """``a -> I tr(a) - lam * sum_alpha F_alpha a F_alpha^*`` in canonical split.

    The Choi operator is ``I (x) I - lam P`` with ``P`` the rank-``m``
    projector of the orthonormal frames.  The complement of ``P`` carries
    coefficient 1; ``P`` itself carries ``1 - lam``, which lands in the
    negative part when ``lam > 1``.
    """
    frames = [np.asarray(F, dtype=complex) for F in frames]
    if not frames:
        raise ValueError("at least one frame is required")
    if lam < 0:
        raise ValueError(f"lam must be non-negative, got {lam}")
    for F in frames:
        if F.shape != (d, d):
            raise ShapeError(f"frames must be {d}x{d}, got {F.shape}")
    if len(frames) >= d * d:
        raise ValidationError(f"m = {len(frames)} must be smaller than d^2 = {d * d}")
    # orthonormality is enforced by MapDecomposition, but fail early with a clear error
    probe = map_diagnostics(d, d, [Term(1.0, F) for F in frames], [])
    if probe:
        cls, msg = probe[0]
        raise cls(msg)
    pos = [Term(1.0, F) for F in _complement_frames(frames)]
    neg = []
    c = 1.0 - lam
    if c > 0:
        pos += [Term(c, F) for F in frames]
    elif c < 0:
        neg = [Term(-c, F) for F in frames]
    return MapDecomposition(d, d, tuple(pos), tuple(neg))


def make_generalized_choi(d: int, lam: float, F1) -> MapDecomposition:
    """``a -> I tr(a) - lam F1 a F1^*``; Choi operator ``I (x) I - lam P1``."""
    return make_rank_m_family(d, lam, [F1])


def choi_map(d: int) -> MapDecomposition:
    """``a -> I tr(a) - a/(d-1)``."""
    return make_generalized_choi(d, d / (d - 1), maximally_entangled_frame(d))


def reduction_map(d: int) -> MapDecomposition:
    """``a -> I tr(a) - a``."""
    return make_generalized_choi(d, float(d), maximally_entangled_frame(d))


def identity_map(d: int) -> MapDecomposition:
    return MapDecomposition(d, d, (Term(float(d), maximally_entangled_frame(d)),))


def transpose_map(d: int) -> MapDecomposition:
    """``a -> a^T`` as symmetric minus antisymmetric rank-1 terms."""
    pos, neg = [], []
    for i in range(d):
        for j in range(i, d):
            F = np.zeros((d, d), dtype=complex)
            if i == j:
                F[i, i] = 1.0
                pos.append(Term(1.0, F))
                continue
            F[i, j] = F[j, i] = 1 / np.sqrt(2)
            pos.append(Term(1.0, F))
            G = np.zeros((d, d), dtype=complex)
            G[i, j], G[j, i] = 1 / np.sqrt(2), -1 / np.sqrt(2)
            neg.append(Term(1.0, G))
    return MapDecomposition(d, d, tuple(pos), tuple(neg))
