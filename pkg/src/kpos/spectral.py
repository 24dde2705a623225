"""Spectral primitives: singular values, Ky Fan quantities, frames and projectors.

Conventions
-----------
Matrices are plain complex ``numpy`` arrays.  A *frame* ``F`` is a
``d2 x d1`` matrix, i.e. a map from the first tensor factor into the second.
It encodes the vector

    psi = sum_i e_i (x) F e_i,      psi[i * d2 + a] = F[a, i],

and the rank-1 operator ``P = sum_ij e_ij (x) F e_ij F^*`` on
``C^d1 (x) C^d2``.  ``P`` is a projector exactly when ``tr F F^* = 1``.
"""

from __future__ import annotations

import numpy as np

from ._config import (
    NormalizationError,
    ProjectorError,
    ShapeError,
    ValidationError,
    get_tolerances,
)

__all__ = [
    "singular_values",
    "ky_fan_norm",
    "ky_fan_overlap",
    "numerical_rank",
    "projector_overlap_norm",
    "frame_to_vector",
    "vector_to_frame",
    "frame_to_projector",
    "compressed_projector_norm",
    "top_k_projector",
    "partial_trace",
    "check_hermitian",
    "check_projector",
    "check_frame",
    "maximally_entangled_frame",
    "maximally_entangled_projector",
    "swap_operator",
    "orthonormal_complement",
    "random_frame",
    "random_projector",
    "random_unitary",
    "random_hermitian",
]


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ShapeError(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    return a


def _check_k(a: np.ndarray, k: int) -> None:
    d = min(a.shape)
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= d):
        raise ValueError(f"k must be an integer in [1, {d}], got {k!r}")


def singular_values(a) -> np.ndarray:
    """Singular values of ``a`` in non-increasing order, ``min(rows, cols)`` of them."""
    return np.linalg.svd(_as_matrix(a), compute_uv=False)


def ky_fan_norm(a, k: int) -> float:
    """Ky Fan k-norm: sum of the ``k`` largest singular values."""
    a = _as_matrix(a)
    _check_k(a, k)
    return float(np.sum(singular_values(a)[:k]))


def ky_fan_overlap(a, k: int) -> float:
    """Sum of the ``k`` largest squared singular values of ``a``.

    Equals ``max tr(p a a^*)`` over rank-``k`` projectors ``p`` on the
    codomain.  This is the quantity entering every positivity threshold
    in :mod:`kpos.certificates`.
    """
    a = _as_matrix(a)
    _check_k(a, k)
    s = singular_values(a)
    return float(np.sum(s[:k] ** 2))


def numerical_rank(a, rtol: float | None = None) -> int:
    """Number of singular values above ``rtol * s_1``."""
    s = singular_values(a)
    if rtol is None:
        rtol = get_tolerances().rank_rtol
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rtol * s[0]))


def check_hermitian(a, atol: float | None = None, name: str = "matrix") -> np.ndarray:
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {a.shape}")
    atol = get_tolerances().atol if atol is None else atol
    dev = np.max(np.abs(a - a.conj().T))
    if dev > atol:
        raise ValidationError(f"{name} is not Hermitian (max deviation {dev:.3e})")
    return a


def check_projector(p, k: int | None = None, atol: float | None = None,
                    name: str = "projector") -> np.ndarray:
    """Validate ``p = p^* = p^2`` (and ``tr p = k`` when given)."""
    p = _as_matrix(p)
    atol = get_tolerances().atol if atol is None else atol
    if p.shape[0] != p.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {p.shape}")
    if np.max(np.abs(p - p.conj().T)) > atol:
        raise ProjectorError(f"{name} is not Hermitian")
    if np.max(np.abs(p @ p - p)) > atol:
        raise ProjectorError(f"{name} is not idempotent")
    if k is not None and abs(np.trace(p).real - k) > atol:
        raise ProjectorError(f"{name} has trace {np.trace(p).real:.12g}, expected {k}")
    return p


def check_frame(F, normalized: bool = True, atol: float | None = None) -> np.ndarray:
    F = _as_matrix(F)
    if normalized:
        atol = get_tolerances().atol if atol is None else atol
        hs = np.vdot(F, F).real
        if abs(hs - 1.0) > atol:
            raise NormalizationError(f"frame has tr FF* = {hs:.12g}, expected 1")
    return F


def projector_overlap_norm(P, Q) -> float:
    """Operator norm of ``QPQ`` for projectors ``P`` and ``Q``.

    Always equal to ``||PQP||``.
    """
    P = check_projector(P, name="P")
    Q = check_projector(Q, name="Q")
    if P.shape != Q.shape:
        raise ShapeError(f"P and Q act on different spaces: {P.shape} vs {Q.shape}")
    return float(np.linalg.norm(Q @ P @ Q, 2))


def frame_to_vector(F) -> np.ndarray:
    """``psi = sum_i e_i (x) F e_i``; its norm squared is ``tr F^*F``."""
    F = _as_matrix(F)
    return F.T.reshape(-1).copy()


def vector_to_frame(psi, d1: int, d2: int) -> np.ndarray:
    """Inverse of :func:`frame_to_vector` for ``psi`` on ``C^d1 (x) C^d2``."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d1 * d2:
        raise ShapeError(f"vector of length {psi.size} is not on C^{d1} (x) C^{d2}")
    return psi.reshape(d1, d2).T.copy()


def frame_to_projector(F, d1: int | None = None) -> np.ndarray:
    """Rank-1 projector ``sum_ij e_ij (x) F e_ij F^*`` on ``C^d1 (x) C^d2``."""
    F = check_frame(F)
    d2, n = F.shape
    if d1 is not None and d1 != n:
        raise ShapeError(f"frame has {n} columns, expected d1 = {d1}")
    # block (i, j) is F e_ij F^* = F[:, i] F[:, j]^*
    P = np.einsum("ai,bj->iajb", F, F.conj())
    return P.reshape(n * d2, n * d2)


def top_k_projector(F, k: int) -> np.ndarray:
    """Projector onto the span of the ``k`` leading left singular vectors of ``F``.

    It maximizes ``tr(p F F^*)`` over rank-``k`` projectors ``p``.
    """
    F = _as_matrix(F)
    if not 1 <= k <= F.shape[0]:
        raise ValueError(f"k must be in [1, {F.shape[0]}], got {k}")
    U, _, _ = np.linalg.svd(F)
    Uk = U[:, :k]
    return Uk @ Uk.conj().T


def compressed_projector_norm(F, p) -> float:
    """``||(I (x) p) P (I (x) p)||`` for ``P`` the projector of frame ``F``.

    Evaluated as the largest eigenvalue of the compressed operator; equals
    ``tr(p F F^*)``.
    """
    F = check_frame(F)
    p = check_projector(p, name="p")
    d2, d1 = F.shape
    if p.shape != (d2, d2):
        raise ShapeError(f"p must be {d2}x{d2} to act on the frame codomain, got {p.shape}")
    Q = np.kron(np.eye(d1), p)
    C = Q @ frame_to_projector(F) @ Q
    C = (C + C.conj().T) / 2
    return float(np.linalg.eigvalsh(C)[-1])


def partial_trace(rho, dims, keep) -> np.ndarray:
    """Partial trace of ``rho`` over all factors not listed in ``keep``."""
    rho = _as_matrix(rho)
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    keep = sorted(set([keep] if isinstance(keep, (int, np.integer)) else keep))
    t = rho.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # trace out from the highest axis so the remaining indices stay valid
    for count, ax in enumerate(sorted(traced, reverse=True)):
        m = n - count
        t = np.trace(t, axis1=ax, axis2=ax + m)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(dk, dk)


def maximally_entangled_frame(d: int) -> np.ndarray:
    return np.eye(d, dtype=complex) / np.sqrt(d)


def maximally_entangled_projector(d: int) -> np.ndarray:
    """``P+`` onto ``sum_i e_i (x) e_i / sqrt(d)``."""
    v = frame_to_vector(maximally_entangled_frame(d))
    return np.outer(v, v.conj())


def swap_operator(d: int) -> np.ndarray:
    """``sum_ij e_ij (x) e_ji`` on ``C^d (x) C^d``."""
    S = np.zeros((d, d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            S[i, j, j, i] = 1.0
    return S.reshape(d * d, d * d)


def orthonormal_complement(vectors) -> np.ndarray:
    """Orthonormal basis (as columns) of the complement of ``span(vectors)``.

    ``vectors`` holds the spanning vectors as columns.
    """
    V = np.asarray(vectors, dtype=complex)
    if V.ndim == 1:
        V = V[:, None]
    n, r = V.shape
    # full QR of [V | I] gives a basis whose first r columns span V
    Q, _ = np.linalg.qr(np.hstack([V, np.eye(n, dtype=complex)]))
    return Q[:, r:n]


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_unitary(d: int, rng=None) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    rng = _rng(rng)
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_frame(d2: int, d1: int, rng=None, rank: int | None = None) -> np.ndarray:
    """Gaussian frame with ``tr F F^* = 1``, optionally of prescribed rank."""
    rng = _rng(rng)
    F = rng.standard_normal((d2, d1)) + 1j * rng.standard_normal((d2, d1))
    if rank is not None:
        U, s, Vh = np.linalg.svd(F, full_matrices=False)
        F = (U[:, :rank] * s[:rank]) @ Vh[:rank]
    return F / np.linalg.norm(F)


def random_projector(d: int, k: int, rng=None) -> np.ndarray:
    U = random_unitary(d, rng)[:, :k]
    return U @ U.conj().T


def random_hermitian(d: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (Z + Z.conj().T) / 2
