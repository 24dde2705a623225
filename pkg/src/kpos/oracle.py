"""Variational check of k-block positivity.

The oracle minimizes ``<psi|C|psi>`` over unit vectors of Schmidt rank at
most ``k``, parametrized by a rank-``k`` frame ``G`` with
``psi = sum_i e_i (x) G e_i``.  It never reads map coefficients, so it is an
independent check on :mod:`kpos.certificates`.  A negative minimum comes
with an explicit vector and is a proof; a non-negative one is evidence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._config import ShapeError, get_tolerances
from .maps import ChoiOperator

__all__ = [
    "OracleResult",
    "BlockPositivity",
    "min_block_eigenvalue",
    "is_k_block_positive",
    "exhaustive_check_2x2",
    "DEFAULT_RESTARTS",
]

DEFAULT_RESTARTS = 32


@dataclass(frozen=True)
class OracleResult:
    min_value: float
    argmin_vector: np.ndarray
    argmin_frame: np.ndarray | None
    restarts: int
    converged: bool
    seed: int
    k: int
    iterations: int = 0
    factors: tuple[np.ndarray, ...] | None = None


@dataclass(frozen=True)
class BlockPositivity:
    positive: bool
    margin: float
    result: OracleResult


def _quad(C, psi) -> float:
    return float(np.vdot(psi, C @ psi).real)


def _truncate(psi, d1, d2, k):
    """Best Schmidt-rank-``k`` approximation of ``psi``, renormalized."""
    M = psi.reshape(d1, d2)
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    M = (U[:, :k] * s[:k]) @ Vh[:k]
    out = M.reshape(-1)
    return out / np.linalg.norm(out), U[:, :k], Vh[:k]


def _subspace_min(C, W):
    """Exact minimizer of the quadratic form over the range of isometry ``W``."""
    B = W.conj().T @ C @ W
    w, V = np.linalg.eigh((B + B.conj().T) / 2)
    psi = W @ V[:, 0]
    return psi / np.linalg.norm(psi)


def _descend(C, d1, d2, k, psi, max_iter, tol):
    value = _quad(C, psi)
    e1, e2 = np.eye(d1), np.eye(d2)
    for it in range(1, max_iter + 1):
        start = value
        # Riemannian gradient step with truncated-SVD retraction and halving
        g = C @ psi - value * psi
        t = 1.0
        while t > 1e-12:
            cand, _, _ = _truncate(psi - t * g, d1, d2, k)
            cv = _quad(C, cand)
            if cv < value:
                psi, value = cand, cv
                break
            t *= 0.5
        # exact minimization with one Schmidt subspace frozen, each side in turn
        _, U, Vh = _truncate(psi, d1, d2, k)
        for W in (np.kron(U, e2), np.kron(e1, Vh.T)):
            cand = _subspace_min(C, W)
            cv = _quad(C, cand)
            if cv < value:
                psi, value = cand, cv
        if abs(start - value) <= tol * max(1.0, abs(value)):
            return psi, value, True, it
    return psi, value, False, max_iter


def min_block_eigenvalue(c: ChoiOperator, k: int, restarts: int = DEFAULT_RESTARTS,
                         seed: int = 0, max_iter: int = 10_000,
                         tol: float = 1e-12) -> OracleResult:
    """Minimum of ``<psi|c|psi>`` over unit ``psi`` of Schmidt rank ``<= k``.

    Each restart draws a complex Gaussian frame, truncates it to rank ``k``
    and alternates a projected gradient step with exact eigen-solves on the
    subspaces ``range(U_k) (x) C^d2`` and ``C^d1 (x) range(V_k)``.  All
    steps are monotone.  At ``k = min(d1, d2)`` one of those subspaces is
    the whole space, so the result is the exact minimum eigenvalue.

    Parameters
    ----------
    c : ChoiOperator
        Bipartite operator.
    k : int
        Schmidt-rank bound, ``1 <= k <= min(d1, d2)``.
    restarts, seed : int
        Independent random starts; restart ``r`` uses the ``r``-th child of
        ``SeedSequence(seed)``, so results are reproducible bit for bit.
    """
    if len(c.dims) != 2:
        raise ShapeError(f"bipartite operator required, got dims {c.dims}")
    d1, d2 = c.dims
    if not 1 <= k <= min(d1, d2):
        raise ValueError(f"k must be in [1, {min(d1, d2)}], got {k}")
    if restarts < 1:
        raise ValueError("restarts must be positive")
    C = c.matrix
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        z = rng.standard_normal(d1 * d2) + 1j * rng.standard_normal(d1 * d2)
        psi, _, _ = _truncate(z, d1, d2, k)
        psi, value, conv, its = _descend(C, d1, d2, k, psi, max_iter, tol)
        if best is None or value < best[1]:
            best = (psi, value, conv, its)
    psi, _, conv, its = best
    psi, _, _ = _truncate(psi, d1, d2, k)
    G = psi.reshape(d1, d2).T.copy()
    return OracleResult(min_value=_quad(C, psi), argmin_vector=psi, argmin_frame=G,
                        restarts=restarts, converged=conv, seed=seed, k=k, iterations=its)


def is_k_block_positive(c: ChoiOperator, k: int, restarts: int = DEFAULT_RESTARTS,
                        seed: int = 0) -> BlockPositivity:
    res = min_block_eigenvalue(c, k, restarts=restarts, seed=seed)
    return BlockPositivity(res.min_value >= -get_tolerances().block, res.min_value, res)


def bloch_grid(grid: int) -> np.ndarray:
    """``grid**2`` unit vectors ``(cos(t/2), e^{i f} sin(t/2))`` on a regular grid."""
    theta = np.linspace(0.0, np.pi, grid)
    phi = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    T, P = np.meshgrid(theta, phi, indexing="ij")
    return np.stack([np.cos(T / 2), np.exp(1j * P) * np.sin(T / 2)], axis=-1).reshape(-1, 2)


def exhaustive_check_2x2(c: ChoiOperator, grid: int = 24) -> float:
    """Grid minimum of ``<x (x) y|c|x (x) y>`` over product qubit vectors.

    An upper bound on the product-state minimum, used to cross-check the
    variational oracle at ``d1 = d2 = 2``, ``k = 1``.
    """
    if tuple(c.dims) != (2, 2):
        raise ShapeError(f"exhaustive check needs dims (2, 2), got {c.dims}")
    X = bloch_grid(grid)
    T = c.matrix.reshape(2, 2, 2, 2)
    vals = np.einsum("ai,bj,ijkl,ak,bl->ab", X.conj(), X.conj(), T, X, X, optimize=True)
    return float(vals.real.min())
