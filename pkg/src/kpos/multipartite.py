"""Positivity on separable elements for maps into multipartite algebras.

Conventions.  ``dims = (d1, d2, ..., dn)`` with ``H1`` carrying index 0.
A :class:`~kpos.maps.MapDecomposition` ``m`` with ``m.d1 = d1`` and
``m.d2 = d2 * ... * dn`` has frames ``F: H1 -> H2 (x) ... (x) Hn`` and
encodes the dual ``phi#(b) = sum +-lam F b F^*``.  The map acting on the
multipartite algebra is ``phi = dual_map(m)``, ``phi(a) = sum +-lam F^* a F``.
Its generalized Choi operator ``d1 (id (x) phi#) P+`` equals
``sum +-lam P_alpha`` on ``H1 (x) H2 (x) ... (x) Hn``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._config import InapplicableError, ShapeError, ValidationError, get_tolerances
from .certificates import (
    Certificate,
    Verdict,
    Witness,
    _at_least,
    _min_positive_coefficient,
    certify_k_positive,
    certify_not_k_positive,
)
from .maps import ChoiOperator, MapDecomposition, Term, apply_map, _complement_frames
from .oracle import OracleResult
from .spectral import check_projector, ky_fan_overlap, swap_operator

__all__ = [
    "ProductProjector",
    "SepNormResult",
    "sep_inner_product",
    "sep_norm",
    "make_F0",
    "make_multipartite_example",
    "generalized_choi_operator",
    "product_block_positivity",
    "certify_sep_positive",
    "sep_positive_not_positive_window",
    "sep_norm_upper_bound",
]


@dataclass(frozen=True)
class ProductProjector:
    """``p2 (x) ... (x) pn`` with every factor a rank-1 projector."""

    factors: tuple[np.ndarray, ...]

    def __post_init__(self):
        fs = tuple(check_projector(p, k=1, name=f"factor {i}") for i, p in enumerate(self.factors))
        if not fs:
            raise ValidationError("at least one factor is required")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def from_vectors(cls, vectors: Sequence) -> "ProductProjector":
        out = []
        for v in vectors:
            v = np.asarray(v, dtype=complex).reshape(-1)
            v = v / np.linalg.norm(v)
            out.append(np.outer(v, v.conj()))
        return cls(tuple(out))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(p.shape[0] for p in self.factors)

    @property
    def matrix(self) -> np.ndarray:
        out = np.ones((1, 1), dtype=complex)
        for p in self.factors:
            out = np.kron(out, p)
        return out

    def vector(self) -> np.ndarray:
        """Unit vector spanning the range (defined up to phase)."""
        out = np.ones(1, dtype=complex)
        for p in self.factors:
            w, V = np.linalg.eigh(p)
            out = np.kron(out, V[:, -1])
        return out


@dataclass(frozen=True)
class SepNormResult:
    """``value`` is ``||A||_sep^2``, certified only as a lower bound."""

    value: float
    argmax: ProductProjector
    restarts: int
    seed: int
    converged: bool


def sep_inner_product(A, B, P: ProductProjector) -> complex:
    """``tr[(P A)^* (P B)] = tr(A^* P B)``."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    n = int(np.prod(P.dims))
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != n:
        raise ShapeError(f"A {A.shape} and B {B.shape} must both have {n} rows")
    # apply the factors one at a time instead of forming the Kronecker product
    T = B.reshape(*P.dims, B.shape[1])
    for axis, p in enumerate(P.factors):
        T = np.moveaxis(np.tensordot(p, T, axes=([1], [axis])), 0, axis)
    return complex(np.vdot(A, T.reshape(n, -1)))


def _contract_all_but(T, vectors, j):
    """Operator on factor ``j`` from contracting ``T`` with the other unit vectors.

    ``T`` has shape ``dims + dims`` (row indices, then column indices).
    """
    n = len(vectors)
    X = T
    # contract highest factors first so lower axis numbers stay valid
    for i in sorted((i for i in range(n) if i != j), reverse=True):
        v = vectors[i]
        cur = X.ndim // 2
        X = np.tensordot(X, v, axes=([cur + i], [0]))
        X = np.tensordot(v.conj(), X, axes=([0], [i]))
    return X


def _alternate(T, dims, vectors, sense, tol, max_sweeps):
    """Coordinate ascent/descent of ``<y|T|y>`` over product unit vectors ``y``."""
    pick = -1 if sense > 0 else 0
    value = None
    converged = False
    for _ in range(max_sweeps):
        for j in range(len(dims)):
            M = _contract_all_but(T, vectors, j)
            M = (M + M.conj().T) / 2
            w, V = np.linalg.eigh(M)
            vectors[j] = V[:, pick]
            new = float(w[pick])
        if value is not None and sense * (new - value) < -1e-12 * max(1.0, abs(value)):
            raise RuntimeError("alternating optimization lost monotonicity")
        if value is not None and abs(new - value) <= tol * max(1.0, abs(new)):
            converged = True
            value = new
            break
        value = new
    return value, vectors, converged


def _random_unit(d, rng):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def _parse_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2 or min(dims) < 1:
        raise ShapeError(f"need at least two positive factor dimensions, got {dims}")
    return dims


def sep_norm(A, dims, restarts: int = 64, seed: int = 0, tol: float = 1e-12,
             max_sweeps: int = 10_000) -> SepNormResult:
    """``max tr(P A A^*)`` over product rank-1 projectors ``P`` on ``H2 (x) ... (x) Hn``.

    Alternating maximization: with all factors but ``p_j`` fixed, the best
    ``p_j`` projects onto the top eigenvector of the partial contraction of
    ``A A^*``.  The returned value is attained by ``argmax``, so it is a
    lower bound on the true maximum (and exact when only one codomain
    factor is present).
    """
    dims = _parse_dims(dims)
    A = np.asarray(A, dtype=complex)
    cod = dims[1:]
    n = int(np.prod(cod))
    if A.ndim != 2 or A.shape != (n, dims[0]):
        raise ShapeError(f"A must be {n}x{dims[0]} for dims {dims}, got {A.shape}")
    M = A @ A.conj().T
    T = M.reshape(cod + cod)
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        vecs = [_random_unit(d, rng) for d in cod]
        value, vecs, conv = _alternate(T, cod, vecs, +1, tol, max_sweeps)
        if best is None or value > best[0]:
            best = (value, [v.copy() for v in vecs], conv)
    value, vecs, conv = best
    P = ProductProjector.from_vectors(vecs)
    exact = float(sep_inner_product(A, A, P).real)
    return SepNormResult(exact, P, restarts, seed, conv)


def make_F0(d: int) -> np.ndarray:
    """``(I (x) I - sum_ij e_ij (x) e_ij^*) / sqrt(2d(d-1))`` with ``e_ij^* = e_ji``.

    ``sum_ij e_ij (x) e_ji`` is the swap, so ``sqrt(d(d-1)/2) F0`` is the
    projector onto the antisymmetric subspace.
    """
    if d < 2:
        raise ValueError(f"d must be at least 2, got {d}")
    F0 = (np.eye(d * d) - swap_operator(d)) / np.sqrt(2 * d * (d - 1))
    tol = get_tolerances().atol
    if abs(np.trace(F0 @ F0).real - 1.0) > tol:
        raise ValidationError("F0 is not Hilbert-Schmidt normalized")
    check_projector(np.sqrt(d * (d - 1) / 2) * F0, name="sqrt(d(d-1)/2) F0")
    return F0


def make_multipartite_example(d: int, lam: float) -> MapDecomposition:
    """``a -> lam (I tr a - F0 a F0) - F0 a F0`` on ``M_d (x) M_d -> M_{d^2}``.

    ``I tr a`` spans every frame of an orthonormal basis containing ``F0``,
    so the canonical split has coefficient ``lam`` on the complement of
    ``F0`` and ``1`` on the negative frame ``F0``.
    """
    if lam <= 0:
        raise ValueError(f"lam must be positive, got {lam}")
    F0 = make_F0(d).astype(complex)
    D = d * d
    pos = tuple(Term(float(lam), F) for F in _complement_frames([F0]))
    return MapDecomposition(D, D, pos, (Term(1.0, F0),))


def generalized_choi_operator(m: MapDecomposition, dims) -> ChoiOperator:
    """``d1 (id (x) phi#) P+`` tagged with ``dims``.

    ``m`` is the dual ``phi#`` (see module notes); ``P+`` is the maximally
    entangled projector on ``H1 (x) H1``.
    """
    dims = _parse_dims(dims)
    if dims[0] != m.d1 or int(np.prod(dims[1:])) != m.d2:
        raise ShapeError(f"dims {dims} incompatible with a map from M_{m.d1} to M_{m.d2}")
    d1, D2 = m.d1, m.d2
    phi_plus = np.zeros((d1, d1, d1, d1), dtype=complex)
    for i in range(d1):
        for j in range(d1):
            phi_plus[i, i, j, j] = 1.0 / d1
    # (id (x) phi#) acts blockwise: block (i, j) of P+ is mapped by phi#
    out = np.zeros((d1, D2, d1, D2), dtype=complex)
    for i in range(d1):
        for j in range(d1):
            out[i, :, j, :] = apply_map(m, phi_plus[i, :, j, :])
    return ChoiOperator(dims, d1 * out.reshape(d1 * D2, d1 * D2))


def product_block_positivity(c: ChoiOperator, restarts: int = 32, seed: int = 0,
                             tol: float = 1e-12, max_sweeps: int = 10_000) -> OracleResult:
    """Variational minimum of ``<x (x) y2 (x) ... (x) yn| c |x (x) y2 (x) ... (x) yn>``.

    Equivalently the smallest eigenvalue of
    ``(I (x) p2 (x) ... (x) pn) c (I (x) p2 (x) ... (x) pn)`` over rank-1
    ``p_j``.  Each factor is updated in turn to the bottom eigenvector of
    the contraction with the others.
    """
    dims = tuple(c.dims)
    if len(dims) < 3:
        raise ShapeError("product block positivity needs at least 3 factors; "
                         "use kpos.oracle.min_block_eigenvalue for bipartite operators")
    T = c.matrix.reshape(dims + dims)
    best = None
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        vecs = [_random_unit(d, rng) for d in dims]
        value, vecs, conv = _alternate(T, dims, vecs, -1, tol, max_sweeps)
        if best is None or value < best[0]:
            best = (value, [v.copy() for v in vecs], conv)
    _, vecs, conv = best
    xi = np.ones(1, dtype=complex)
    for v in vecs:
        xi = np.kron(xi, v)
    value = float(np.vdot(xi, c.matrix @ xi).real)
    return OracleResult(min_value=value, argmin_vector=xi, argmin_frame=None,
                        restarts=restarts, converged=conv, seed=seed, k=1,
                        factors=tuple(vecs))


def _closed_form_sep(F: np.ndarray, cod: tuple[int, ...]) -> float | None:
    """``1/(d(d-1))`` when ``F F^*`` coincides with ``F0^2`` on ``C^d (x) C^d``."""
    if len(cod) != 2 or cod[0] != cod[1] or cod[0] < 2:
        return None
    d = cod[0]
    F0 = make_F0(d)
    if np.max(np.abs(F @ F.conj().T - F0 @ F0)) <= get_tolerances().atol:
        return 1.0 / (d * (d - 1))
    return None


def sep_norm_upper_bound(F, dims) -> tuple[float, str]:
    """A rigorous upper bound on ``||F||_sep^2`` and where it came from."""
    dims = _parse_dims(dims)
    F = np.asarray(F, dtype=complex)
    closed = _closed_form_sep(F, dims[1:])
    if closed is not None:
        return closed, "closed form for F0"
    if len(dims) == 2:
        return ky_fan_overlap(F, 1), "single codomain factor: exact"
    return ky_fan_overlap(F, 1), "operator norm bound"


def _sep_bracket(F1, dims, restarts, seed):
    res = sep_norm(F1, dims, restarts=restarts, seed=seed)
    upper, source = sep_norm_upper_bound(F1, dims)
    lower = min(res.value, upper)
    return lower, upper, source, res


def certify_sep_positive(m: MapDecomposition, dims, restarts: int = 64,
                         seed: int = 0) -> Certificate:
    """Positivity of ``dual_map(m)`` on separable elements (single negative term).

    Certified when every positive coefficient is at least
    ``lam1 s / (1 - s)`` with ``s`` an upper bound on ``||F1||_sep^2``.
    Otherwise a product vector ``x (x) y`` is built from the sep-optimal
    ``y`` and ``x ~ conj(F1^* y)``; if its expectation is negative the map is
    refuted.  A variational product search is the last resort before
    ``INCONCLUSIVE``.
    """
    dims = _parse_dims(dims)
    if len(m.negative) != 1:
        raise ValueError(f"exactly one negative term required, got {len(m.negative)}")
    lam1, F1 = m.negative[0].lam, m.negative[0].F
    if lam1 == 0:
        return Certificate(Verdict.K_POSITIVE_CERTIFIED, 1, mu=0.0, nu=0.0,
                           kind="sep_positive", reason="no negative part: completely positive")
    lower, upper, source, res = _sep_bracket(F1, dims, restarts, seed)
    tol = get_tolerances()
    if lower >= 1.0 - tol.atol:
        raise InapplicableError(f"||F1||_sep^2 >= {lower:.12g} is not below 1")
    thr_lo = lam1 * lower / (1.0 - lower)
    thr_hi = lam1 * upper / (1.0 - upper) if upper < 1.0 else np.inf
    lam_min = _min_positive_coefficient(m)
    if _at_least(lam_min, thr_hi):
        return Certificate(Verdict.K_POSITIVE_CERTIFIED, 1, mu=thr_hi, nu=thr_hi,
                           kind="sep_positive", bounds=(thr_lo, thr_hi),
                           reason=f"min positive coefficient {lam_min:.6g} >= threshold ({source})")

    choi = generalized_choi_operator(m, dims)
    y = res.argmax.vector()
    x = (F1.conj().T @ y).conj()
    if np.linalg.norm(x) > 0:
        xi = np.kron(x / np.linalg.norm(x), y)
        v = float(np.vdot(xi, choi.matrix @ xi).real)
        if v < -tol.witness:
            return Certificate(Verdict.NOT_K_POSITIVE_CERTIFIED, 1, mu=thr_hi, nu=thr_hi,
                               kind="sep_positive", bounds=(thr_lo, thr_hi),
                               witness=Witness(xi, res.argmax.matrix, v),
                               reason="negative expectation on a product vector")
    if len(dims) >= 3:
        found = product_block_positivity(choi, restarts=restarts, seed=seed)
        if found.min_value < -tol.witness:
            P = ProductProjector.from_vectors(found.factors[1:])
            return Certificate(Verdict.NOT_K_POSITIVE_CERTIFIED, 1, mu=thr_hi, nu=thr_hi,
                               kind="sep_positive", bounds=(thr_lo, thr_hi),
                               witness=Witness(found.argmin_vector, P.matrix, found.min_value),
                               reason="variational product search found a negative value")
    return Certificate(Verdict.INCONCLUSIVE, 1, mu=thr_hi, nu=thr_hi, kind="sep_positive",
                       bounds=(thr_lo, thr_hi), reason="no certificate and no product witness")


def sep_positive_not_positive_window(m: MapDecomposition, dims, restarts: int = 64,
                                     seed: int = 0) -> tuple[Certificate, Certificate]:
    """Separable-positivity certificate and ordinary positivity certificate.

    The map is positive on separable elements yet not positive exactly on
    the coefficient window ``[lam1 s/(1-s), lam1 f/(1-f))`` with
    ``s = ||F1||_sep^2`` and ``f = ||F1||^2``.  The second certificate is the
    level-1 refutation when it fires, else the level-1 positivity test.
    """
    dims = _parse_dims(dims)
    if len(m.negative) != 1:
        raise ValueError(f"exactly one negative term required, got {len(m.negative)}")
    F1 = m.negative[0].F
    f = ky_fan_overlap(F1, 1)
    tol = get_tolerances().atol
    if f >= 1.0 - tol:
        raise InapplicableError(f"||F1||^2 = {f:.12g} is not below 1")
    upper, _ = sep_norm_upper_bound(F1, dims)
    estimate = min(upper, sep_norm(F1, dims, restarts=restarts, seed=seed).value)
    if estimate >= f - tol:
        raise InapplicableError("no gap between ||F1||_sep and ||F1||")
    sep = certify_sep_positive(m, dims, restarts=restarts, seed=seed)
    pos = certify_not_k_positive(m, 1)
    if not pos.refuted:
        pos = certify_k_positive(m, 1)
    return sep, pos
