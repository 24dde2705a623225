"""Acceptance criteria, each at its stated tolerance and runtime limit.

Run ``pytest tests/test_acceptance.py`` to get one PASS/FAIL line per
criterion in the terminal summary.
"""

import numpy as np
import pytest

from kpos import (
    Verdict,
    certify_k_positive,
    certify_not_k_positive,
    certify_sep_positive,
    choi_map,
    choi_of_map,
    classify_rho_mu,
    compose_with_transpose,
    dual_map,
    apply_map,
    generalized_choi_operator,
    make_F0,
    make_generalized_choi,
    make_multipartite_example,
    make_rho_mu,
    map_of_choi,
    min_block_eigenvalue,
    positivity_window,
    reduction_map,
    sep_norm,
    sep_positive_not_positive_window,
    sn_lower_bound,
    witness_expectation,
)
from kpos.spectral import (
    compressed_projector_norm,
    ky_fan_norm,
    ky_fan_overlap,
    maximally_entangled_frame,
    numerical_rank,
    projector_overlap_norm,
    random_frame,
    random_hermitian,
    random_projector,
    singular_values,
)
from kpos.maps import ChoiOperator

from conftest import random_complex, random_decomposition
from test_maps import orthogonal_unitary_frames

pytestmark = pytest.mark.acceptance

CERT, NOT, INC = (Verdict.K_POSITIVE_CERTIFIED, Verdict.NOT_K_POSITIVE_CERTIFIED,
                  Verdict.INCONCLUSIVE)


def unit_rank_one(rng, d):
    v = random_complex(rng, d)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def test_1_choi_map_reproduction(criterion):
    with criterion("1 Choi map reproduction", 5):
        m = choi_map(3)
        assert [c.verdict for c in positivity_window(m)] == [CERT, CERT, NOT]
        lam = 3 / 2
        assert abs(choi_of_map(m).min_eigenvalue() - (1 - lam)) <= 1e-12
        assert abs(choi_of_map(m).min_eigenvalue() + 0.5) <= 1e-12


def test_2_reduction_map(criterion):
    with criterion("2 reduction map", 10):
        m = reduction_map(3)
        assert certify_k_positive(m, 1).verdict is CERT
        assert min_block_eigenvalue(choi_of_map(m), 1).min_value >= -1e-8
        not2 = certify_not_k_positive(m, 2)
        assert not2.verdict is NOT and not2.witness.value < -1e-10
        assert compose_with_transpose(m).min_eigenvalue() >= -1e-12


def test_3_threshold_sharpness(criterion):
    with criterion("3 threshold sharpness", 60):
        d, F1 = 3, maximally_entangled_frame(3)
        for k in (1, 2):
            edge = d / k
            below = make_generalized_choi(d, edge - 0.02, F1)
            above = make_generalized_choi(d, edge + 0.02, F1)
            at = make_generalized_choi(d, edge, F1)
            assert certify_k_positive(below, k).verdict is CERT
            assert certify_not_k_positive(below, k).verdict is INC
            assert certify_k_positive(above, k).verdict is INC
            assert certify_not_k_positive(above, k).verdict is NOT
            assert certify_k_positive(at, k).verdict is CERT
            lo = min_block_eigenvalue(choi_of_map(below), k).min_value
            hi = min_block_eigenvalue(choi_of_map(above), k).min_value
            mid = min_block_eigenvalue(choi_of_map(at), k).min_value
            assert lo > 0 > hi
            assert abs(mid) <= 5e-3


def test_4_isotropic_ladder(criterion):
    with criterion("4 isotropic Schmidt-number ladder", 5):
        F = maximally_entangled_frame(3)
        for mu, sn in ((0.2, 1), (0.5, 2), (0.9, 3)):
            fam = make_rho_mu(3, mu)
            assert classify_rho_mu(fam, [F]) == sn
            assert sn_lower_bound(fam.rho, 3) == sn
            for lam in (1.0, 1.5, 3.0):
                c = choi_of_map(make_generalized_choi(3, lam, F))
                assert abs(witness_expectation(c, fam.rho) - (1 - lam * mu)) <= 1e-12


def test_5_rank_m_generalization(criterion):
    with criterion("5 rank-m generalization", 5):
        d, m = 4, 2
        frames = orthogonal_unitary_frames(d, m)
        for k in range(1, d + 1):
            assert abs(sum(ky_fan_overlap(F, k) for F in frames) - m * k / d) <= 1e-12


def test_6_F0_norms(criterion, rng):
    with criterion("6 F0 norms", 30):
        for d in (2, 3, 4):
            F0 = make_F0(d)
            assert abs(ky_fan_overlap(F0, 1) - 2 / (d * (d - 1))) <= 1e-12
            s = sep_norm(F0, (d * d, d, d), restarts=64)
            assert abs(s.value - 1 / (d * (d - 1))) <= 1e-6
            F0sq = F0 @ F0
            for _ in range(100):
                p, q = unit_rank_one(rng, d), unit_rank_one(rng, d)
                lhs = np.trace(np.kron(p, q) @ F0sq).real
                assert abs(lhs - (1 - np.trace(p @ q).real) / (d * (d - 1))) <= 1e-12


def test_7_sep_positive_window(criterion):
    with criterion("7 sep-positive-not-positive window", 60):
        dims = (9, 3, 3)
        outcomes = {}
        for lam in (0.15, 0.25, 0.45, 0.55):
            m = make_multipartite_example(3, lam)
            sep, pos = sep_positive_not_positive_window(m, dims)
            outcomes[lam] = (sep.verdict, pos.verdict)
            assert sep.bounds == pytest.approx((0.2, 0.2), abs=1e-12)
            assert certify_not_k_positive(m, 1).mu == pytest.approx(0.5, abs=1e-12)
        sep15 = certify_sep_positive(make_multipartite_example(3, 0.15), dims)
        assert sep15.witness is not None and sep15.witness.value < -1e-10
        assert outcomes[0.15][0] is NOT
        assert outcomes[0.25] == (CERT, NOT)
        assert outcomes[0.45] == (CERT, NOT)
        # positive regime: the level-1 refutation's hypothesis fails
        m = make_multipartite_example(3, 0.55)
        assert certify_not_k_positive(m, 1).verdict is INC
        assert outcomes[0.55] == (CERT, CERT)


def test_8_property_suites(criterion, rng):
    with criterion("8 property suites", 300):
        # k-norm monotonicity and rank saturation
        for _ in range(500):
            rows, cols = rng.integers(2, 6, size=2)
            r = int(rng.integers(1, min(rows, cols) + 1))
            a = random_complex(rng, rows, r) @ random_complex(rng, r, cols)
            assert numerical_rank(a) == r
            s = singular_values(a)
            for k in range(1, min(rows, cols)):
                gap = ky_fan_norm(a, k + 1) - ky_fan_norm(a, k)
                assert gap >= -1e-12
                assert (gap <= 1e-9 * s[0]) == (r <= k)
        # projector identities
        for _ in range(500):
            P = random_projector(6, int(rng.integers(1, 6)), rng)
            Q = random_projector(6, int(rng.integers(1, 6)), rng)
            assert abs(projector_overlap_norm(P, Q) - projector_overlap_norm(Q, P)) <= 1e-10
        for _ in range(500):
            d1, d2 = rng.integers(1, 5, size=2)
            k = int(rng.integers(1, min(d1, d2) + 1))
            F = random_frame(d2, d1, rng)
            p = random_projector(d2, k, rng)
            v = compressed_projector_norm(F, p)
            assert abs(v - np.trace(p @ F @ F.conj().T).real) <= 1e-10
            assert v <= ky_fan_overlap(F, k) + 1e-10
        # CJ round trip
        for _ in range(100):
            c = choi_of_map(random_decomposition(rng, 3, 3, n_neg=int(rng.integers(0, 4))))
            assert np.max(np.abs(choi_of_map(map_of_choi(c)).matrix - c.matrix)) <= 1e-10
        # oracle exactness at k = d
        for i in range(100):
            C = random_hermitian(9, rng)
            r = min_block_eigenvalue(ChoiOperator((3, 3), C), 3, restarts=20, seed=i)
            assert abs(r.min_value - np.linalg.eigvalsh(C)[0]) <= 1e-8
        # multipartite trace identity
        for _ in range(100):
            m = random_decomposition(rng, 2, 4, n_neg=int(rng.integers(0, 3)))
            c = generalized_choi_operator(m, (2, 2, 2))
            p1, p2, p3 = (unit_rank_one(rng, 2) for _ in range(3))
            lhs = np.trace(np.kron(np.kron(p1, p2), p3) @ c.matrix).real
            rhs = np.trace(p1.T @ apply_map(dual_map(m), np.kron(p2, p3)))
            assert abs(lhs - rhs) <= 1e-11
        # sep-norm below operator norm
        for i in range(500):
            d = int(rng.integers(2, 4))
            A = random_complex(rng, d * d, d)
            s = sep_norm(A, (d, d, d), restarts=4, seed=i)
            assert s.value <= np.linalg.eigvalsh(A @ A.conj().T)[-1] + 1e-9
