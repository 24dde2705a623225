import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import minimize

from kpos import NormalizationError, ProjectorError, ShapeError
from kpos.spectral import (
    check_frame,
    compressed_projector_norm,
    frame_to_projector,
    frame_to_vector,
    ky_fan_norm,
    ky_fan_overlap,
    maximally_entangled_frame,
    maximally_entangled_projector,
    numerical_rank,
    orthonormal_complement,
    partial_trace,
    projector_overlap_norm,
    random_frame,
    random_projector,
    singular_values,
    swap_operator,
    top_k_projector,
    vector_to_frame,
)

from conftest import random_complex

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def complex_matrices(max_side=5):
    shape = st.tuples(st.integers(1, max_side), st.integers(1, max_side))
    return shape.flatmap(lambda s: st.tuples(arrays(float, s, elements=finite),
                                             arrays(float, s, elements=finite))
                         ).map(lambda pair: pair[0] + 1j * pair[1])


class TestSingularValues:
    def test_identity(self):
        assert np.allclose(singular_values(np.eye(3)), [1, 1, 1])

    def test_diagonal_absolute_values(self):
        assert np.allclose(singular_values(np.diag([3, -2j, 1])), [3, 2, 1])

    def test_matches_eigensolver(self, rng):
        A = random_complex(rng, 4, 3)
        ref = np.sqrt(np.clip(np.linalg.eigvalsh(A.conj().T @ A), 0, None))[::-1]
        assert np.max(np.abs(singular_values(A) - ref)) <= 1e-10

    @given(complex_matrices())
    def test_non_increasing_and_length(self, a):
        s = singular_values(a)
        assert len(s) == min(a.shape)
        assert np.all(np.diff(s) <= 1e-12) and np.all(s >= 0)


class TestKyFan:
    def test_identity(self):
        assert ky_fan_norm(np.eye(3), 2) == pytest.approx(2)

    def test_diagonal(self):
        assert ky_fan_norm(np.diag([3, 2, 1]), 2) == pytest.approx(5)

    def test_full_rank_is_trace_norm(self, rng):
        a = random_complex(rng, 3, 3)
        assert ky_fan_norm(a, 3) == pytest.approx(np.linalg.norm(a, "nuc"), abs=1e-12)

    def test_k1_is_operator_norm(self, rng):
        a = random_complex(rng, 4, 3)
        assert ky_fan_norm(a, 1) == pytest.approx(np.linalg.norm(a, 2), abs=1e-12)

    @pytest.mark.parametrize("k", [0, 4, -1])
    def test_range_error(self, k):
        with pytest.raises(ValueError):
            ky_fan_norm(np.eye(3), k)
        with pytest.raises(ValueError):
            ky_fan_overlap(np.eye(3), k)

    def test_overlap_maximally_entangled(self):
        assert ky_fan_overlap(np.eye(3) / np.sqrt(3), 2) == pytest.approx(2 / 3, abs=1e-14)

    def test_overlap_rank_one(self, rng):
        F = random_frame(3, 3, rng, rank=1)
        for k in (1, 2, 3):
            assert ky_fan_overlap(F, k) == pytest.approx(1, abs=1e-12)

    def test_overlap_eigenvalue_oracle(self, rng):
        F = random_frame(3, 3, rng)
        ev = np.sort(np.linalg.eigvalsh(F @ F.conj().T))[::-1]
        assert abs(ky_fan_overlap(F, 2) - ev[:2].sum()) <= 1e-10

    def test_overlap_sampled_projector_oracle(self, rng):
        # max over rank-2 projectors of tr(p F F^*): sampling then local refinement
        F = random_frame(3, 3, rng)
        G = F @ F.conj().T

        def value(x):
            Z = (x[:6] + 1j * x[6:]).reshape(3, 2)
            Q, _ = np.linalg.qr(Z)
            return -np.trace(Q.conj().T @ G @ Q).real

        samples = rng.standard_normal((10_000, 12))
        vals = np.array([value(x) for x in samples])
        start = samples[np.argmin(vals)]
        best = -minimize(value, start, method="BFGS", options={"gtol": 1e-12}).fun
        assert -vals.min() <= ky_fan_overlap(F, 2) + 1e-12
        assert abs(best - ky_fan_overlap(F, 2)) <= 1e-6


def test_monotonicity_and_saturation(rng):
    for _ in range(500):
        rows, cols = rng.integers(1, 6, size=2)
        rank = int(rng.integers(1, min(rows, cols) + 1))
        a = random_complex(rng, rows, rank) @ random_complex(rng, rank, cols)
        r = numerical_rank(a)
        assert r == rank
        for k in range(1, min(rows, cols)):
            lo, hi = ky_fan_norm(a, k), ky_fan_norm(a, k + 1)
            assert lo <= hi + 1e-12
            s_next = singular_values(a)[k]
            if r <= k:
                assert s_next <= 1e-9 * singular_values(a)[0]
                assert hi - lo <= 1e-9 * ky_fan_norm(a, 1)
            else:
                assert hi > lo


@settings(max_examples=200)
@given(complex_matrices())
def test_overlap_bounded_by_squared_norm(a):
    for k in range(1, min(a.shape) + 1):
        ov, n = ky_fan_overlap(a, k), ky_fan_norm(a, k)
        assert ov <= n * n * (1 + 1e-12) + 1e-12
        if k == 1:
            assert ov == pytest.approx(n * n, rel=1e-12, abs=1e-12)


def test_overlap_equals_squared_norm_only_when_rank_le_1(rng):
    a = random_complex(rng, 3, 3)
    assert ky_fan_overlap(a, 2) < ky_fan_norm(a, 2) ** 2 - 1e-6


class TestProjectorOverlap:
    def test_equal(self, rng):
        P = random_projector(4, 2, rng)
        assert projector_overlap_norm(P, P) == pytest.approx(1)
        assert projector_overlap_norm(np.zeros((4, 4)), np.zeros((4, 4))) == 0

    def test_orthogonal(self):
        P = np.diag([1, 1, 0, 0.0])
        assert projector_overlap_norm(P, np.eye(4) - P) == pytest.approx(0, abs=1e-15)

    def test_symmetry_identity(self, rng):
        for _ in range(1000):
            P = random_projector(6, int(rng.integers(1, 6)), rng)
            Q = random_projector(6, int(rng.integers(1, 6)), rng)
            assert abs(projector_overlap_norm(P, Q) - projector_overlap_norm(Q, P)) <= 1e-10

    def test_rejects_non_projector(self):
        with pytest.raises(ProjectorError):
            projector_overlap_norm(2 * np.eye(2), np.eye(2))


class TestFrames:
    def test_maximally_entangled(self):
        for d in (2, 3, 4):
            P = frame_to_projector(np.eye(d) / np.sqrt(d))
            psi = np.eye(d).reshape(-1) / np.sqrt(d)
            assert np.allclose(P, np.outer(psi, psi), atol=1e-14)
            assert np.allclose(P, maximally_entangled_projector(d))

    def test_projector_properties_and_partial_trace(self, rng):
        for _ in range(50):
            d1, d2 = rng.integers(1, 5, size=2)
            F = random_frame(d2, d1, rng)
            P = frame_to_projector(F)
            assert np.max(np.abs(P @ P - P)) <= 1e-10
            assert abs(np.trace(P) - 1) <= 1e-10
            assert np.max(np.abs(partial_trace(P, (d1, d2), keep=1) - F @ F.conj().T)) <= 1e-12
            psi = frame_to_vector(F)
            assert np.max(np.abs(np.outer(psi, psi.conj()) - P)) <= 1e-12
            assert np.allclose(vector_to_frame(psi, d1, d2), F)

    def test_vector_examples(self):
        e = np.zeros((2, 2)); e[0, 0] = 1
        assert np.allclose(frame_to_vector(e), [1, 0, 0, 0])
        assert np.allclose(frame_to_vector(np.eye(2) / np.sqrt(2)), np.array([1, 0, 0, 1]) / np.sqrt(2))

    def test_vector_norm(self, rng):
        F = random_complex(rng, 3, 2)
        psi = frame_to_vector(F)
        assert abs(np.vdot(psi, psi).real - np.trace(F.conj().T @ F).real) <= 1e-12

    def test_frame_index_convention(self, rng):
        # psi = sum_i e_i (x) F e_i
        F = random_complex(rng, 3, 2)
        psi = sum(np.kron(np.eye(2)[i], F[:, i]) for i in range(2))
        assert np.allclose(frame_to_vector(F), psi)

    def test_unnormalized_rejected(self):
        with pytest.raises(NormalizationError):
            frame_to_projector(np.eye(2))
        with pytest.raises(NormalizationError):
            check_frame(2 * np.eye(2) / np.sqrt(2))

    def test_shape_guard(self):
        with pytest.raises(ShapeError):
            frame_to_projector(np.eye(2) / np.sqrt(2), d1=3)


class TestCompressedProjectorNorm:
    def test_isometric_frame(self, rng):
        from kpos.spectral import random_unitary
        d = 4
        F = random_unitary(d, rng) / np.sqrt(d)
        for k in range(1, d + 1):
            p = random_projector(d, k, rng)
            assert compressed_projector_norm(F, p) == pytest.approx(k / d, abs=1e-12)
            assert ky_fan_overlap(F, k) == pytest.approx(k / d, abs=1e-12)

    def test_identity_projector(self, rng):
        F = random_frame(3, 2, rng)
        assert compressed_projector_norm(F, np.eye(3)) == pytest.approx(1, abs=1e-12)

    def test_chain(self, rng):
        for _ in range(1000):
            d1, d2 = rng.integers(1, 5, size=2)
            k = int(rng.integers(1, min(d1, d2) + 1))
            F = random_frame(d2, d1, rng)
            p = random_projector(d2, k, rng)
            value = compressed_projector_norm(F, p)
            assert abs(value - np.trace(p @ F @ F.conj().T).real) <= 1e-10
            assert value <= ky_fan_overlap(F, k) + 1e-10

    def test_top_k_projector_attains_overlap(self, rng):
        F = random_frame(4, 3, rng)
        for k in (1, 2, 3):
            p = top_k_projector(F, k)
            assert compressed_projector_norm(F, p) == pytest.approx(ky_fan_overlap(F, k), abs=1e-12)

    def test_shape_mismatch(self, rng):
        with pytest.raises(ShapeError):
            compressed_projector_norm(random_frame(3, 3, rng), np.eye(2))


def test_complement_and_swap():
    V = maximally_entangled_frame(2).reshape(-1, 1)
    W = orthonormal_complement(V)
    assert W.shape == (4, 3)
    assert np.allclose(W.conj().T @ W, np.eye(3))
    assert np.allclose(W.conj().T @ V, 0)
    S = swap_operator(2)
    x, y = np.array([1, 2j]), np.array([3, -1])
    assert np.allclose(S @ np.kron(x, y), np.kron(y, x))
