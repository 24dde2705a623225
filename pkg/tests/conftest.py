import numpy as np
import pytest

ACCEPTANCE_RESULTS: list[tuple[str, bool, float]] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, seconds in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  ({seconds:.2f} s)")


def random_decomposition(rng, d1, d2, n_neg=1, neg_scale=1.0, pos_range=(0.1, 2.0), n_pos=None):
    """Orthonormal frames from a random unitary, split into positive/negative terms."""
    from kpos.maps import MapDecomposition, Term
    from kpos.spectral import random_unitary, vector_to_frame

    D = d1 * d2
    U = random_unitary(D, rng)
    frames = [vector_to_frame(U[:, i], d1, d2) for i in range(D)]
    n_pos = D - n_neg if n_pos is None else n_pos
    neg = [Term(float(neg_scale * rng.uniform(0.1, 2.0)), frames[i]) for i in range(n_neg)]
    pos = [Term(float(rng.uniform(*pos_range)), frames[n_neg + i]) for i in range(n_pos)]
    return MapDecomposition(d1, d2, tuple(pos), tuple(neg))


class _Criterion:
    """Times a block, enforces its runtime limit and records one summary line."""

    def __init__(self, name: str, limit: float):
        self.name, self.limit = name, limit

    def __enter__(self):
        import time

        self._start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        import time

        elapsed = time.perf_counter() - self._start
        ok = exc_type is None and elapsed < self.limit
        ACCEPTANCE_RESULTS.append((self.name, ok, elapsed))
        if exc_type is None and not ok:
            raise AssertionError(f"{self.name}: {elapsed:.2f} s exceeds the {self.limit} s limit")
        return False


@pytest.fixture
def criterion():
    return _Criterion
