import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clonebell import kernels

BACKENDS = [pytest.param(kernels.fallback, id="numpy")]
if kernels.compiled is not None:
    BACKENDS.append(pytest.param(kernels.compiled, id="cython"))


def direct_values(term_masks, weights, nbits):
    """Value of every mask by the plain signed sum."""
    return [sum(-w if bin(m & tm).count("1") % 2 else w for tm, w in zip(term_masks, weights))
            for m in range(1 << nbits)]


def reference_best(values, start, stop):
    best = max(values[start:stop])
    return best, values.index(best, start, stop)


@st.composite
def problems(draw):
    nbits = draw(st.integers(1, 9))
    nterms = draw(st.integers(1, 12))
    masks = draw(st.lists(st.integers(0, (1 << nbits) - 1), min_size=nterms, max_size=nterms))
    weights = draw(st.lists(st.integers(-20, 20), min_size=nterms, max_size=nterms))
    start = draw(st.integers(0, (1 << nbits) - 1))
    stop = draw(st.integers(start + 1, 1 << nbits))
    block = draw(st.integers(0, 10))
    return nbits, masks, weights, start, stop, block


@pytest.mark.parametrize("backend", BACKENDS)
@settings(max_examples=150, deadline=None)
@given(problems())
def test_blocked_transform_matches_direct_sum(backend, problem):
    nbits, masks, weights, start, stop, block = problem
    values = direct_values(masks, weights, nbits)
    got = backend.lhv_max_range(np.array(masks, dtype=np.int64), np.array(weights, dtype=np.int64),
                                start, stop, block)
    assert tuple(got) == reference_best(values, start, stop)


@pytest.mark.parametrize("backend", BACKENDS)
def test_value_mask(backend):
    masks = np.array([0b011, 0b110, 0b000], dtype=np.int64)
    weights = np.array([3, -5, 2], dtype=np.int64)
    for m, expected in enumerate(direct_values(masks.tolist(), weights.tolist(), 3)):
        assert backend.lhv_value_mask(masks, weights, m) == expected


@pytest.mark.parametrize("backend", BACKENDS)
def test_empty_range(backend):
    z = np.zeros(1, dtype=np.int64)
    assert backend.lhv_max_range(z, z + 1, 5, 5) is None


def test_backends_identical_on_blocks():
    if kernels.compiled is None:
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(3)
    masks = rng.integers(0, 1 << 14, 40).astype(np.int64)
    weights = rng.integers(-100, 100, 40).astype(np.int64)
    for block in (2, 5, 9, 16):
        a = kernels.compiled.lhv_max_range(masks, weights, 123, 1 << 14, block)
        b = kernels.fallback.lhv_max_range(masks, weights, 123, 1 << 14, block)
        assert tuple(a) == tuple(b)


def test_backend_selection_flag():
    import subprocess
    import sys

    code = "from clonebell import kernels; print(kernels.BACKEND_NAME)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={**__import__("os").environ, "CLONEBELL_PURE_PYTHON": "1"})
    assert out.stdout.strip() == "numpy"
