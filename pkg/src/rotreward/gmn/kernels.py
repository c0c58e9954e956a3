"""Hot scatter/gather kernels for message passing.

JIT-compiled with numba by default; set ROTREWARD_NO_NUMBA=1 to force the
pure-numpy fallback. Both paths accumulate in index order, so results are
bit-identical. `rotreward bench --kernels` compares them.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("ROTREWARD_NO_NUMBA", "").strip() not in ("", "0", "false")

try:
    if _DISABLED:
        raise ImportError("numba disabled by ROTREWARD_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag
    njit = None
    HAVE_NUMBA = False


def segment_sum_numpy(values: np.ndarray, segment_ids: np.ndarray, num_segments: int) -> np.ndarray:
    out = np.zeros((num_segments, values.shape[1]), dtype=values.dtype)
    np.add.at(out, segment_ids, values)
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _segment_sum_jit(values, segment_ids, out):  # pragma: no cover - compiled
        for i in range(values.shape[0]):
            row = segment_ids[i]
            for j in range(values.shape[1]):
                out[row, j] += values[i, j]
        return out

    def segment_sum_numba(values: np.ndarray, segment_ids: np.ndarray, num_segments: int) -> np.ndarray:
        out = np.zeros((num_segments, values.shape[1]), dtype=values.dtype)
        if values.shape[0]:
            _segment_sum_jit(np.ascontiguousarray(values), segment_ids, out)
        return out

    segment_sum = segment_sum_numba
else:
    segment_sum_numba = None
    segment_sum = segment_sum_numpy

USING_NUMBA = HAVE_NUMBA


def bench_kernels(rows: int = 20000, width: int = 64, segments: int = 500, repeats: int = 20) -> dict:
    """Time both kernel paths on the same inputs."""
    import time

    rng = np.random.default_rng(0)
    values = rng.standard_normal((rows, width))
    ids = rng.integers(0, segments, size=rows).astype(np.int64)

    def timeit(fn):
        fn(values, ids, segments)  # warm-up (JIT compile / cache touch)
        start = time.perf_counter()
        for _ in range(repeats):
            fn(values, ids, segments)
        return (time.perf_counter() - start) / repeats

    report = {
        "rows": rows,
        "width": width,
        "repeats": repeats,
        "numpy_seconds": timeit(segment_sum_numpy),
    }
    if HAVE_NUMBA:
        report["numba_seconds"] = timeit(segment_sum_numba)
        report["speedup"] = report["numpy_seconds"] / report["numba_seconds"]
    else:
        report["numba_seconds"] = None
        report["speedup"] = None
    return report
