"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_CHUNK = 1 << 20


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def jacobi_hermitian(matrix: np.ndarray, tol: float, max_sweeps: int):
    a = np.array(matrix, dtype=np.complex128)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.sqrt(np.sum(np.abs(a) ** 2))))
    sweep = 0
    while sweep < max_sweeps:
        off = np.sqrt(2.0 * np.sum(np.abs(np.triu(a, 1)) ** 2))
        if off <= tol * scale:
            break
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                r = abs(a[p, q])
                if r == 0.0:
                    continue
                phase = a[p, q] / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + np.sqrt(1.0 + theta * theta))
                else:
                    t = -1.0 / (-theta + np.sqrt(1.0 + theta * theta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                sp = t * c * phase
                colp = a[:, p].copy()
                colq = a[:, q]
                a[:, p] = c * colp - np.conj(sp) * colq
                a[:, q] = sp * colp + c * colq
                rowp = a[p, :].copy()
                rowq = a[q, :]
                a[p, :] = c * rowp - sp * rowq
                a[q, :] = np.conj(sp) * rowp + c * rowq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - np.conj(sp) * vq
                v[:, q] = sp * vp + c * vq
    return np.diag(a).real.copy(), v, sweep


def sample_categories(cdf: np.ndarray, seed: int, stream: int, start: int, count: int) -> np.ndarray:
    cdf = np.ascontiguousarray(cdf, dtype=np.float64)
    m = cdf.shape[0]
    last = m - 1
    while last > 0 and cdf[last] == cdf[last - 1]:
        last -= 1
    with np.errstate(over="ignore"):
        key = _mix64(_mix64(np.array([seed], dtype=np.uint64)) ^ np.uint64(stream))
        out = np.zeros(m, dtype=np.int64)
        for lo in range(start, start + count, _CHUNK):
            hi = min(lo + _CHUNK, start + count)
            idx = np.arange(lo, hi, dtype=np.uint64)
            bits = _mix64(key + idx)
            u = (bits >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)
            cat = np.searchsorted(cdf, u, side="right")
            np.minimum(cat, last, out=cat)
            out += np.bincount(cat, minlength=m)
    return out
