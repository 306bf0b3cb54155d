"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Prints median wall time per call and the speedup. Results from both
backends are checked for agreement before timing.
"""

import argparse
import statistics
import time

import numpy as np

from qcorr import _backend
from qcorr.linalg import JACOBI_MAX_SWEEPS, JACOBI_TOL


def _median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def _hermitian(rng, n):
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (x + x.conj().T) / 2


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--shots", type=int, default=1_000_000)
    args = ap.parse_args(argv)

    impls = _backend.IMPLEMENTATIONS
    if "compiled" not in impls:
        print("compiled extension not built; timing the fallback only")
    rng = np.random.default_rng(0)
    mats = {n: _hermitian(rng, n) for n in (4, 8, 16)}
    cdf = np.cumsum(rng.dirichlet(np.ones(16)))

    cases = {f"jacobi n={n}": (lambda k, m=m: k.jacobi_hermitian(m, JACOBI_TOL, JACOBI_MAX_SWEEPS)) for n, m in mats.items()}
    cases[f"sample {args.shots:.0e} shots"] = lambda k: k.sample_categories(cdf, 7, 0, 0, args.shots)

    if "compiled" in impls:
        a = impls["compiled"].sample_categories(cdf, 7, 0, 0, args.shots)
        b = impls["python"].sample_categories(cdf, 7, 0, 0, args.shots)
        assert np.array_equal(a, b), "sampling backends disagree"
        for m in mats.values():
            va = np.sort(impls["compiled"].jacobi_hermitian(m, JACOBI_TOL, JACOBI_MAX_SWEEPS)[0])
            vb = np.sort(impls["python"].jacobi_hermitian(m, JACOBI_TOL, JACOBI_MAX_SWEEPS)[0])
            assert np.allclose(va, vb, atol=1e-12), "eigenvalue backends disagree"

    names = sorted(impls)
    print(f"{'kernel':<24}" + "".join(f"{n:>14}" for n in names) + ("   speedup" if len(names) == 2 else ""))
    for label, fn in cases.items():
        t = {n: _median_time(lambda: fn(impls[n]), args.repeat) for n in names}
        row = f"{label:<24}" + "".join(f"{t[n] * 1e3:>11.3f} ms" for n in names)
        if len(names) == 2:
            row += f"   {t['python'] / t['compiled']:7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
