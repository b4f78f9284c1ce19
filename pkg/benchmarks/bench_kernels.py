"""Compare the compiled and numpy sum-rate kernels on a 16^4 parameter grid.

    python3 benchmarks/bench_kernels.py [--grid 16] [--repeat 5] [--snr 10]
"""
import argparse
import time

import numpy as np

from bcfeedback import kernels
from bcfeedback.awgn import AwgnChannelSpec
from bcfeedback.optimizer import grid_points


def _time(fn, repeat):
    best = np.inf
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=16)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--snr", type=float, default=10.0)
    ap.add_argument("--scalar-calls", type=int, default=20000)
    args = ap.parse_args(argv)

    ch = AwgnChannelSpec.from_snr(args.snr)
    X = grid_points(ch, args.grid)
    cols = [np.ascontiguousarray(X[:, i]) for i in range(4)]
    head = (ch.P, ch.sigma2, ch.sigmaf2, ch.rho)
    backends = [("python", kernels.python_backend)]
    if kernels.compiled_backend is not None:
        backends.append(("cython", kernels.compiled_backend))
    else:
        print("compiled kernel not built; timing the numpy backend only")

    ref = None
    print(f"grid {args.grid}^4 = {len(X)} points, SNR {args.snr}, active backend: {kernels.BACKEND}")
    for name, mod in backends:
        t_batch, out = _time(lambda: mod.sum_rate_batch(*head, *cols), args.repeat)
        n = min(args.scalar_calls, len(X))
        t_scalar, _ = _time(lambda: [mod.sum_rate(*head, *map(float, X[i])) for i in range(n)], 1)
        out = np.asarray(out)
        if ref is None:
            ref = out
        fin = np.isfinite(ref) & np.isfinite(out)
        err = float(np.max(np.abs(out[fin] - ref[fin]))) if fin.any() else 0.0
        print(f"{name:7s} batch {t_batch * 1e3:9.2f} ms ({len(X) / t_batch / 1e6:6.2f} Mpts/s)"
              f"  scalar {t_scalar / n * 1e6:7.2f} us/call  max|diff vs python| {err:.2e}")


if __name__ == "__main__":
    main()
