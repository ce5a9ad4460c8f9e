"""Compare the numba and numpy prime-field kernels.

Micro benchmarks call both implementations in one process.  The end-to-end
run times a Hochschild computation over F_p in two subprocesses, one with
QUIVERHOM_DISABLE_NUMBA=1.

    python benchmarks/bench_kernels.py [--sizes 50 100 200] [--prime 32003] [--repeat 3]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time
import timeit

import numpy as np

from quiverhom import _kernels


def best_of(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def micro(sizes, p: int, repeat: int) -> None:
    rng = np.random.default_rng(0)
    print(f"{'kernel':<8} {'n':>5} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for n in sizes:
        a = rng.integers(0, p, size=(n, n), dtype=np.int64)
        b = rng.integers(0, p, size=(n, n), dtype=np.int64)
        for name, np_fn, nb_fn in (("rref", lambda: _kernels.rref_mod_numpy(a, p),
                                    lambda: _kernels.rref_mod_numba(a, p)),
                                   ("matmul", lambda: _kernels.matmul_mod_numpy(a, b, p),
                                    lambda: _kernels.matmul_mod_numba(a, b, p))):
            t_np = best_of(np_fn, repeat)
            if _kernels.HAVE_NUMBA:
                nb_fn()  # compile outside the timing
                t_nb = best_of(nb_fn, repeat)
                print(f"{name:<8} {n:>5} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>8.1f}")
            else:
                print(f"{name:<8} {n:>5} {t_np:>10.4f} {'n/a':>10} {'':>8}")


def end_to_end(p: int, algebra: str, degree: int) -> None:
    cmd = [sys.executable, "-m", "quiverhom", "hochschild", algebra, "--field", f"Fp({p})",
           "--max-degree", str(degree), "--machine"]
    outputs = {}
    for label, flag in (("numba", "0"), ("numpy", "1")):
        env = dict(os.environ, QUIVERHOM_DISABLE_NUMBA=flag)
        start = time.perf_counter()
        res = subprocess.run(cmd, capture_output=True, text=True, env=env, check=True)
        outputs[label] = res.stdout
        print(f"end-to-end {label:<6} hochschild {algebra} deg {degree}: {time.perf_counter() - start:.2f} s")
    print("outputs identical:", outputs["numba"] == outputs["numpy"])


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    ap.add_argument("--prime", type=int, default=32003)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--algebra", default="example4")
    ap.add_argument("--degree", type=int, default=4)
    args = ap.parse_args()
    print(f"backend in this process: {_kernels.backend()}")
    micro(args.sizes, args.prime, args.repeat)
    end_to_end(args.prime, args.algebra, args.degree)


if __name__ == "__main__":
    main()
