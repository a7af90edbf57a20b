"""Compare the numba and numpy paths of the integer kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Prints best-of-N wall time per kernel and backend, and checks that both
backends agree on every output.
"""

import argparse
import timeit

import numpy as np

from hflab import _kernels as K

CASES = {
    "sweedler (dim 4)": ([2], [2], [[1]], 2),
    "theta=2, N=4 (dim 256)": ([4, 4], [4, 4], [[1, 1], [3, 1]], 4),
    "theta=3, N=3 (dim 729)": ([3, 3, 3], [3, 3, 3], [[1, 1, 2], [2, 1, 1], [1, 2, 1]], 3),
}


def bench(fn, repeat):
    fn()  # warm-up (includes JIT compilation for numba)
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        print("numba unavailable; only the numpy path can run")
    backends = ["numpy"] + (["numba"] if K.HAVE_NUMBA else [])

    print(f"{'kernel':<34} " + " ".join(f"{b:>10}" for b in backends))
    for name, (xb, gb, E, N) in CASES.items():
        outs, times = {}, []
        for b in backends:
            outs[b] = K.monomial_product_table(xb, gb, E, N, backend=b)
            times.append(bench(lambda: K.monomial_product_table(xb, gb, E, N, backend=b), args.repeat))
        if len(outs) == 2:
            assert all(np.array_equal(u, v) for u, v in zip(outs["numpy"], outs["numba"])), name
        print(f"{'table ' + name:<34} " + " ".join(f"{t * 1e3:>8.2f}ms" for t in times))

    rng = np.random.default_rng(0)
    p = 1_000_003
    for n in (64, 200, 400):
        M = rng.integers(0, p, size=(n, n), dtype=np.int64)
        M[n // 2] = (M[0] + 3 * M[1]) % p  # force a rank drop
        ranks, times = [], []
        for b in backends:
            ranks.append(K.rank_mod_p(M, p, backend=b))
            times.append(bench(lambda: K.rank_mod_p(M, p, backend=b), args.repeat))
        assert len(set(ranks)) == 1 and ranks[0] == n - 1, ranks
        print(f"{f'rank mod p {n}x{n}':<34} " + " ".join(f"{t * 1e3:>8.2f}ms" for t in times))


if __name__ == "__main__":
    main()
