"""Compare the compiled and pure-Python LCS kernels.

Run from the repository root after an editable install::

    python benchmarks/bench_lcs.py [--repeat N]
"""

import argparse
import random
import string
import timeit

from rex import lcs
from rex._lcs_py import lcs_pairs as python_lcs_pairs

LENGTHS = (16, 64, 256, 1024)


def _pair(rng, n):
    a = "".join(rng.choice(string.hexdigits) for _ in range(n))
    b = list(a)
    for k in rng.sample(range(n), n // 4):
        b[k] = rng.choice(string.hexdigits)
    return a, "".join(b)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    if lcs.BACKEND != "cython":
        print("compiled extension not available; only the Python kernel will be timed")
    rng = random.Random(0)
    print(f"{'length':>7}  {'python ms':>10}  {'cython ms':>10}  {'speedup':>8}")
    for n in LENGTHS:
        a, b = _pair(rng, n)
        number = max(1, 20000 // (n * n) * 10) if n < 256 else 1
        py = min(timeit.repeat(lambda: python_lcs_pairs(a, b), number=number, repeat=args.repeat)) / number
        if lcs.BACKEND == "cython":
            assert lcs.lcs_pairs(a, b) == python_lcs_pairs(a, b)
            cy = min(timeit.repeat(lambda: lcs.lcs_pairs(a, b), number=number, repeat=args.repeat)) / number
            print(f"{n:>7}  {py * 1e3:>10.3f}  {cy * 1e3:>10.3f}  {py / cy:>7.1f}x")
        else:
            print(f"{n:>7}  {py * 1e3:>10.3f}  {'-':>10}  {'-':>8}")


if __name__ == "__main__":
    main()
