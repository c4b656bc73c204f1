"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each row runs the same call on both backends, checks the outputs agree and
prints the best wall time of ``--repeat`` runs.
"""

import argparse
import timeit

from cftpoly import _pykernels as pure
from cftpoly.inequality import delta
from cftpoly.polycore import sigma_table
from cftpoly.roots import _int_poly, sturm_sequence

try:
    from cftpoly import _ckernels as compiled
except ImportError:
    compiled = None


def cases():
    sig = sigma_table(4200)
    seq = sturm_sequence(_int_poly(delta(30, 10).poly))
    big = list(range(-(10**20), 10**20, 10**18))
    return [
        ("eta_numerators(80)", "eta_numerators", (80, sig)),
        ("int_values(x=2, n=4150)", "int_values", (2, 4150, sig)),
        ("scaled_values(7/3, n=600)", "scaled_values", (7, 3, 600, sig)),
        ("int_convolve(200 x 200)", "int_convolve", (big, big)),
        ("sign_variations(Sturm chain, deg 40)", "sign_variations", (seq, 12345, 4096)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if compiled is None:
        print("compiled extension not built; only the fallback is available")
    print(f"{'kernel':40s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for label, name, call_args in cases():
        py_fn = getattr(pure, name)
        t_py = min(timeit.repeat(lambda: py_fn(*call_args), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{label:40s} {t_py:11.4f} {'-':>11s} {'-':>8s}")
            continue
        c_fn = getattr(compiled, name)
        assert c_fn(*call_args) == py_fn(*call_args), label
        t_c = min(timeit.repeat(lambda: c_fn(*call_args), number=1, repeat=args.repeat))
        print(f"{label:40s} {t_py:11.4f} {t_c:11.4f} {t_py / t_c:7.2f}x")


if __name__ == "__main__":
    main()
