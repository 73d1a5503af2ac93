"""Compare the compiled and pure-Python elimination kernels.

    python3 benchmarks/bench_kernel.py [--repeat 3] [--seed 0]

Both kernels run on identical inputs; their outputs are checked equal before
any timing is reported.
"""
import argparse
import random
import sys
import timeit

from graphnil.linalg import _pykernel

try:
    from graphnil.linalg import _ckernel
except ImportError:
    _ckernel = None


def random_sparse(rng, nrows, ncols, density, lo=-6, hi=6):
    rows = []
    for _ in range(nrows):
        row = {}
        for c in range(ncols):
            if rng.random() < density:
                v = rng.randint(lo, hi)
                if v:
                    row[c] = v
        rows.append(row)
    return rows


def derivation_system(k):
    """The Leibniz equations of the complete-graph algebra on k vertices."""
    from graphnil.graph import complete_graph
    from graphnil.nilpotent import build_algebra
    from graphnil.derivations import leibniz_rows

    return leibniz_rows(build_algebra(complete_graph(k)))


def cases(seed):
    rng = random.Random(seed)
    out = [
        ("dense 30x30", random_sparse(rng, 30, 30, 0.9), 30),
        ("sparse 120x100", random_sparse(rng, 120, 100, 0.06), 100),
        ("sparse 300x250", random_sparse(rng, 300, 250, 0.02), 250),
    ]
    try:
        for k in (4, 5):
            rows, ncols = derivation_system(k)
            out.append((f"Leibniz system K{k}", rows, ncols))
    except ImportError:
        pass
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _ckernel is None:
        print("compiled kernel not built; run: pip install -e . --no-build-isolation")
        return 1
    print(f"{'case':<22}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for name, rows, ncols in cases(args.seed):
        ref = _pykernel.rref_int([dict(r) for r in rows], ncols)
        got = _ckernel.rref_int([dict(r) for r in rows], ncols)
        if ref != got:
            print(f"{name}: kernels disagree")
            return 2
        tp = min(timeit.repeat(lambda: _pykernel.rref_int([dict(r) for r in rows], ncols), number=1, repeat=args.repeat))
        tc = min(timeit.repeat(lambda: _ckernel.rref_int([dict(r) for r in rows], ncols), number=1, repeat=args.repeat))
        print(f"{name:<22}{tp:>10.4f}{tc:>10.4f}{tp / tc:>8.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
