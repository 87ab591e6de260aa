"""Time the chain-enumeration kernel: compiled extension against the pure-Python scan.

    python benchmarks/bench_chain.py [--queries N] [--atoms K] [--seed S]

Both backends must return the same witness for every query; the script exits
non-zero if they disagree.
"""

import argparse
import random
import sys
import time

from gjl import kernels
from gjl.decide import ConsequenceQuery, compile_query
from gjl.generate import random_formula


def make_queries(rng, count, n_atoms):
    out = []
    while len(out) < count:
        goal = random_formula(rng, depth=4, n_atoms=n_atoms, just=False)
        prem = [random_formula(rng, depth=3, n_atoms=n_atoms, just=False) for _ in range(rng.randint(0, 2))]
        q = ConsequenceQuery(tuple(prem), goal)
        atoms = q.atoms()
        if len(atoms) == n_atoms:
            out.append((compile_query(q.premises, q.goal, atoms), n_atoms))
    return out


def run(backend, queries, mode):
    hits = []
    start = time.perf_counter()
    for (ops, a, b, roots, g), n in queries:
        hits.append(kernels.scan(ops, a, b, roots, g, n, n + 1, mode, backend=backend))
    return time.perf_counter() - start, hits


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--queries", type=int, default=300)
    ap.add_argument("--atoms", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    queries = make_queries(random.Random(args.seed), args.queries, args.atoms)
    print(f"{len(queries)} queries, {args.atoms} atoms, {(args.atoms + 2) ** args.atoms} assignments each at most")
    if not kernels.compiled_available():
        print("compiled extension not built; only the Python backend is timed")
    for mode, name in ((1, "one"), (0, "leq")):
        t_py, h_py = run("python", queries, mode)
        line = f"mode {name}: python {t_py:.3f}s"
        if kernels.compiled_available():
            t_c, h_c = run("cython", queries, mode)
            if h_c != h_py:
                print("backends disagree", file=sys.stderr)
                sys.exit(1)
            line += f", cython {t_c:.3f}s, speedup {t_py / t_c:.1f}x"
        print(line)


if __name__ == "__main__":
    main()
