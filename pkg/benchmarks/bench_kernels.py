"""Compare the Cython kernels with the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.  Each kernel is
timed on the same instances under both backends and the models are checked
to be identical.
"""

import argparse
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from helpers import random_cnf  # noqa: E402
from teamlog import kernels  # noqa: E402
from teamlog.compiler import apply_init, compile_formula  # noqa: E402
from teamlog.formula import parse_formula  # noqa: E402
from teamlog.model import Team, make_structure  # noqa: E402
from teamlog.sat import Cnf  # noqa: E402


def _random_3sat(rng, n, ratio=4.26):
    return Cnf(n, [tuple(v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3))
                   for _ in range(int(ratio * n))])


def _cycle_cnf(n, seed=0):
    rng = random.Random(seed)
    edges = [[str(a), str(b)] for a in range(n) for b in range(n) if rng.random() < 2 / n]
    G = make_structure(range(n), {"E": edges})
    f = parse_formula("exists x exists y (incl(y ; x) /\\ E(x,y))")
    return apply_init(compile_formula(G, f), Team((), ((),))).cnf()


def workloads(rng):
    return {
        "dual_horn": [random_cnf(rng, "dualhorn", n=2000, m=6000) for _ in range(20)]
                     + [_cycle_cnf(60, s) for s in range(5)],
        "two_sat": [random_cnf(rng, "2sat", n=2000, m=3000) for _ in range(20)],
        "dpll": [_random_3sat(rng, 60) for _ in range(20)],
    }


def _time(fn, flats, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = [fn(n, lits, starts) for n, lits, starts in flats]
        best = min(best, time.perf_counter() - start)
    return best, [None if o is None else bytes(o) for o in out]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    mods = kernels.backends()
    if "cython" not in mods:
        print("compiled kernels are not built; only the Python fallback is available")
    rng = random.Random(args.seed)
    print(f"{'kernel':<10} {'instances':>9} " + " ".join(f"{name + ' s':>10}" for name in mods) + "   speedup")
    for kernel, cnfs in workloads(rng).items():
        flats = [(c.num_vars, *c.flat()) for c in cnfs]
        times, models = {}, {}
        for name, mod in mods.items():
            times[name], models[name] = _time(getattr(mod, kernel), flats, args.repeat)
        # dual_horn and two_sat are deterministic; the DPLL kernels only need to agree on SAT/UNSAT
        if kernel == "dpll":
            assert len({tuple(m is None for m in v) for v in models.values()}) == 1
        else:
            assert len({tuple(v) for v in models.values()}) == 1
        speed = f"{times['python'] / times['cython']:8.1f}x" if "cython" in times else "       -"
        print(f"{kernel:<10} {len(cnfs):>9} " + " ".join(f"{times[n]:>10.4f}" for n in mods) + "  " + speed)


if __name__ == "__main__":
    main()
