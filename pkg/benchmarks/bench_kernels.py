"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--json out.json]

Each case is first checked for identical output across backends, then timed
with ``timeit``; the table reports the best of ``--repeat`` runs.
"""

import argparse
import json
import random
import sys
import timeit

from deformary import kernels


def howell_case(n, p, l, seed):
    rng = random.Random(seed)
    N = p ** l
    rows = [[rng.randrange(N) for _ in range(n)] for _ in range(n)]
    # mostly divisible by p, so the Howell completion has work to do
    rows = [[x * p if rng.random() < 0.6 else x for x in r] for r in rows]
    return f"howell_form {n}x{n} mod {p}^{l}", lambda m: m.howell_form([r[:] for r in rows], p, l)


def orbit_case(xm, p, l):
    return f"fl_orbit_sizes p={p} l={l}", lambda m: m.fl_orbit_sizes(xm, p, l)


CASES = [
    howell_case(12, 2, 8, 1),
    howell_case(30, 2, 8, 2),
    howell_case(30, 3, 5, 3),
    howell_case(80, 2, 16, 4),
    orbit_case((0, 1, 1, 0), 2, 3),
    orbit_case((0, 1, 1, 0), 3, 2),
    orbit_case((1, 1, 0, 2), 3, 3),
    orbit_case((0, 1, 1, 0), 2, 4),
    orbit_case((2, 1, 1, 3), 5, 2),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", metavar="PATH")
    args = ap.parse_args(argv)
    bk = kernels.backends()
    if "cython" not in bk:
        print("compiled extension not built; only the Python backend is available", file=sys.stderr)
    rows = []
    for name, fn in CASES:
        outs = {b: fn(m) for b, m in bk.items()}
        if len({json.dumps(o) for o in outs.values()}) != 1:
            raise SystemExit(f"backends disagree on {name}")
        times = {b: min(timeit.repeat(lambda m=m: fn(m), number=1, repeat=args.repeat)) for b, m in bk.items()}
        speedup = times["python"] / times["cython"] if "cython" in times else None
        rows.append({"case": name, **{f"{b}_s": round(t, 5) for b, t in times.items()},
                     "speedup": None if speedup is None else round(speedup, 1)})
    w = max(len(r["case"]) for r in rows)
    print(f"{'case':<{w}}  {'python s':>10}  {'cython s':>10}  {'speedup':>8}")
    for r in rows:
        cy = r.get("cython_s")
        print(f"{r['case']:<{w}}  {r['python_s']:>10.5f}  {'-' if cy is None else f'{cy:10.5f}':>10}  "
              f"{'-' if r['speedup'] is None else r['speedup']:>8}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
