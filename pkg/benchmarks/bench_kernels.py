"""Compare the compiled and pure-Python numeric kernels.

    python3 benchmarks/bench_kernels.py [--repeat N] [--json PATH]

Times three workloads per backend and checks the backends agree bitwise.
"""

import argparse
import json
import math
import statistics
import time

from weylflow import kernels

SIXTH = [1 / 6] * 5
AUTO_Y0 = [0.5, 1.0, 0.5, 0.5, 1.0, 0.5, 0.5]
PIII_Y0 = [0.3, 0.6, -0.4, 0.2]


def grid(a, b, n=257):
    return [a + (b - a) * k / (n - 1) for k in range(n)]


def workloads(mod):
    return {
        "field_autonomous x1e4": lambda: [mod.field_autonomous(AUTO_Y0, SIXTH)
                                          for _ in range(10_000)],
        "dopri54 autonomous t in [0,1]": lambda: mod.dopri54(
            kernels.AUTONOMOUS, SIXTH, AUTO_Y0, grid(0.0, 1.0), 1e-10, 1e-12, math.inf, 1e8,
            10 ** 6, False),
        "dopri54 piii T in [1,10], 2 samples": lambda: mod.dopri54(
            kernels.PIII, SIXTH, PIII_Y0, [1.0, 10.0], 1e-12, 1e-14, math.inf, 1e8,
            10 ** 6, False),
    }


def plain(x):
    """Nested lists of floats, whatever sequence types a backend returns."""
    if isinstance(x, (int, float)):
        return x
    return [plain(v) for v in x]


def bench(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return statistics.median(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", metavar="PATH")
    args = ap.parse_args()
    mods = kernels.backends()
    if "compiled" not in mods:
        print("compiled kernels are not built; timing the Python fallback only")
    rows = []
    for name in workloads(mods["python"]):
        entry = {"workload": name}
        outs = {}
        for bname, mod in mods.items():
            entry[bname], outs[bname] = bench(workloads(mod)[name], args.repeat)
        if len(outs) == 2:
            a, b = outs["python"], outs["compiled"]
            entry["identical"] = plain(a) == plain(b)
            entry["speedup"] = entry["python"] / entry["compiled"]
        rows.append(entry)
    for r in rows:
        line = f"{r['workload']:38s} python {r['python'] * 1e3:9.2f} ms"
        if "compiled" in r:
            line += (f"   compiled {r['compiled'] * 1e3:8.3f} ms   x{r['speedup']:6.1f}"
                     f"   identical={r['identical']}")
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
