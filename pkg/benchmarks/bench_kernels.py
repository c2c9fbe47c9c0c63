"""Compare the compiled and pure-Python kernels.

Kernel timings call both implementations directly. The end-to-end solution
search runs in a subprocess per backend, since the backend is fixed at import.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from eqfree import _pykernels

try:
    from eqfree import _ckernels
except ImportError:
    _ckernels = None

SEARCH = """
import time
from eqfree import Alphabet, Homomorphism
from eqfree.equaliser import search_solutions
from eqfree.kernels import BACKEND
ab = Alphabet(["a", "b"])
g = Homomorphism.from_strings(ab, ab, {"a": "a b", "b": "b a a"})
h = Homomorphism.from_strings(ab, ab, {"a": "a b a b' a'", "b": "a b a'"})
t = time.perf_counter()
for _ in range(REPEAT):
    search_solutions(g, h, BOUND)
print(BACKEND, (time.perf_counter() - t) / REPEAT)
"""


def kernel_cases(rng: random.Random):
    word = [rng.choice([1, -1, 2, -2]) for _ in range(4000)]
    images = [[1, 2, -1], [2, 2, 1, -2]]
    short = [rng.choice([1, -1, 2, -2]) for _ in range(200)]
    return {
        "reduce_codes (4000 letters)": lambda k: k.reduce_codes(word),
        "apply_codes (200 letters)": lambda k: k.apply_codes(images, short),
        "half_keys (length 7)": lambda k: k.half_keys(images, [[1], [-1, 2, 1]], 2, 7, (), False),
    }


def search_time(pure: bool, bound: int, repeat: int) -> tuple[str, float]:
    env = dict(os.environ)
    env.pop("EQFREE_PURE_PYTHON", None)
    if pure:
        env["EQFREE_PURE_PYTHON"] = "1"
    code = SEARCH.replace("REPEAT", str(repeat)).replace("BOUND", str(bound))
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    name, secs = out.stdout.split()
    return name, float(secs)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--bound", type=int, default=12)
    args = ap.parse_args()

    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    if _ckernels is None:
        print("compiled kernels not built; only the pure-Python timings are shown")

    print(f"{'kernel':32} " + " ".join(f"{name:>12}" for name, _ in backends) + "   speedup")
    for label, fn in kernel_cases(random.Random(0)).items():
        times = [min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)) for _, mod in backends]
        speed = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else ""
        print(f"{label:32} " + " ".join(f"{t * 1e3:10.2f}ms" for t in times) + f"  {speed}")

    runs = [search_time(True, args.bound, args.repeat)]
    if _ckernels:
        runs.append(search_time(False, args.bound, args.repeat))
    label = f"search_solutions (bound {args.bound})"
    speed = f"{runs[0][1] / runs[1][1]:8.1f}x" if len(runs) == 2 else ""
    print(f"{label:32} " + " ".join(f"{t * 1e3:10.2f}ms" for _, t in runs) + f"  {speed}")


if __name__ == "__main__":
    main()
