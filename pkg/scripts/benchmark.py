"""Time the Fourier transform on the bundled examples and on random classes.

Usage: python3 scripts/benchmark.py [--classes N] [--seed S]
"""

import argparse
import random
import statistics
import time

from stokes_fourier.examples import EXAMPLES
from stokes_fourier.fourier import fourier_transform
from stokes_fourier.representation import new_template
from stokes_fourier.sampling import random_class, random_generic_direction, random_valid_rep


def timed(fn) -> float:
    start = time.perf_counter()
    fn()
    return time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--classes", type=int, default=30)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    for name, build in EXAMPLES.items():
        ex = build()
        print(f"{name:<14} {timed(lambda: fourier_transform(ex.source, ex.target_base)) * 1e3:8.1f} ms")

    rng = random.Random(args.seed)
    numeric, symbolic = [], []
    for _ in range(args.classes):
        theta = random_class(rng)
        base = random_generic_direction(theta, rng)
        rep = random_valid_rep(theta, base, rng)
        numeric.append(timed(lambda: fourier_transform(rep)))
        tmpl = new_template(theta, base, rep.strands)
        symbolic.append(timed(lambda: fourier_transform(tmpl)))
    for label, xs in (("numeric", numeric), ("symbolic", symbolic)):
        print(f"{label:<14} mean {statistics.mean(xs) * 1e3:8.1f} ms  max {max(xs) * 1e3:8.1f} ms"
              f"  over {len(xs)} random classes")


if __name__ == "__main__":
    main()
