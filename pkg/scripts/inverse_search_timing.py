"""Time the bounded inverse search on random permutative unitaries.

    python3 scripts/inverse_search_timing.py --samples 20 --depth 2 --K 2  (K = 3 costs ~25 s per miss)
"""

import argparse
import random
import time
from dataclasses import dataclass

from cstar_graph import algebra as alg
from cstar_graph import endo as en
from cstar_graph.algebra import Element
from cstar_graph.formatting import format_element
from cstar_graph.graph import cuntz_graph


@dataclass
class Params:
    samples: int = 20
    depth: int = 2
    K: int = 2
    seed: int = 0
    budget: int = 200_000


def random_prefix_code(rng, depth):
    def grow(prefix):
        if len(prefix) < depth and (not prefix or rng.random() < 0.55):
            return grow(prefix + "1") + grow(prefix + "2")
        return [prefix]

    return grow("")


def random_word_unitary(rng, g, depth):
    while True:
        left, right = random_prefix_code(rng, depth), random_prefix_code(rng, depth)
        if len(left) == len(right):
            break
    rng.shuffle(left)
    u = Element.zero(g)
    for a, b in zip(left, right):
        u = u + Element.monomial(g, g.word(a), g.word(b))
    return u


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for name, default in vars(Params()).items():
        ap.add_argument(f"--{name}", type=int, default=default)
    params = Params(**vars(ap.parse_args()))

    g = cuntz_graph(2)
    rng = random.Random(params.seed)
    found = 0
    for i in range(params.samples):
        u = random_word_unitary(rng, g, params.depth)
        endo = en.make_endo(u)
        start = time.perf_counter()
        inv = en.inverse_search(endo, params.K, budget=params.budget)
        dt = time.perf_counter() - start
        found += inv is not None
        shown = "-" if inv is None else format_element(alg.reduce(inv.u))
        print(f"{i:>3}  {dt:7.3f}s  u = {format_element(alg.reduce(u))}\n       inverse: {shown}")
    print(f"found {found}/{params.samples} inverses with word length <= {params.K}")


if __name__ == "__main__":
    main()
