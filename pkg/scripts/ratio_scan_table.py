"""Exact min/max trace ratios over all words up to length L, for a few unitaries.

    python3 scripts/ratio_scan_table.py --L 8 --workers 4
"""

import argparse
import time
from dataclasses import dataclass, field

from cstar_graph import conjugacy as cj
from cstar_graph import endo as en
from cstar_graph.graph import cuntz_graph
from cstar_graph.parsing import parse_element


@dataclass
class Params:
    L: int = 7
    workers: int = 1
    unitaries: dict[str, str] = field(default_factory=lambda: {
        "w": "S22 S212' + S212 S22' + P211 + P1",
        "flip": "S1 S2' + S2 S1'",
        "shuffle": "S11 S1' + S12 S21' + S2 S22'",
        "core-perm": "S11 S12' + S12 S11' + S2 S2'",
    })


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--L", type=int, default=Params.L)
    ap.add_argument("--workers", type=int, default=Params.workers)
    ns = ap.parse_args()
    params = Params(L=ns.L, workers=ns.workers)

    g = cuntz_graph(2)
    for name, text in params.unitaries.items():
        endo = en.make_endo(parse_element(text, g))
        start = time.perf_counter()
        rep = cj.ratio_scan(endo, params.L, workers=params.workers)
        dt = time.perf_counter() - start
        print(f"== {name}: {text}  ({dt:.2f}s)")
        for k, row in rep.lengths.items():
            print(f"  {k:>2}  min {str(row.min_ratio):>8} at {row.argmin:<{params.L}}  max {str(row.max_ratio):>8} at {row.argmax}")
        lo, hi = rep.observed_bounds
        print(f"  bounds [{lo}, {hi}]")


if __name__ == "__main__":
    main()
