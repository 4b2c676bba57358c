"""Images of the projections P_{2^k} under lambda_w and their trace ratios.

    python3 scripts/diagonal_family.py --K 12
"""

import argparse
import time
from dataclasses import dataclass

from cstar_graph import algebra as alg
from cstar_graph import conjugacy as cj
from cstar_graph import endo as en
from cstar_graph.formatting import format_element
from cstar_graph.graph import cuntz_graph
from cstar_graph.parsing import parse_element


@dataclass
class Params:
    u: str = "S22 S212' + S212 S22' + P211 + P1"
    K: int = 12
    period: str = "2"


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--K", type=int, default=Params.K)
    ap.add_argument("--u", default=Params.u)
    ap.add_argument("--period", default=Params.period)
    ns = ap.parse_args()
    params = Params(u=ns.u, K=ns.K, period=ns.period)

    g = cuntz_graph(2)
    endo = en.make_endo(parse_element(params.u, g))
    start = time.perf_counter()
    print(f"{'k':>3}  {'ratio':>8}  image")
    for k in range(1, params.K + 1):
        word = params.period * k
        img = alg.reduce(endo.apply(alg.p(g, g.word(word))))
        print(f"{k:>3}  {str(cj.trace_ratio(endo, word)):>8}  {format_element(img)}")
    fam = cj.family_ratio(endo, "", params.period, params.K)
    law = fam.detected_law
    print(f"law: {None if law is None else f'c={law[0]}, q={law[1]}'}  direction: {fam.direction.value}")
    print(f"elapsed: {time.perf_counter() - start:.3f}s")


if __name__ == "__main__":
    main()
