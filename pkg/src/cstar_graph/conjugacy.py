"""Hypothesis checks and verdicts for the two conjugacy criteria.

* quasi-free MASA criterion: for ``u`` a unitary in ``B`` with
  ``u D^1 u^* != D^1``, the diagonal and its image under ``lambda_u`` are not
  inner conjugate.  Only the level-one hypothesis is decided here.
* trace-ratio criterion on O_n: a family of diagonal projections whose trace
  ratios ``tau(lambda_u(P)) / tau(P)`` go to 0 or infinity rules out inner
  conjugacy of the core and its image.  A finite computation can only show an
  exact geometric law on the computed range; that is reported as evidence,
  never as a proof of the limit.
"""

from __future__ import annotations

import enum
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import algebra as alg
from .algebra import Element
from .config import DEFAULT_CONFIG, EngineConfig
from .endo import Endomorphism, make_endo
from .graph import Graph, Path, concat

log = logging.getLogger(__name__)


class Verdict(str, enum.Enum):
    INVARIANT = "INVARIANT"
    NOT_INNER_CONJUGATE = "NOT_INNER_CONJUGATE"
    INAPPLICABLE = "INAPPLICABLE"


class Direction(str, enum.Enum):
    TO_ZERO = "TO_ZERO"
    TO_INFINITY = "TO_INFINITY"
    NONE = "NONE"


class HypothesisError(ValueError):
    """A precondition of a criterion does not hold for the given input."""


# quasi-free MASA criterion


@dataclass
class MasaVerdict:
    u_in_B: bool
    unitary: bool
    diagonal_level1_preserved: bool
    moved_generators: list[tuple[str, Element]]
    verdict: Verdict

    def to_dict(self) -> dict:
        return {
            "u_in_B": self.u_in_B,
            "unitary": self.unitary,
            "diagonal_level1_preserved": self.diagonal_level1_preserved,
            "moved_generators": [[e, str(x)] for e, x in self.moved_generators],
            "verdict": self.verdict.value,
        }


def masa_check(u: Element, depth: int | None = None, config: EngineConfig = DEFAULT_CONFIG) -> MasaVerdict:
    """Decide whether ``u D^1 u^*`` leaves the level-one diagonal.

    ``moved_generators`` lists every edge ``e`` whose ``u P_e u^*`` is not in
    ``D^1``; for unitary ``u`` an empty list means ``u D^1 u^* = D^1``.  An
    INVARIANT verdict is backed by checking ``lambda_u(P_mu)`` is diagonal at
    level ``|mu|`` for ``|mu| <= depth``.
    """
    g = u.graph
    unitary = alg.is_unitary(u)
    in_b = alg.membership(u, "B")
    us = u.adjoint()
    moved = []
    for e in g.edges:
        img = u * alg.p(g, g.path((e,))) * us
        if not alg.membership(img, "Dk", 1):
            moved.append((e, alg.reduce(img)))
    preserved = unitary and not moved
    if not (in_b and unitary):
        verdict = Verdict.INAPPLICABLE
    elif preserved:
        verdict = Verdict.INVARIANT
        _assert_diagonal_invariance(make_endo(u, config), config.masa_depth if depth is None else depth)
    else:
        verdict = Verdict.NOT_INNER_CONJUGATE
    return MasaVerdict(in_b, unitary, preserved, moved, verdict)


def _assert_diagonal_invariance(endo: Endomorphism, depth: int) -> None:
    g = endo.graph
    for k in range(1, depth + 1):
        for mu in g.enumerate_paths(k):
            img = endo.apply(alg.p(g, mu))
            if not alg.membership(img, "Dk", k):
                raise AssertionError(f"lambda_u(P_{mu.word()}) left D^{k} although D^1 is preserved")


def masa_pairwise(u: Element, v: Element, depth: int | None = None, config: EngineConfig = DEFAULT_CONFIG) -> MasaVerdict:
    """Compare ``lambda_u(D)`` and ``lambda_v(D)`` through ``masa_check(v^* u)``."""
    for x in (u, v):
        if not (alg.is_unitary(x) and alg.membership(x, "B")):
            return MasaVerdict(
                alg.membership(u, "B") and alg.membership(v, "B"),
                alg.is_unitary(u) and alg.is_unitary(v),
                False,
                [],
                Verdict.INAPPLICABLE,
            )
    return masa_check(v.adjoint() * u, depth=depth, config=config)


# trace-ratio criterion (O_n)


def _word(g: Graph, mu) -> Path:
    if isinstance(mu, Path):
        return mu
    if isinstance(mu, str):
        return g.word(mu)
    return g.path(mu) if mu else g.vertex_path(g.vertices[0])


def trace_ratio(endo: Endomorphism, mu) -> Fraction:
    """``tau(lambda_u(P_mu)) / tau(P_mu)``, with ``tau`` read through the core expectation."""
    g = endo.graph
    n = alg.cuntz_rank(g)
    mu = _word(g, mu)
    img = endo.apply(alg.p(g, mu))
    t = alg.trace(alg.expect_core(img))
    if not t.is_real:
        raise AssertionError("trace of a projection is real")
    return t.real * n ** len(mu.edges)


@dataclass
class RatioRow:
    min_ratio: Fraction
    max_ratio: Fraction
    argmin: str
    argmax: str


@dataclass
class RatioScanReport:
    lengths: dict[int, RatioRow]
    observed_bounds: tuple[Fraction, Fraction]

    def to_dict(self) -> dict:
        return {
            "lengths": {
                str(k): {
                    "min_ratio": str(r.min_ratio),
                    "max_ratio": str(r.max_ratio),
                    "argmin": r.argmin,
                    "argmax": r.argmax,
                }
                for k, r in self.lengths.items()
            },
            "observed_bounds": [str(self.observed_bounds[0]), str(self.observed_bounds[1])],
        }


def _ratios(endo: Endomorphism, words: Sequence[Path]) -> list[Fraction]:
    return [trace_ratio(endo, w) for w in words]


def _word_label(g: Graph, p: Path) -> str:
    return p.word() if g.uses_digit_words else ".".join(p.edges)


def ratio_scan(endo: Endomorphism, L: int, workers: int | None = None) -> RatioScanReport:
    """Exact min/max trace ratio over all words of each length ``1..L``.

    Ties go to the lexicographically smallest word.  With ``workers > 1`` the
    words are evaluated in a process pool; chunks are reassembled in word order
    so the report does not depend on scheduling.
    """
    g = endo.graph
    alg.cuntz_rank(g)
    if L < 1:
        raise ValueError("L must be >= 1")
    workers = endo.config.workers if workers is None else workers
    rows: dict[int, RatioRow] = {}
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for k in range(1, L + 1):
            words = g.enumerate_paths(k)
            if pool is None:
                ratios = _ratios(endo, words)
            else:
                size = max(1, len(words) // (4 * workers))
                chunks = [words[i : i + size] for i in range(0, len(words), size)]
                ratios = list(itertools.chain.from_iterable(pool.map(_ratios, [endo] * len(chunks), chunks)))
            lo = hi = 0
            for i, r in enumerate(ratios):
                if r < ratios[lo]:
                    lo = i
                if r > ratios[hi]:
                    hi = i
            rows[k] = RatioRow(ratios[lo], ratios[hi], _word_label(g, words[lo]), _word_label(g, words[hi]))
    finally:
        if pool is not None:
            pool.shutdown()
    bounds = (min(r.min_ratio for r in rows.values()), max(r.max_ratio for r in rows.values()))
    return RatioScanReport(rows, bounds)


@dataclass
class WitnessFamily:
    seed: str
    period: str
    ratios: list[Fraction]
    detected_law: tuple[Fraction, Fraction] | None
    direction: Direction

    @property
    def assessment(self) -> str:
        # an exact law on k <= K is evidence for the limit, not a proof
        return "EVIDENCE" if self.direction is not Direction.NONE else "INCONCLUSIVE"

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "period": self.period,
            "ratios": [str(r) for r in self.ratios],
            "detected_law": None if self.detected_law is None else [str(self.detected_law[0]), str(self.detected_law[1])],
            "direction": self.direction.value,
            "assessment": self.assessment,
        }


def family_ratio(endo: Endomorphism, seed, period, K: int) -> WitnessFamily:
    """Ratios ``r_k`` for the projections ``P_{a b^k}``, ``k = 1..K``, and an exact law ``r_k = c q^(k-1)`` if one fits."""
    g = endo.graph
    alg.cuntz_rank(g)
    a, b = _word(g, seed), _word(g, period)
    if not b.edges:
        raise ValueError("period word must be non-empty")
    if K < 1:
        raise ValueError("K must be >= 1")
    ratios = []
    word = a
    for _ in range(K):
        word = concat(word, b)
        ratios.append(trace_ratio(endo, word))
    law = None
    direction = Direction.NONE
    if K >= 2 and ratios[0] != 0:
        c = ratios[0]
        q = ratios[1] / ratios[0]
        if all(r == c * q ** i for i, r in enumerate(ratios)):
            law = (c, q)
            if q < 1:
                direction = Direction.TO_ZERO
            elif q > 1:
                direction = Direction.TO_INFINITY
    return WitnessFamily(_word_label(g, a), _word_label(g, b), ratios, law, direction)


# finite Fourier structure of unitaries mapping D into F


def diagonal_into_core_failure(u: Element, extra_depth: int = 0) -> Path | None:
    """First word ``mu`` (|mu| <= longest word in u + 1 + extra) with ``u P_mu u^*`` outside the core."""
    g = u.graph
    alg.cuntz_rank(g)
    depth = u.max_word_length() + 1 + extra_depth
    us = u.adjoint()
    for k in range(depth + 1):
        for mu in g.enumerate_paths(k):
            if not alg.membership(u * alg.p(g, mu) * us, "F"):
                return mu
    return None


def check_D_into_F(u: Element, extra_depth: int = 0) -> bool:
    """``u P_mu u^*`` in the core for all words up to one past the longest word in ``u``.

    Beyond that depth the degree pattern of the cross terms no longer depends
    on the tail of ``mu``, so the bounded check decides the inclusion.
    """
    return diagonal_into_core_failure(u, extra_depth) is None


def dk_family(u: Element, extra_depth: int = 0) -> list[tuple[int, Element]]:
    """Projections ``d_k = u^* Phi^k(u)`` with ``Phi^k(u) = u d_k``, ordered by k.

    Every identity (projection, diagonal, pairwise orthogonal, summing to 1,
    factorisation of the Fourier components) is checked exactly.
    """
    if not alg.is_unitary(u):
        raise HypothesisError("u is not unitary")
    bad = diagonal_into_core_failure(u, extra_depth)
    if bad is not None:
        raise HypothesisError(f"u P_mu u^* leaves the core for mu = {_word_label(u.graph, bad) or 'vertex'}")
    g = u.graph
    us = u.adjoint()
    out = []
    for k, comp in alg.fourier_components(u).items():
        d = alg.reduce(us * comp)
        if not alg.is_projection(d):
            raise AssertionError(f"d_{k} is not a projection")
        if not alg.membership(d, "D"):
            raise AssertionError(f"d_{k} is not diagonal")
        if not alg.equals(comp, u * d):
            raise AssertionError(f"Phi^{k}(u) != u d_{k}")
        out.append((k, d))
    for (k1, d1), (k2, d2) in itertools.combinations(out, 2):
        if not alg.is_zero(d1 * d2):
            raise AssertionError(f"d_{k1} and d_{k2} are not orthogonal")
    total = Element.zero(g)
    for _, d in out:
        total = total + d
    if not alg.equals(total, Element.unit(g)):
        raise AssertionError("the d_k do not sum to 1")
    return out
