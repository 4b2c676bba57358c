"""Endomorphisms ``lambda_u`` determined by unitaries commuting with the vertex projections.

Convention throughout: ``lambda_u(S_e) = u S_e`` and ``lambda_u(P_v) = P_v``.
Some of the literature uses ``u^* S_e`` instead; the composition law below is
the one for this convention::

    lambda_a . lambda_b = lambda_{lambda_a(u_b) u_a}
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterator

from . import algebra as alg
from .algebra import AlgebraError, Element, Key
from .config import DEFAULT_CONFIG, EngineConfig
from .graph import Graph, Path
from .scalar import ONE, Scalar

log = logging.getLogger(__name__)

CONVENTION = "lambda_u(S_e) = u S_e, lambda_u(P_v) = P_v"


class EndomorphismError(ValueError):
    pass


def shift(x: Element) -> Element:
    """``phi(x) = sum_e S_e x S_e^*``."""
    g = x.graph
    out = Element.zero(g)
    for e in g.edges:
        se = alg.s(g, g.path((e,)))
        out = out + se * x * se.adjoint()
    return out


def _is_word_sum(u: Element) -> bool:
    expanded = alg.expand_to_level(u, u.levels())
    return all(c == ONE for _, c in expanded.items())


class Endomorphism:
    """A validated ``u`` in ``U_E`` with lazily filled caches for ``lambda_u``.

    Caches are write-once per key; concurrent fills may duplicate work but
    always store identical values.
    """

    def __init__(self, u: Element, config: EngineConfig = DEFAULT_CONFIG, *, _checked: bool = False):
        if not _checked:
            if not alg.is_unitary(u):
                raise EndomorphismError("u is not unitary")
            if not alg.commutes_with_vertices(u):
                raise EndomorphismError("u does not commute with the vertex projections (u not in U_E)")
        self.u = u
        self.graph: Graph = u.graph
        self.config = config
        self.in_B = alg.membership(u, "B")
        self.in_F = alg.membership(u, "F")
        self.word_unitary = _is_word_sum(u)
        self._uk: dict[int, Element] = {}
        self._shifts: dict[int, Element] = {0: u}
        self._lam_path: dict[Path, Element] = {}

    def __repr__(self) -> str:
        return f"Endomorphism(u={str(self.u)!r})"

    def __getstate__(self):
        return {"u": self.u, "config": self.config}

    def __setstate__(self, state):
        self.__init__(state["u"], state["config"], _checked=True)

    @property
    def is_identity(self) -> bool:
        return alg.equals(self.u, Element.unit(self.graph))

    # evaluation

    def lam_path(self, mu: Path) -> Element:
        """``lambda_u(S_mu)``, built one edge at a time: ``lambda(S_{mu e}) = lambda(S_mu) u S_e``."""
        hit = self._lam_path.get(mu)
        if hit is not None:
            return hit
        g = self.graph
        if not mu.edges:
            out = alg.vertex_projection(g, mu.source)
        else:
            e = mu.edges[-1]
            head = Path(mu.edges[:-1], mu.source, g.source[e]) if len(mu.edges) > 1 else Path((), g.source[e], g.source[e])
            out = self.lam_path(head) * self.u * alg.s(g, Path((e,), g.source[e], g.range[e]))
        self._lam_path.setdefault(mu, out)
        return out

    def apply(self, x: Element) -> Element:
        if x.graph is not self.graph and x.graph != self.graph:
            raise AlgebraError("element and endomorphism live over different graphs")
        out = Element.zero(self.graph)
        for (mu, nu), c in x.items():
            out = out + (self.lam_path(mu) * self.lam_path(nu).adjoint()) * c
        return out

    __call__ = apply

    def phi_power(self, j: int) -> Element:
        """``phi^j(u)`` (cached)."""
        hit = self._shifts.get(j)
        if hit is not None:
            return hit
        out = shift(self.phi_power(j - 1))
        self._shifts.setdefault(j, out)
        return out

    def u_k(self, k: int) -> Element:
        """``u_k = u phi(u) ... phi^{k-1}(u)``; ``u_0 = 1``."""
        if k < 0:
            raise EndomorphismError("k must be non-negative")
        if k == 0:
            return Element.unit(self.graph)
        hit = self._uk.get(k)
        if hit is not None:
            return hit
        out = self.u_k(k - 1) * self.phi_power(k - 1)
        if k <= self.config.uk_cache_cap:
            self._uk.setdefault(k, out)
        return out

    def apply_closed_form(self, x: Element) -> Element:
        """``sum c u_{|mu|} S_mu S_nu^* u_{|nu|}^*``; independent of :meth:`apply`."""
        g = self.graph
        out = Element.zero(g)
        for (mu, nu), c in x.items():
            mono = Element(g, {(mu, nu): c})
            out = out + self.u_k(len(mu.edges)) * mono * self.u_k(len(nu.edges)).adjoint()
        return out


def make_endo(u: Element, config: EngineConfig = DEFAULT_CONFIG) -> Endomorphism:
    return Endomorphism(u, config)


def identity(g: Graph, config: EngineConfig = DEFAULT_CONFIG) -> Endomorphism:
    return Endomorphism(Element.unit(g), config, _checked=True)


def apply(endo: Endomorphism, x: Element) -> Element:
    return endo.apply(x)


def u_k(endo: Endomorphism, k: int) -> Element:
    return endo.u_k(k)


def compose(a: Endomorphism, b: Endomorphism) -> Endomorphism:
    """``lambda_a . lambda_b`` as ``lambda_{lambda_a(u_b) u_a}``."""
    if a.graph != b.graph:
        raise AlgebraError("endomorphisms live over different graphs")
    w = alg.reduce(a.apply(b.u) * a.u)
    out = Endomorphism(w, a.config, _checked=True)
    assert alg.is_unitary(w) and alg.commutes_with_vertices(w), "composite left U_E"
    return out


def verify_inverse(a: Endomorphism, b: Endomorphism) -> bool:
    """Both composites fix every ``S_e``; generators suffice."""
    g = a.graph
    for e in g.edges:
        se = alg.s(g, g.path((e,)))
        if not alg.equals(a.apply(b.apply(se)), se):
            return False
        if not alg.equals(b.apply(a.apply(se)), se):
            return False
    return True


def same_endomorphism(a: Endomorphism, b: Endomorphism) -> bool:
    return alg.equals(a.u, b.u)


# inverse search


def prefix_codes(g: Graph, depth: int) -> list[tuple[Path, ...]]:
    """Complete prefix codes of O_n words with every word of length <= depth, deterministic order."""
    alg.cuntz_rank(g)
    v = g.vertices[0]

    def codes(d: int) -> list[tuple[tuple[str, ...], ...]]:
        out = [((),)]
        if d == 0:
            return out
        sub = codes(d - 1)
        for choice in itertools.product(sub, repeat=len(g.edges)):
            code = tuple((e,) + w for e, c in zip(g.edges, choice) for w in c)
            out.append(code)
        return out

    return [tuple(Path(w, v, v) for w in code) for code in codes(depth)]


def _code_depth(code: tuple[Path, ...]) -> int:
    return max(len(p.edges) for p in code)


def permutative_candidates(g: Graph, level: int) -> Iterator[Element]:
    """Unitaries ``sum_i S_{a_i} S_{b_i}^*`` pairing two complete prefix codes, code depth exactly ``level``."""
    codes = prefix_codes(g, level)
    by_size: dict[int, list[tuple[Path, ...]]] = {}
    for c in codes:
        by_size.setdefault(len(c), []).append(c)
    for size in sorted(by_size):
        group = by_size[size]
        for left in group:
            for right in group:
                if max(_code_depth(left), _code_depth(right)) != level:
                    continue
                for perm in itertools.permutations(range(size)):
                    yield Element._raw(g, {(left[perm[i]], right[i]): ONE for i in range(size)})


def _canonical(x: Element, level: int) -> frozenset:
    return frozenset(alg.expand_to_level(x, level).items())


def inverse_search(endo: Endomorphism, K: int, budget: int | None = None) -> Endomorphism | None:
    """Search word unitaries ``v`` of word length <= K with ``lambda_v = lambda_u^{-1}``.

    Candidates per level: ``u^*`` and ``u`` first, then permutative unitaries
    over pairs of complete prefix codes.  Each candidate is screened with the
    necessary identity ``lambda_u(v) u = 1`` and confirmed by
    :func:`verify_inverse`.  ``None`` means nothing was found within the bound
    (or budget); it does not mean no inverse exists.
    """
    g = endo.graph
    alg.cuntz_rank(g)
    if not endo.word_unitary:
        raise EndomorphismError("inverse_search needs a word unitary (sum of words S_a S_b^*)")
    if K < 0:
        raise EndomorphismError("K must be non-negative")
    budget = endo.config.inverse_budget if budget is None else budget
    target = endo.u.adjoint()
    pair_cache: dict[Key, Element] = {}
    seen: set[frozenset] = set()
    tried = 0

    def image(v: Element) -> Element:
        out = Element.zero(g)
        for (a, b), c in v.items():
            img = pair_cache.get((a, b))
            if img is None:
                img = endo.lam_path(a) * endo.lam_path(b).adjoint()
                pair_cache[(a, b)] = img
            out = out + img * c
        return out

    for level in range(K + 1):
        support = [x for x in (endo.u.adjoint(), endo.u) if x.max_word_length() == level]
        for v in itertools.chain(support, permutative_candidates(g, level)):
            key = _canonical(v, K)
            if key in seen:
                continue
            seen.add(key)
            tried += 1
            if tried > budget:
                log.warning("inverse_search budget of %d candidates exhausted at level %d", budget, level)
                return None
            if not alg.is_zero(image(v) - target):
                continue
            if not alg.is_unitary(v):
                continue
            cand = Endomorphism(v, endo.config, _checked=True)
            if verify_inverse(endo, cand):
                log.info("inverse found at level %d after %d candidates", level, tried)
                return cand
    return None


# Fourier decomposition


@dataclass
class FourierDecomposition:
    components: dict[int, Element]
    core_factors: dict[int, Element]
    base_isometry: str
    graph: Graph = field(repr=False)

    def reconstruct(self) -> Element:
        g = self.graph
        sv = alg.s(g, g.path((self.base_isometry,)))
        out = Element.zero(g)
        for j, x in self.core_factors.items():
            if j > 0:
                out = out + x * sv ** j
            elif j < 0:
                out = out + sv.adjoint() ** (-j) * x
            else:
                out = out + x
        return out

    @property
    def support(self) -> list[int]:
        return sorted(self.components)


def fourier_decompose(endo: Endomorphism | Element, base_isometry: str = "1") -> FourierDecomposition:
    """Gauge-degree components of ``u`` and core factors ``x_j`` with ``Phi^j(u) = x_j S_v^j`` (j > 0)
    and ``Phi^j(u) = S_v^{*|j|} x_j`` (j < 0)."""
    u = endo.u if isinstance(endo, Endomorphism) else endo
    g = u.graph
    alg.cuntz_rank(g)
    if base_isometry not in g.edge_index:
        raise EndomorphismError(f"unknown generator {base_isometry!r}")
    sv = alg.s(g, g.path((base_isometry,)))
    comps = alg.fourier_components(u)
    factors: dict[int, Element] = {}
    for j, comp in comps.items():
        if j > 0:
            x = comp * sv.adjoint() ** j
        elif j < 0:
            x = sv ** (-j) * comp
        else:
            x = comp
        if not alg.membership(x, "F"):
            raise AssertionError(f"core factor x_{j} left the core")
        factors[j] = x
    dec = FourierDecomposition(comps, factors, base_isometry, g)
    if not alg.equals(dec.reconstruct(), u):
        raise AssertionError("Fourier reconstruction failed")
    return dec
