"""Exact *-polynomial arithmetic in a graph C*-algebra.

An :class:`Element` is a finite sum ``sum c S_mu S_nu^*`` over pairs of paths
with a common range, stored as a dict keyed by ``(mu, nu)``.  Products use the
two Cuntz-Krieger relations: ``S_e^* S_e = P_r(e)`` collapses adjoint/path
pairs, and ``P_v = sum_{s(e)=v} S_e S_e^*`` is only applied on demand
(:func:`expand_to_level`).

Equality is decided by expanding each gauge degree to a common ``nu``-length,
where the monomials are linearly independent; :func:`reduce` is only a display
normalisation.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from fractions import Fraction
from typing import Callable, Iterator, Mapping, NamedTuple, Sequence

from .graph import Graph, Path
from .scalar import ONE, Scalar

Key = tuple[Path, Path]


class AlgebraError(ValueError):
    pass


class Monomial(NamedTuple):
    mu: Path
    nu: Path
    coefficient: Scalar

    @property
    def degree(self) -> int:
        return len(self.mu.edges) - len(self.nu.edges)


def _key_degree(key: Key) -> int:
    return len(key[0].edges) - len(key[1].edges)


class Element:
    """Immutable finite linear combination of path monomials ``S_mu S_nu^*``."""

    __slots__ = ("graph", "_terms")

    def __init__(self, graph: Graph, terms: Mapping[Key, Scalar] | None = None):
        self.graph = graph
        clean: dict[Key, Scalar] = {}
        if terms:
            for key, c in terms.items():
                if c:
                    clean[key] = c
        self._terms = clean

    @classmethod
    def _raw(cls, graph: Graph, terms: dict[Key, Scalar]) -> "Element":
        # terms already normalised (no zeros); skips the copy
        obj = cls.__new__(cls)
        obj.graph = graph
        obj._terms = terms
        return obj

    # construction

    @classmethod
    def zero(cls, graph: Graph) -> "Element":
        return cls._raw(graph, {})

    @classmethod
    def unit(cls, graph: Graph) -> "Element":
        return cls._raw(graph, {(p, p): ONE for p in (graph.vertex_path(v) for v in graph.vertices)})

    @classmethod
    def monomial(cls, graph: Graph, mu: Path, nu: Path, coefficient=1) -> "Element":
        if mu.range != nu.range:
            # S_mu S_nu^* vanishes unless the ranges agree
            return cls.zero(graph)
        return cls(graph, {(mu, nu): Scalar.coerce(coefficient)})

    @classmethod
    def scalar(cls, graph: Graph, c) -> "Element":
        return cls.unit(graph) * Scalar.coerce(c)

    # access

    def __len__(self) -> int:
        return len(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, mu: Path, nu: Path) -> Scalar:
        return self._terms.get((mu, nu), Scalar(0))

    def sort_key(self, key: Key) -> tuple:
        mu, nu = key
        g = self.graph
        return (len(mu.edges) - len(nu.edges), len(nu.edges), g.path_key(mu), g.path_key(nu))

    def terms(self) -> list[Monomial]:
        """Monomials in canonical order: degree, then ``|nu|``, then ``(mu, nu)`` lexicographically."""
        return [Monomial(k[0], k[1], self._terms[k]) for k in sorted(self._terms, key=self.sort_key)]

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.terms())

    def degrees(self) -> list[int]:
        return sorted({_key_degree(k) for k in self._terms})

    def levels(self) -> dict[int, int]:
        """Largest ``|nu|`` per gauge degree."""
        out: dict[int, int] = {}
        for mu, nu in self._terms:
            d = len(mu.edges) - len(nu.edges)
            out[d] = max(out.get(d, 0), len(nu.edges))
        return out

    def max_word_length(self) -> int:
        return max((max(len(mu.edges), len(nu.edges)) for mu, nu in self._terms), default=0)

    # arithmetic

    def _check(self, other: "Element") -> None:
        if other.graph is not self.graph and other.graph != self.graph:
            raise AlgebraError("elements live over different graphs")

    def __add__(self, other):
        if not isinstance(other, Element):
            s = _as_scalar(other)
            if s is None:
                return NotImplemented
            other = Element.scalar(self.graph, s)
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k)
            v = c if v is None else v + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return Element._raw(self.graph, out)

    __radd__ = __add__

    def __neg__(self):
        return Element._raw(self.graph, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            s = _as_scalar(other)
            if s is None:
                return NotImplemented
            other = Element.scalar(self.graph, s)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        s = _as_scalar(other)
        if s is None:
            return NotImplemented
        if not s:
            return Element.zero(self.graph)
        return Element._raw(self.graph, {k: c * s for k, c in self._terms.items()})

    def __rmul__(self, other):
        s = _as_scalar(other)
        if s is None:
            return NotImplemented
        return self * s

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Element.unit(self.graph)
        for _ in range(k):
            out = out * self
        return out

    def adjoint(self) -> "Element":
        return Element._raw(self.graph, {(nu, mu): c.conjugate() for (mu, nu), c in self._terms.items()})

    @property
    def star(self) -> "Element":
        return self.adjoint()

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return equals(self, other)
        s = _as_scalar(other)
        if s is None:
            return NotImplemented
        return equals(self, Element.scalar(self.graph, s))

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        from .formatting import format_element

        return f"Element({format_element(self)!r})"

    def __str__(self) -> str:
        from .formatting import format_element

        return format_element(self)


def _as_scalar(value) -> Scalar | None:
    try:
        return Scalar.coerce(value)
    except TypeError:
        return None


# building blocks


def unit(g: Graph) -> Element:
    return Element.unit(g)


def zero(g: Graph) -> Element:
    return Element.zero(g)


def _as_path(g: Graph, p) -> Path:
    if isinstance(p, Path):
        return p
    if isinstance(p, str):
        return g.word(p)
    return g.path(p)


def s(g: Graph, path) -> Element:
    """``S_mu`` for a path (or O_n digit word); ``S_v = P_v`` for vertices."""
    p = _as_path(g, path)
    return Element._raw(g, {(p, Path((), p.range, p.range)): ONE})


def p(g: Graph, path) -> Element:
    """Range projection ``P_mu = S_mu S_mu^*``."""
    q = _as_path(g, path)
    return Element._raw(g, {(q, q): ONE})


def vertex_projection(g: Graph, v: str) -> Element:
    q = g.vertex_path(v)
    return Element._raw(g, {(q, q): ONE})


# products


def _mono_key_mul(g: Graph, a: Key, b: Key) -> Key | None:
    """Product of ``S_mu S_nu^*`` and ``S_alpha S_beta^*`` as a key, or None for zero."""
    mu, nu = a
    alpha, beta = b
    ne, ae = nu.edges, alpha.edges
    ln, la = len(ne), len(ae)
    if la >= ln:
        if ln == 0:
            if nu.source != alpha.source:
                return None
        elif ae[:ln] != ne:
            return None
        return (g.extend(mu, ae[ln:]), beta)
    if la == 0:
        if alpha.source != nu.source:
            return None
    elif ne[:la] != ae:
        return None
    return (mu, g.extend(beta, ne[la:]))


def mono_mul(a: Monomial, b: Monomial, g: Graph) -> Element:
    key = _mono_key_mul(g, (a.mu, a.nu), (b.mu, b.nu))
    if key is None:
        return Element.zero(g)
    return Element(g, {key: a.coefficient * b.coefficient})


def mul(x: Element, y: Element) -> Element:
    x._check(y)
    g = x.graph
    out: dict[Key, Scalar] = {}
    ext = g.extend
    for (mu, nu), c1 in x._terms.items():
        ne = nu.edges
        ln = len(ne)
        for (alpha, beta), c2 in y._terms.items():
            ae = alpha.edges
            la = len(ae)
            if la >= ln:
                if ln == 0:
                    if nu.source != alpha.source:
                        continue
                elif ae[:ln] != ne:
                    continue
                key = (ext(mu, ae[ln:]), beta)
            else:
                if la == 0:
                    if alpha.source != nu.source:
                        continue
                elif ne[:la] != ae:
                    continue
                key = (mu, ext(beta, ne[la:]))
            c = c1 * c2
            prev = out.get(key)
            out[key] = c if prev is None else prev + c
    return Element(g, out)


def adjoint(x: Element) -> Element:
    return x.adjoint()


def linear_combine(scalars: Sequence, elements: Sequence[Element]) -> Element:
    if len(scalars) != len(elements):
        raise AlgebraError("need one scalar per element")
    if not elements:
        raise AlgebraError("empty combination has no graph")
    out = Element.zero(elements[0].graph)
    for c, x in zip(scalars, elements):
        out = out + x * c
    return out


# levels and canonical forms


def _expand_key(g: Graph, key: Key, level: int) -> Iterator[Key]:
    mu, nu = key
    extra = level - len(nu.edges)
    if extra == 0:
        yield key
        return
    if not g.out_edges[nu.range]:
        raise AlgebraError(f"cannot expand past sink {nu.range!r}")
    for gamma in g.paths_from(nu.range, extra):
        yield (g.extend(mu, gamma.edges), g.extend(nu, gamma.edges))


def expand_to_level(x: Element, target: int | Mapping[int, int] | Callable[[int], int]) -> Element:
    """Rewrite every term of degree m so that ``|nu| = target(m)``; the value is unchanged."""
    if isinstance(target, int):
        level_of = lambda d: target  # noqa: E731
    elif callable(target):
        level_of = target
    else:
        level_of = lambda d: target.get(d, 0)  # noqa: E731
    g = x.graph
    out: dict[Key, Scalar] = {}
    for key, c in x._terms.items():
        d = _key_degree(key)
        lev = level_of(d)
        if lev < len(key[1].edges):
            raise AlgebraError(
                f"target level {lev} below existing level {len(key[1].edges)} in degree {d}"
            )
        if d + lev < 0:
            raise AlgebraError(f"level {lev} too small for degree {d}")
        for k in _expand_key(g, key, lev):
            prev = out.get(k)
            out[k] = c if prev is None else prev + c
    return Element(g, out)


def is_zero(x: Element) -> bool:
    if not x._terms:
        return True
    return not expand_to_level(x, x.levels())._terms


def equals(x: Element, y: Element) -> bool:
    x._check(y)
    return is_zero(x - y)


def reduce(x: Element) -> Element:
    """Contract complete equal-coefficient families ``{S_{mu e} S_{nu e}^*}`` to ``S_mu S_nu^*``.

    Each pass contracts every complete family at the deepest ``|nu e|`` that
    has one; passes repeat until nothing contracts.
    """
    g = x.graph
    terms = dict(x._terms)
    while True:
        families: dict[Key, dict[str, Scalar]] = defaultdict(dict)
        for (mu, nu), c in terms.items():
            if mu.edges and nu.edges and mu.edges[-1] == nu.edges[-1]:
                e = mu.edges[-1]
                v = g.source[e]
                parent = (
                    Path(mu.edges[:-1], mu.source, v) if len(mu.edges) > 1 else Path((), v, v),
                    Path(nu.edges[:-1], nu.source, v) if len(nu.edges) > 1 else Path((), v, v),
                )
                families[parent][e] = c
        complete = []
        for parent, fam in families.items():
            v = parent[0].range
            outs = g.out_edges[v]
            if len(fam) == len(outs):
                coeffs = set(fam.values())
                if len(coeffs) == 1:
                    complete.append(parent)
        if not complete:
            return Element(g, terms)
        depth = max(len(pk[1].edges) for pk in complete)
        for parent in complete:
            if len(parent[1].edges) != depth:
                continue
            mu, nu = parent
            c = None
            for e in g.out_edges[mu.range]:
                c = terms.pop((g.extend(mu, (e,)), g.extend(nu, (e,))))
            prev = terms.get(parent)
            val = c if prev is None else prev + c
            if val:
                terms[parent] = val
            else:
                terms.pop(parent, None)


# gauge action and expectations


def fourier_component(x: Element, m: int) -> Element:
    return Element._raw(x.graph, {k: c for k, c in x._terms.items() if _key_degree(k) == m})


def fourier_components(x: Element) -> dict[int, Element]:
    return {d: fourier_component(x, d) for d in x.degrees()}


def gauge_act(x: Element, z) -> Element:
    z = Scalar.coerce(z)
    if z.norm2() != 1:
        raise AlgebraError(f"gauge parameter {z} is not of modulus one")
    return Element._raw(x.graph, {k: c * z ** _key_degree(k) for k, c in x._terms.items()})


def expect_diagonal(x: Element) -> Element:
    return Element._raw(x.graph, {k: c for k, c in x._terms.items() if k[0] == k[1]})


def expect_core(x: Element) -> Element:
    return fourier_component(x, 0)


def cuntz_rank(g: Graph) -> int:
    """``n`` for a one-vertex graph with ``n`` loops; raises otherwise."""
    if len(g.vertices) != 1 or not g.edges:
        raise AlgebraError("operation defined only for Cuntz algebras (one vertex, n >= 1 loops)")
    return len(g.edges)


def expect_core_level(x: Element, k: int) -> Element:
    """Trace-compatible conditional expectation onto the level-k core (O_n only)."""
    n = cuntz_rank(x.graph)
    if k < 0:
        raise AlgebraError("k must be non-negative")
    g = x.graph
    out: dict[Key, Scalar] = {}
    for key, c in x._terms.items():
        mu, nu = key
        j = len(mu.edges)
        if j != len(nu.edges):
            continue
        if j <= k:
            for kk in _expand_key(g, key, k):
                prev = out.get(kk)
                out[kk] = c if prev is None else prev + c
            continue
        if mu.edges[k:] != nu.edges[k:]:
            continue
        v = mu.source
        a = Path(mu.edges[:k], v, g.range[mu.edges[k - 1]] if k else v)
        b = Path(nu.edges[:k], v, g.range[nu.edges[k - 1]] if k else v)
        val = c * Fraction(1, n ** (j - k))
        prev = out.get((a, b))
        out[(a, b)] = val if prev is None else prev + val
    return Element(g, out)


def _level_candidate(x: Element, k: int, diagonal: bool) -> Element:
    """Best level-k representative of a degree-0 element: read coefficients at one tail per prefix pair."""
    g = x.graph
    x0 = fourier_component(x, 0)
    lev = max([k] + list(x0.levels().values()))
    full = expand_to_level(x0, lev)
    out: dict[Key, Scalar] = {}
    seen = set()
    for (mu, nu), c in full._terms.items():
        a_edges, b_edges = mu.edges[:k], nu.edges[:k]
        if diagonal and a_edges != b_edges:
            continue
        a = g.path(a_edges) if a_edges else Path((), mu.source, mu.source)
        b = g.path(b_edges) if b_edges else Path((), nu.source, nu.source)
        if (a, b) in seen or a.range != b.range:
            continue
        seen.add((a, b))
        gamma = g.paths_from(a.range, lev - k)[0]
        val = full._terms.get((g.extend(a, gamma.edges), g.extend(b, gamma.edges)))
        if val:
            out[(a, b)] = val
    return Element(g, out)


def commutes_with_vertices(x: Element) -> bool:
    g = x.graph
    for v in g.vertices:
        pv = vertex_projection(g, v)
        if not equals(pv * x, x * pv):
            return False
    return True


SPACES = ("D", "Dk", "F", "Fk", "B", "U_E")


def membership(x: Element, space: str, k: int | None = None, require_unitary: bool = True) -> bool:
    """Membership in the diagonal/core subspaces, the level-one commutant ``B`` or ``U_E``."""
    if space == "D":
        return equals(x, expect_diagonal(x))
    if space == "F":
        return equals(x, expect_core(x))
    if space in ("Dk", "Fk"):
        if k is None or k < 0:
            raise AlgebraError(f"{space} membership needs a level k >= 0")
        diag = space == "Dk"
        if diag and not membership(x, "D"):
            return False
        if not diag and not membership(x, "F"):
            return False
        return equals(x, _level_candidate(x, k, diag))
    if space == "B":
        return membership(x, "Fk", 1) and commutes_with_vertices(x)
    if space == "U_E":
        if not commutes_with_vertices(x):
            return False
        return is_unitary(x) if require_unitary else True
    raise AlgebraError(f"unknown space {space!r}; expected one of {SPACES}")


def is_unitary(x: Element) -> bool:
    one = Element.unit(x.graph)
    xs = x.adjoint()
    return equals(x * xs, one) and equals(xs * x, one)


def is_projection(x: Element) -> bool:
    return equals(x, x.adjoint()) and equals(x, x * x)


class NotInCoreWarning(UserWarning):
    pass


def trace(x: Element) -> Scalar:
    """Normalised trace on the core of O_n; other degrees are dropped with a warning."""
    n = cuntz_rank(x.graph)
    if not is_zero(x - expect_core(x)):
        warnings.warn("trace applied outside the core; using its core part", NotInCoreWarning, stacklevel=2)
    total = Scalar(0)
    for (mu, nu), c in x._terms.items():
        if mu == nu:
            total = total + c * Fraction(1, n ** len(mu.edges))
    return total
