"""Finite directed graphs, paths and the standing-assumption checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import networkx as nx
import numpy as np


class GraphError(ValueError):
    pass


class Path(NamedTuple):
    """A finite path.  Length-0 paths carry only their vertex (source == range)."""

    edges: tuple[str, ...]
    source: str
    range: str

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def word(self) -> str:
        return "".join(self.edges)


def concat(first: Path, second: Path) -> Path:
    if first.range != second.source:
        raise GraphError(
            f"cannot concatenate: range {first.range!r} != source {second.source!r}"
        )
    if not second.edges:
        return first
    if not first.edges:
        return second
    return Path(first.edges + second.edges, first.source, second.range)


def is_prefix(alpha: Path, mu: Path) -> tuple[bool, Path | None]:
    """Return ``(True, rest)`` when ``mu = alpha . rest``, else ``(False, None)``."""
    k = len(alpha.edges)
    if alpha.source != mu.source or mu.edges[:k] != alpha.edges:
        return False, None
    if k == len(mu.edges):
        return True, Path((), alpha.range, alpha.range)
    return True, Path(mu.edges[k:], alpha.range, mu.range)


@dataclass
class GraphReport:
    transitive: bool
    cycles_have_exits: bool
    sinks: list[str]
    sources: list[str]
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.transitive and self.cycles_have_exits

    def to_dict(self) -> dict:
        return {
            "transitive": self.transitive,
            "cycles_have_exits": self.cycles_have_exits,
            "sinks": list(self.sinks),
            "sources": list(self.sources),
            "violations": list(self.violations),
        }


class Graph:
    """Immutable finite directed graph ``(E0, E1, r, s)`` with its adjacency matrix.

    Vertex and edge order is the declaration order; every enumeration in the
    package follows it, so results are reproducible.
    """

    def __init__(self, vertices: Sequence[str], edges: Sequence[tuple[str, str, str]]):
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise GraphError("duplicate vertex name")
        names = [e[0] for e in edges]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise GraphError(f"duplicate edge name {dup!r}")
        vset = set(vertices)
        for name, s, r in edges:
            for endpoint in (s, r):
                if endpoint not in vset:
                    raise GraphError(
                        f"edge {name!r} uses undeclared vertex {endpoint!r}"
                    )
        self.vertices: tuple[str, ...] = vertices
        self.edges: tuple[str, ...] = tuple(names)
        self.source: dict[str, str] = {n: s for n, s, _ in edges}
        self.range: dict[str, str] = {n: r for n, _, r in edges}
        self.vertex_index = {v: i for i, v in enumerate(vertices)}
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.out_edges: dict[str, tuple[str, ...]] = {
            v: tuple(e for e in self.edges if self.source[e] == v) for v in vertices
        }
        a = np.zeros((len(vertices), len(vertices)), dtype=np.int64)
        for e in self.edges:
            a[self.vertex_index[self.source[e]], self.vertex_index[self.range[e]]] += 1
        a.flags.writeable = False
        self.adjacency = a
        self._paths_from: dict[tuple[str, int], tuple[Path, ...]] = {}

    # identity / display

    def _key(self):
        return (self.vertices, tuple((e, self.source[e], self.range[e]) for e in self.edges))

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return isinstance(other, Graph) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"Graph(vertices={list(self.vertices)}, edges={len(self.edges)})"

    def __reduce__(self):
        return (Graph, (self.vertices, [(e, self.source[e], self.range[e]) for e in self.edges]))

    @property
    def cuntz_order(self) -> int | None:
        """``n`` when this is the one-vertex graph with loops named ``"1".."n"``, else None."""
        if len(self.vertices) != 1:
            return None
        n = len(self.edges)
        if n == 0 or self.edges != tuple(str(i) for i in range(1, n + 1)):
            return None
        return n

    @property
    def uses_digit_words(self) -> bool:
        n = self.cuntz_order
        return n is not None and n <= 9

    def summary(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[e, self.source[e], self.range[e]] for e in self.edges],
            "cuntz_order": self.cuntz_order,
        }

    # paths

    def vertex_path(self, v: str) -> Path:
        if v not in self.vertex_index:
            raise GraphError(f"undeclared vertex {v!r}")
        return Path((), v, v)

    def path(self, edges: Iterable[str]) -> Path:
        edges = tuple(edges)
        if not edges:
            raise GraphError("use vertex_path for length-0 paths")
        for e in edges:
            if e not in self.edge_index:
                raise GraphError(f"edge {e!r} undeclared")
        for a, b in zip(edges, edges[1:]):
            if self.range[a] != self.source[b]:
                raise GraphError(f"edges {a!r}, {b!r} do not compose")
        return Path(edges, self.source[edges[0]], self.range[edges[-1]])

    def word(self, w: str) -> Path:
        """Digit-string shorthand on O_n graphs; ``""`` is the vertex."""
        if not self.uses_digit_words:
            raise GraphError("digit words need a single-vertex graph with loops 1..9")
        if w == "":
            return self.vertex_path(self.vertices[0])
        return self.path(tuple(w))

    def extend(self, p: Path, tail: tuple[str, ...]) -> Path:
        # caller guarantees tail starts at p.range
        if not tail:
            return p
        return Path(p.edges + tail, p.source, self.range[tail[-1]])

    def paths_from(self, v: str, k: int) -> tuple[Path, ...]:
        """All length-k paths starting at ``v`` (cached)."""
        key = (v, k)
        hit = self._paths_from.get(key)
        if hit is not None:
            return hit
        if k == 0:
            out = (Path((), v, v),)
        else:
            out = tuple(
                Path((e,) + p.edges, v, p.range)
                for e in self.out_edges[v]
                for p in self.paths_from(self.range[e], k - 1)
            )
        self._paths_from[key] = out
        return out

    def enumerate_paths(self, k: int, source: str | None = None, range: str | None = None) -> list[Path]:
        if k < 0:
            raise GraphError("path length must be non-negative")
        starts = [source] if source is not None else list(self.vertices)
        out = []
        for v in starts:
            for p in self.paths_from(v, k):
                if range is None or p.range == range:
                    out.append(p)
        if source is None:
            out.sort(key=self.path_key)
        return out

    def path_key(self, p: Path) -> tuple:
        return (tuple(self.edge_index[e] for e in p.edges), self.vertex_index[p.source])

    def bratteli_dims(self, k: int) -> dict[str, int]:
        """Matrix size of the level-k core summand over each vertex: column sums of A^k."""
        if k < 0:
            raise GraphError("k must be non-negative")
        ak = np.linalg.matrix_power(self.adjacency, k)
        cols = ak.sum(axis=0)
        return {v: int(cols[i]) for i, v in enumerate(self.vertices)}

    def unit_terms(self):
        return [self.vertex_path(v) for v in self.vertices]


def build_graph(vertex_list: Sequence[str], edge_list: Sequence[tuple[str, str, str]]) -> Graph:
    return Graph(vertex_list, edge_list)


def cuntz_graph(n: int, vertex: str = "v") -> Graph:
    if n < 1:
        raise GraphError("cuntz graph needs n >= 1")
    return Graph([vertex], [(str(i), vertex, vertex) for i in range(1, n + 1)])


def check_standing_assumptions(g: Graph) -> GraphReport:
    """Transitivity and exits on cycles; sinks and sources are named in the report."""
    a = g.adjacency > 0
    out_deg = g.adjacency.sum(axis=1)
    in_deg = g.adjacency.sum(axis=0)
    sinks = [v for i, v in enumerate(g.vertices) if out_deg[i] == 0]
    sources = [v for i, v in enumerate(g.vertices) if in_deg[i] == 0]

    # reachability by paths of length >= 1
    reach = a.copy()
    for _ in range(len(g.vertices)):
        nxt = reach | ((reach.astype(np.int64) @ a.astype(np.int64)) > 0)
        if (nxt == reach).all():
            break
        reach = nxt
    violations = []
    unreachable = [
        (g.vertices[i], g.vertices[j])
        for i, j in itertools.product(range(len(g.vertices)), repeat=2)
        if not reach[i, j]
    ]
    transitive = not unreachable
    for v, w in unreachable:
        violations.append(f"no path of positive length from {v} to {w}")
    for v in sinks:
        violations.append(f"sink: {v}")
    for v in sources:
        violations.append(f"source: {v}")

    dg = nx.DiGraph()
    dg.add_nodes_from(g.vertices)
    dg.add_edges_from((g.source[e], g.range[e]) for e in g.edges)
    exits_ok = True
    for cycle in sorted(nx.simple_cycles(dg), key=lambda c: [g.vertex_index[v] for v in c]):
        if not any(out_deg[g.vertex_index[v]] >= 2 for v in cycle):
            exits_ok = False
            violations.append("cycle without exit through " + " -> ".join(cycle))
    return GraphReport(transitive, exits_ok, sinks, sources, violations)


def enumerate_paths(g: Graph, k: int, source: str | None = None, range: str | None = None) -> list[Path]:
    return g.enumerate_paths(k, source=source, range=range)


def bratteli_dims(g: Graph, k: int) -> dict[str, int]:
    return g.bratteli_dims(k)
