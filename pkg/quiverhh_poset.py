from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import re
from typing import Any, Iterable

import networkx as nx

from quiverhh_config import FieldSpec
from quiverhh_core import ModelError, StatusCallback, sign
from quiverhh_linalg import CochainComplexReport, matrix, rank
from quiverhh_quiver import Arrow, LinComb, Presentation, Quiver, enumerate_paths

Chain = tuple[int, ...]


@dataclass(frozen=True)
class Poset:
    """A finite poset; `greater[i][j]` means elements[i] > elements[j]."""

    elements: tuple[str, ...]
    greater: tuple[tuple[bool, ...], ...]

    @classmethod
    def from_relations(cls, elements: Iterable[str], pairs: Iterable[tuple[str, str]]) -> Poset:
        """Build the poset generated by strict relations a > b (closed transitively)."""

        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            raise ModelError("Duplicate poset element.")
        index = {name: i for i, name in enumerate(elements)}
        graph = nx.DiGraph()
        graph.add_nodes_from(range(len(elements)))
        for a, b in pairs:
            if a not in index or b not in index:
                raise ModelError(f"Unknown poset element in {a} > {b}.")
            graph.add_edge(index[a], index[b])
        if not nx.is_directed_acyclic_graph(graph):
            raise ModelError("order relation has a cycle")
        closure = nx.transitive_closure_dag(graph)
        greater = tuple(
            tuple(closure.has_edge(i, j) for j in range(len(elements))) for i in range(len(elements))
        )
        return cls(elements, greater)

    @property
    def size(self) -> int:
        return len(self.elements)

    def index(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError as exc:
            raise ModelError(f"Unknown poset element: {name}") from exc

    def is_greater(self, i: int, j: int) -> bool:
        return self.greater[i][j]

    def up_set(self, i: int) -> list[int]:
        return [j for j in range(self.size) if self.greater[j][i]]

    def down_set(self, i: int) -> list[int]:
        return [j for j in range(self.size) if self.greater[i][j]]

    def is_maximal(self, i: int) -> bool:
        return not self.up_set(i)

    def is_minimal(self, i: int) -> bool:
        return not self.down_set(i)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.size))
        graph.add_edges_from((i, j) for i in range(self.size) for j in range(self.size) if self.greater[i][j])
        return tuple(sorted(nx.transitive_reduction(graph).edges()))

    def hasse_edges(self) -> list[tuple[str, str]]:
        return [(self.elements[i], self.elements[j]) for i, j in self.covers]

    def restrict(self, keep: Iterable[int]) -> Poset:
        keep = sorted(set(keep))
        return Poset(
            tuple(self.elements[i] for i in keep),
            tuple(tuple(self.greater[i][j] for j in keep) for i in keep),
        )

    @cached_property
    def _chain_cache(self) -> dict[int, list[Chain]]:
        return {}


def chains(p: Poset, n: int) -> list[Chain]:
    """Strict chains s_0 > ... > s_n as index tuples, lexicographically ordered."""

    if n < 0:
        raise ModelError("Chain degree must be >= 0.")
    cache = p._chain_cache
    if n in cache:
        return cache[n]
    if n == 0:
        result = [(i,) for i in range(p.size)]
    else:
        result = [
            chain + (j,)
            for chain in chains(p, n - 1)
            for j in range(p.size)
            if p.greater[chain[-1]][j]
        ]
    cache[n] = result
    return result


def longest_chain_edges(p: Poset) -> int:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(p.size))
    graph.add_edges_from(p.covers)
    return nx.dag_longest_path_length(graph)


def simplicial_boundary(p: Poset, n: int, field: FieldSpec | None = None) -> Any:
    """Matrix of delta_{n+1}: SC_{n+1} -> SC_n (columns indexed by (n+1)-chains).

    delta(s_0 > ... > s_{n+1}) = sum_i (-1)^i (chain with s_i omitted).
    """

    field = field or FieldSpec.rationals()
    K = field.domain
    rows = chains(p, n)
    cols = chains(p, n + 1)
    row_index = {chain: i for i, chain in enumerate(rows)}
    entries: dict[int, dict[int, Any]] = {}
    for j, chain in enumerate(cols):
        for omit in range(len(chain)):
            face = chain[:omit] + chain[omit + 1 :]
            i = row_index[face]
            row = entries.setdefault(i, {})
            row[j] = row.get(j, K.zero) + K(sign(omit))
    return matrix(entries, (len(rows), len(cols)), K)


def simplicial_cohomology(
    p: Poset,
    max_degree: int,
    field: FieldSpec | None = None,
    *,
    on_status: StatusCallback | None = None,
) -> CochainComplexReport:
    field = field or FieldSpec.rationals()
    dims = [len(chains(p, n)) for n in range(max_degree + 2)]
    ranks = []
    for n in range(max_degree + 1):
        if on_status:
            on_status(f"Simplicial degree {n}: {dims[n]} chains")
        ranks.append(rank(simplicial_boundary(p, n, field)))
    return CochainComplexReport(tuple(dims), tuple(ranks))


def simplicial_cohomology_dims(p: Poset, max_degree: int, field: FieldSpec | None = None) -> list[int]:
    return list(simplicial_cohomology(p, max_degree, field).cohomology)


def _minimal_count(p: Poset, subset: list[int]) -> int:
    return sum(1 for x in subset if not any(p.greater[x][y] for y in subset))


def _maximal_count(p: Poset, subset: list[int]) -> int:
    return sum(1 for x in subset if not any(p.greater[y][x] for y in subset))


def iz_reduce(p: Poset, *, on_status: StatusCallback | None = None) -> Poset:
    """Delete interior elements with a thin up-set or down-set until none is left.

    An element that is neither minimal nor maximal goes when its up-set has
    fewer than two minimal elements or its down-set fewer than two maximal
    ones. One element at a time, first by index, recomputing after each step.
    """

    current = p
    while True:
        doomed = None
        for x in range(current.size):
            if current.is_minimal(x) or current.is_maximal(x):
                continue
            up = current.up_set(x)
            down = current.down_set(x)
            if _minimal_count(current, up) < 2 or _maximal_count(current, down) < 2:
                doomed = x
                break
        if doomed is None:
            return current
        if on_status:
            on_status(f"Removing {current.elements[doomed]}")
        current = current.restrict(i for i in range(current.size) if i != doomed)


_UNSAFE_ARROW_CHARS = re.compile(r"[\s.+\-/*#]")


def _arrow_name(upper: str, lower: str, taken: set[str]) -> str:
    name = _UNSAFE_ARROW_CHARS.sub("_", f"{upper}>{lower}")
    if name[0].isdigit():
        name = "v" + name
    base, suffix = name, 2
    while name in taken:
        name = f"{base}_{suffix}"
        suffix += 1
    taken.add(name)
    return name


def incidence_presentation(p: Poset) -> Presentation:
    """Hasse quiver modulo the parallel ideal (all differences of parallel paths)."""

    taken: set[str] = set()
    arrows = tuple(
        Arrow(_arrow_name(p.elements[i], p.elements[j], taken), p.elements[i], p.elements[j])
        for i, j in p.covers
    )
    quiver = Quiver(p.elements, arrows)
    bound = max(2, longest_chain_edges(p) + 1)

    parallel: dict[tuple[str, str], list] = {}
    for path in enumerate_paths(quiver, bound - 1):
        if path.length >= 2:
            parallel.setdefault((path.source, path.target), []).append(path)

    relations = []
    for key in sorted(parallel, key=lambda k: (p.index(k[0]), p.index(k[1]))):
        group = parallel[key]
        for a in range(len(group)):
            for b in range(a + 1, len(group)):
                relations.append(LinComb.from_terms([(1, group[a]), (-1, group[b])]))
    return Presentation(quiver, tuple(relations), bound)
