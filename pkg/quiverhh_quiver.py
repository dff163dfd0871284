from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable

import networkx as nx

from quiverhh_core import ModelError, NotComposableError


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self) -> None:
        if not self.vertices:
            raise ModelError("A quiver needs at least one vertex.")
        if len(set(self.vertices)) != len(self.vertices):
            raise ModelError("Duplicate vertex name.")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ModelError("Duplicate arrow name.")
        known = set(self.vertices)
        for arrow in self.arrows:
            if arrow.source not in known or arrow.target not in known:
                raise ModelError(f"Arrow {arrow.name} uses an undeclared vertex.")

    @cached_property
    def _by_name(self) -> dict[str, Arrow]:
        return {a.name: a for a in self.arrows}

    @cached_property
    def _outgoing(self) -> dict[str, tuple[Arrow, ...]]:
        table: dict[str, list[Arrow]] = defaultdict(list)
        for arrow in sorted(self.arrows, key=lambda a: a.name):
            table[arrow.source].append(arrow)
        return {v: tuple(table[v]) for v in self.vertices}

    @cached_property
    def _incoming(self) -> dict[str, tuple[Arrow, ...]]:
        table: dict[str, list[Arrow]] = defaultdict(list)
        for arrow in sorted(self.arrows, key=lambda a: a.name):
            table[arrow.target].append(arrow)
        return {v: tuple(table[v]) for v in self.vertices}

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError as exc:
            raise ModelError(f"Unknown arrow: {name}") from exc

    def has_vertex(self, name: str) -> bool:
        return name in self._outgoing

    def arrows_from(self, vertex: str) -> tuple[Arrow, ...]:
        return self._outgoing[vertex]

    def arrows_into(self, vertex: str) -> tuple[Arrow, ...]:
        return self._incoming[vertex]


@total_ordering
@dataclass(frozen=True)
class Path:
    """A path read left to right: `alpha.gamma` is alpha followed by gamma.

    The empty arrow sequence is the trivial path e_x with source = target = x.
    """

    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @classmethod
    def trivial(cls, vertex: str) -> Path:
        return cls(vertex, vertex, ())

    @classmethod
    def of_arrow(cls, arrow: Arrow) -> Path:
        return cls(arrow.source, arrow.target, (arrow.name,))

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def sort_key(self) -> tuple[int, tuple[str, ...], str]:
        return (len(self.arrows), self.arrows, self.source)

    def __lt__(self, other: Path) -> bool:
        if not isinstance(other, Path):
            return NotImplemented
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if not self.arrows:
            return f"e_{self.source}"
        return ".".join(self.arrows)


def compose(p: Path, q: Path) -> Path:
    if p.target != q.source:
        raise NotComposableError(f"Cannot compose {p} (ends at {p.target}) with {q} (starts at {q.source}).")
    return Path(p.source, q.target, p.arrows + q.arrows)


def compose_all(paths: Iterable[Path]) -> Path:
    paths = list(paths)
    if not paths:
        raise ModelError("Nothing to compose.")
    result = paths[0]
    for p in paths[1:]:
        result = compose(result, p)
    return result


def path_from_arrows(q: Quiver, names: Iterable[str]) -> Path:
    arrows = [q.arrow(n) for n in names]
    if not arrows:
        raise ModelError("A path needs at least one arrow.")
    result = Path.of_arrow(arrows[0])
    for arrow in arrows[1:]:
        result = compose(result, Path.of_arrow(arrow))
    return result


def vertex_at(q: Quiver, p: Path, position: int) -> str:
    """Vertex reached after the first `position` arrows of p."""

    if position == p.length:
        return p.target
    return q.arrow(p.arrows[position]).source


def subpath(q: Quiver, p: Path, start: int, stop: int) -> Path:
    """Arrows start..stop-1 of p; start == stop gives the trivial path there."""

    if not 0 <= start <= stop <= p.length:
        raise ModelError(f"Bad subpath bounds {start}:{stop} for {p}.")
    if start == stop:
        return Path.trivial(vertex_at(q, p, start))
    return Path(vertex_at(q, p, start), vertex_at(q, p, stop), p.arrows[start:stop])


def enumerate_paths(
    q: Quiver,
    max_len: int,
    source: str | None = None,
    target: str | None = None,
) -> list[Path]:
    """All paths of length <= max_len matching the endpoint filters, sorted."""

    if max_len < 0:
        raise ModelError("max_len must be >= 0.")
    for name in (source, target):
        if name is not None and not q.has_vertex(name):
            raise ModelError(f"Unknown vertex: {name}")

    starts = [source] if source is not None else list(q.vertices)
    found: list[Path] = []
    frontier = [Path.trivial(v) for v in starts]
    for _ in range(max_len + 1):
        found.extend(frontier)
        frontier = [
            Path(p.source, arrow.target, p.arrows + (arrow.name,))
            for p in frontier
            for arrow in q.arrows_from(p.target)
        ]
    if target is not None:
        found = [p for p in found if p.target == target]
    return sorted(found)


def is_connected(q: Quiver) -> bool:
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(q.vertices)
    graph.add_edges_from((a.source, a.target) for a in q.arrows)
    return nx.is_weakly_connected(graph)


@dataclass(frozen=True)
class LinComb:
    """A linear combination of pairwise distinct parallel paths.

    Coefficients are exact fractions; conversion into the working field
    happens when an algebra is built.
    """

    terms: tuple[tuple[Fraction, Path], ...]

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int | Fraction, Path]]) -> LinComb:
        merged: dict[Path, Fraction] = {}
        for coefficient, path in terms:
            merged[path] = merged.get(path, Fraction(0)) + Fraction(coefficient)
        kept = sorted((p, c) for p, c in merged.items() if c != 0)
        if kept:
            first = kept[0][0]
            for path, _ in kept:
                if (path.source, path.target) != (first.source, first.target):
                    raise ModelError("terms not parallel")
        return cls(tuple((c, p) for p, c in kept))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def paths(self) -> tuple[Path, ...]:
        return tuple(p for _, p in self.terms)

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for index, (coefficient, path) in enumerate(self.terms):
            magnitude = abs(coefficient)
            body = str(path) if magnitude == 1 else f"{magnitude}*{path}"
            if index == 0:
                parts.append(f"-{body}" if coefficient < 0 else body)
            else:
                parts.append(f"{'-' if coefficient < 0 else '+'} {body}")
        return " ".join(parts)


@dataclass(frozen=True)
class Presentation:
    """A bound quiver: quiver, relation generators and the bound m.

    The presented ideal is the one generated by the relations plus every
    path of length >= m.
    """

    quiver: Quiver
    relations: tuple[LinComb, ...]
    bound: int

    def __post_init__(self) -> None:
        if self.bound < 2:
            raise ModelError("The bound m must be >= 2.")
        for relation in self.relations:
            if relation.is_zero:
                raise ModelError("Relations must be nonzero.")
            for path in relation.paths:
                if not 2 <= path.length <= self.bound - 1:
                    raise ModelError(
                        f"term {path} has length {path.length}, outside [2, {self.bound - 1}]"
                    )
