"""The algebra A = kQ/I of a presentation as finite linear-algebra data.

For every vertex pair (x, y) the paths x -> y of length 1..m-1 are the
coordinates of a vector space. The ideal meets that space in the span of all
u*g*v (g a generator) with terms of length >= m dropped, which is exact
because every path of length >= m lies in I. The RREF of that span gives:

* the basis of A(x, y): the non-pivot paths, plus e_x when x == y;
* normal forms: a pivot path equals minus the rest of its RREF row.

Minimal-relation blocks are the connected components of the co-occurrence
graph of the RREF rows. Projecting an ideal element onto a block of any
support decomposition keeps it in the ideal, and an RREF row is pinned down
by its pivot pattern, so the rows never straddle two blocks of a valid
decomposition. The components are therefore the finest decomposition, and
two support paths share a minimal relation exactly when they share a
component.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any

from networkx.utils import UnionFind

from quiverhh_config import FieldSpec
from quiverhh_core import StatusCallback
from quiverhh_linalg import entries, matrix, member_of_span, rref
from quiverhh_quiver import LinComb, Path, Presentation, compose, enumerate_paths

Pair = tuple[str, str]
Element = dict[Path, Any]


@dataclass(frozen=True)
class PairSpace:
    source: str
    target: str
    coords: tuple[Path, ...]
    ideal_rows: tuple[tuple[Any, ...], ...]
    pivots: tuple[int, ...]
    basis: tuple[Path, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True, eq=False)
class BoundAlgebra:
    presentation: Presentation
    field: FieldSpec
    pairs: dict[Pair, PairSpace]
    _locations: dict[Path, tuple[Pair, int]] = field(repr=False)
    _nf_cache: dict[Path, Element] = field(default_factory=dict, repr=False)
    _tensor_cache: dict[int, list] = field(default_factory=dict, repr=False)

    @property
    def quiver(self):
        return self.presentation.quiver

    @property
    def bound(self) -> int:
        return self.presentation.bound

    @property
    def domain(self) -> Any:
        return self.field.domain

    def pair(self, x: str, y: str) -> PairSpace | None:
        return self.pairs.get((x, y))

    def basis(self, x: str, y: str) -> tuple[Path, ...]:
        space = self.pairs.get((x, y))
        return space.basis if space else ()

    def dim_pair(self, x: str, y: str) -> int:
        return len(self.basis(x, y))

    @property
    def dim(self) -> int:
        return sum(space.dim for space in self.pairs.values())

    def all_basis(self) -> list[Path]:
        return sorted(p for space in self.pairs.values() for p in space.basis)

    def radical_basis(self) -> list[Path]:
        return [p for p in self.all_basis() if not p.is_trivial]

    def is_basis_path(self, p: Path) -> bool:
        return p in self.basis(p.source, p.target)

    def normal_form(self, path: Path) -> Element:
        """Coordinates of the class of `path` in the monomial basis of A."""

        cached = self._nf_cache.get(path)
        if cached is not None:
            return cached
        K = self.domain
        if path.is_trivial:
            result = {path: K.one}
        elif path.length >= self.bound:
            result = {}
        else:
            pair, column = self._locations[path]
            space = self.pairs[pair]
            if column not in space.pivots:
                result = {path: K.one}
            else:
                row = space.ideal_rows[space.pivots.index(column)]
                result = {
                    space.coords[j]: -value
                    for j, value in enumerate(row)
                    if j not in space.pivots and value
                }
        self._nf_cache[path] = result
        return result

    def is_zero_path(self, path: Path) -> bool:
        return not self.normal_form(path)

    def product(self, p: Path, q: Path) -> Element:
        """Product of two paths reduced to the basis; {} when not composable."""

        if p.target != q.source:
            return {}
        return self.normal_form(compose(p, q))

    def multiply(self, a: Element, b: Element) -> Element:
        out: Element = {}
        for p, x in a.items():
            for q, y in b.items():
                for r, z in self.product(p, q).items():
                    out[r] = out.get(r, self.domain.zero) + x * y * z
        return {p: c for p, c in out.items() if c}


def _ideal_span_rows(
    p: Presentation,
    field: FieldSpec,
    max_len: int,
    locations: dict[Path, tuple[Pair, int]],
) -> dict[Pair, list[dict[int, Any]]]:
    """Rows u*g*v of every generator g, keeping terms of length <= max_len."""

    paths = enumerate_paths(p.quiver, max_len)
    ending_at: dict[str, list[Path]] = defaultdict(list)
    starting_at: dict[str, list[Path]] = defaultdict(list)
    for path in paths:
        ending_at[path.target].append(path)
        starting_at[path.source].append(path)

    rows: dict[Pair, list[dict[int, Any]]] = defaultdict(list)
    for relation in p.relations:
        shortest = min(path.length for path in relation.paths)
        terms = [(field.scalar(c), path) for c, path in relation.terms]
        for u in ending_at[relation.source]:
            for v in starting_at[relation.target]:
                if u.length + shortest + v.length > max_len:
                    continue
                row: dict[int, Any] = {}
                for coefficient, w in terms:
                    if u.length + w.length + v.length > max_len:
                        continue
                    pair, column = locations[compose(compose(u, w), v)]
                    row[column] = row.get(column, field.domain.zero) + coefficient
                row = {j: c for j, c in row.items() if c}
                if row:
                    rows[(u.source, v.target)].append(row)
    return rows


def _coordinates(p: Presentation, max_len: int) -> tuple[dict[Pair, list[Path]], dict[Path, tuple[Pair, int]]]:
    coords: dict[Pair, list[Path]] = defaultdict(list)
    for path in enumerate_paths(p.quiver, max_len):
        if path.length >= 1:
            coords[(path.source, path.target)].append(path)
    locations = {
        path: (pair, column) for pair, paths in coords.items() for column, path in enumerate(paths)
    }
    return coords, locations


def build_algebra(
    p: Presentation,
    field: FieldSpec | None = None,
    *,
    on_status: StatusCallback | None = None,
) -> BoundAlgebra:
    field = field or FieldSpec.rationals()
    K = field.domain
    if on_status:
        on_status("Building ideal subspaces...")
    coords, locations = _coordinates(p, p.bound - 1)
    rows = _ideal_span_rows(p, field, p.bound - 1, locations)

    pairs: dict[Pair, PairSpace] = {}
    vertices = p.quiver.vertices
    for x in vertices:
        for y in vertices:
            pair_coords = tuple(coords.get((x, y), ()))
            if not pair_coords and x != y:
                continue
            pair_rows = rows.get((x, y), [])
            reduced = rref(matrix(dict(enumerate(pair_rows)), (len(pair_rows), len(pair_coords)), K))
            ideal_rows = tuple(tuple(row) for row in entries(reduced.reduced)[: reduced.rank])
            pivot_set = set(reduced.pivot_cols)
            basis = tuple(c for j, c in enumerate(pair_coords) if j not in pivot_set)
            if x == y:
                basis = (Path.trivial(x),) + basis
            pairs[(x, y)] = PairSpace(x, y, pair_coords, ideal_rows, reduced.pivot_cols, basis)

    algebra = BoundAlgebra(p, field, pairs, locations)
    if on_status:
        on_status(f"dim A = {algebra.dim}")
    return algebra


def is_in_ideal(a: BoundAlgebra, v: LinComb) -> bool:
    """Membership in I; terms of length >= m are in I and are dropped first."""

    terms = [(c, path) for c, path in v.terms if path.length < a.bound]
    if not terms:
        return True
    if any(path.is_trivial for _, path in terms):
        return False
    space = a.pairs[(v.source, v.target)]
    vector = [a.domain.zero] * len(space.coords)
    for coefficient, path in terms:
        vector[space.coords.index(path)] = a.field.scalar(coefficient)
    return member_of_span(vector, [list(row) for row in space.ideal_rows], a.domain)


@dataclass(frozen=True)
class MinimalRelationBlocks:
    blocks: dict[Pair, tuple[tuple[Path, ...], ...]]

    def all_blocks(self) -> list[tuple[Path, ...]]:
        return [block for pair in self.blocks for block in self.blocks[pair]]

    def block_of(self, path: Path) -> tuple[Path, ...] | None:
        for block in self.blocks.get((path.source, path.target), ()):
            if path in block:
                return block
        return None


def minimal_relation_blocks(a: BoundAlgebra) -> MinimalRelationBlocks:
    result: dict[Pair, tuple[tuple[Path, ...], ...]] = {}
    for pair, space in a.pairs.items():
        if not space.ideal_rows:
            continue
        components = UnionFind()
        for row in space.ideal_rows:
            support = [space.coords[j] for j, value in enumerate(row) if value]
            components.union(*support)
        blocks = sorted(tuple(sorted(block)) for block in components.to_sets())
        result[pair] = tuple(blocks)
    return MinimalRelationBlocks(result)


@dataclass(frozen=True)
class AdmissibilityReport:
    generators_in_f2: bool
    bound_implied: bool
    unimplied_paths: tuple[Path, ...]
    bound: int

    @property
    def caveat(self) -> str:
        return (
            f"the bound check is necessary only: whether the ideal of the relations contains "
            f"F^{self.bound} is not decided here; the bound m={self.bound} is part of the presentation"
        )


def check_admissibility(a: BoundAlgebra) -> AdmissibilityReport:
    """(i) every generator term has length >= 2; (ii) every path of length m
    is congruent modulo F^{m+1} to an element of the ideal the generators span."""

    p = a.presentation
    m = p.bound
    generators_ok = all(path.length >= 2 for relation in p.relations for path in relation.paths)

    coords, locations = _coordinates(p, m)
    rows = _ideal_span_rows(p, a.field, m, locations)
    failing = []
    for path in enumerate_paths(p.quiver, m):
        if path.length != m:
            continue
        pair, column = locations[path]
        width = len(coords[pair])
        basis = [[row.get(j, a.domain.zero) for j in range(width)] for row in rows.get(pair, [])]
        unit = [a.domain.zero] * width
        unit[column] = a.domain.one
        if not member_of_span(unit, basis, a.domain):
            failing.append(path)
    return AdmissibilityReport(generators_ok, not failing, tuple(failing), m)


def is_schurian(a: BoundAlgebra) -> bool:
    return all(space.dim <= 1 for space in a.pairs.values())


def has_trivial_loops_only(a: BoundAlgebra) -> bool:
    """dim A(x, x) == 1 for every vertex x."""

    return all(a.dim_pair(x, x) == 1 for x in a.quiver.vertices)
