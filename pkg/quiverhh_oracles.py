"""Slow independent computations used to cross-check the fast paths.

Each oracle refuses inputs above its size gate with a ModelError.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Any

from networkx.utils import UnionFind

from quiverhh_algebra import BoundAlgebra, Element, MinimalRelationBlocks, Pair
from quiverhh_core import ModelError, StatusCallback, sign
from quiverhh_linalg import from_rows, matrix, rank
from quiverhh_quiver import Path, enumerate_paths, subpath

MAX_ORACLE_DIM = 8
MAX_ORACLE_COLUMNS = 2000
MAX_SUPPORT = 12


def _quotient_basis(a: BoundAlgebra) -> tuple[list[Path], Path]:
    """Basis of A/k1: the basis of A without the idempotent of the first vertex."""

    dropped = Path.trivial(a.quiver.vertices[0])
    return [b for b in a.all_basis() if b != dropped], dropped


def _project(a: BoundAlgebra, element: Element, dropped: Path) -> Element:
    # e_{x0} = -(sum of the other idempotents) modulo k1
    out = {b: c for b, c in element.items() if b != dropped}
    c0 = element.get(dropped)
    if c0:
        for vertex in a.quiver.vertices[1:]:
            e = Path.trivial(vertex)
            total = out.get(e, a.domain.zero) - c0
            if total:
                out[e] = total
            else:
                out.pop(e, None)
    return out


def oracle_bar_dims(
    a: BoundAlgebra,
    max_degree: int,
    *,
    on_status: StatusCallback | None = None,
) -> list[int]:
    """HH dimensions from the normalized bar complex Hom_k((A/k1)^{(x)n}, A)."""

    basis = a.all_basis()
    if len(basis) > MAX_ORACLE_DIM:
        raise ModelError(f"oracle refuses: dim A = {len(basis)} exceeds {MAX_ORACLE_DIM}")
    quotient, dropped = _quotient_basis(a)
    # the last differential lands in degree N + 1
    columns = len(quotient) ** (max_degree + 1) * len(basis)
    if columns > MAX_ORACLE_COLUMNS:
        raise ModelError(
            f"oracle refuses: {columns} cochains in degree {max_degree + 1} exceed {MAX_ORACLE_COLUMNS}"
        )

    K = a.domain
    position = {b: i for i, b in enumerate(basis)}
    width = len(basis)

    def index_of(tensor: tuple[Path, ...], tensors: dict[tuple[Path, ...], int], value: Path) -> int:
        return tensors[tensor] * width + position[value]

    ranks = []
    dims = []
    for n in range(max_degree + 2):
        dims.append(len(quotient) ** n * width)
    for n in range(max_degree + 1):
        if on_status:
            on_status(f"Bar degree {n}: {dims[n]} cochains")
        sources = {t: i for i, t in enumerate(product(quotient, repeat=n))}
        rows: dict[int, dict[int, Any]] = {}

        def add(row_index: int, argument: tuple[Path, ...], scale: Any, act) -> None:
            for value in basis:
                column = index_of(argument, sources, value)
                for out, c in act(value).items():
                    row = rows.setdefault(row_index * width + position[out], {})
                    row[column] = row.get(column, K.zero) + scale * c

        for t_index, tensor in enumerate(product(quotient, repeat=n + 1)):
            first, last = tensor[0], tensor[-1]
            add(t_index, tensor[1:], K.one, lambda value: a.product(first, value))
            for i in range(1, n + 1):
                merged = _project(a, a.product(tensor[i - 1], tensor[i]), dropped)
                for q, c in merged.items():
                    argument = tensor[: i - 1] + (q,) + tensor[i + 1 :]
                    add(t_index, argument, K(sign(i)) * c, lambda value: {value: K.one})
            add(t_index, tensor[:-1], K(sign(n + 1)), lambda value: a.product(value, last))
        ranks.append(rank(matrix(rows, (dims[n + 1], dims[n]), K)))
    return [dims[n] - ranks[n] - (ranks[n - 1] if n else 0) for n in range(max_degree + 1)]


def center_dimension(a: BoundAlgebra) -> int:
    """dim Z(A): elements commuting with every idempotent and every arrow."""

    basis = a.all_basis()
    K = a.domain
    generators = [Path.trivial(v) for v in a.quiver.vertices]
    generators += [Path.of_arrow(arrow) for arrow in a.quiver.arrows]
    position = {b: i for i, b in enumerate(basis)}
    equations = []
    for g in generators:
        rows = [[K.zero] * len(basis) for _ in basis]
        for j, b in enumerate(basis):
            for out, c in a.product(g, b).items():
                rows[position[out]][j] += c
            for out, c in a.product(b, g).items():
                rows[position[out]][j] -= c
        equations.extend(rows)
    return len(basis) - rank(from_rows(equations, K, ncols=len(basis)))


def minimal_relation_blocks_bruteforce(a: BoundAlgebra) -> MinimalRelationBlocks:
    """Blocks as unions of circuits: minimal path sets whose normal forms are dependent."""

    K = a.domain
    result: dict[Pair, tuple[tuple[Path, ...], ...]] = {}
    for pair, space in a.pairs.items():
        support = sorted(
            {space.coords[j] for row in space.ideal_rows for j, value in enumerate(row) if value}
        )
        if not support:
            continue
        if len(support) > MAX_SUPPORT:
            raise ModelError(f"oracle refuses: support of size {len(support)} exceeds {MAX_SUPPORT}")
        basis = a.basis(*pair)

        def vector(path: Path) -> list[Any]:
            form = a.normal_form(path)
            return [form.get(b, K.zero) for b in basis]

        vectors = {path: vector(path) for path in support}
        circuits: list[frozenset[Path]] = []
        for size in range(1, len(support) + 1):
            for subset in combinations(support, size):
                chosen = frozenset(subset)
                if any(c <= chosen for c in circuits):
                    continue
                rows = [vectors[p] for p in subset]
                if rank(from_rows(rows, K, ncols=len(basis))) < size:
                    circuits.append(chosen)
        union = UnionFind(support)
        for circuit in circuits:
            union.union(*circuit)
        result[pair] = tuple(sorted(tuple(sorted(block)) for block in union.to_sets()))
    return MinimalRelationBlocks(result)


def path_classes_bruteforce(a: BoundAlgebra, blocks: MinimalRelationBlocks) -> list[tuple[Path, ...]]:
    """Classes of paths shorter than the bound under every single-factor rewrite."""

    limit = a.bound - 1
    paths = enumerate_paths(a.quiver, limit)
    union = UnionFind(paths)
    for path in paths:
        for start in range(path.length):
            for stop in range(start + 1, path.length + 1):
                block = blocks.block_of(subpath(a.quiver, path, start, stop))
                if block is None:
                    continue
                head = path.arrows[:start]
                tail = path.arrows[stop:]
                for mate in block:
                    rewritten = Path(path.source, path.target, head + mate.arrows + tail)
                    if rewritten.length <= limit:
                        union.union(path, rewritten)
    return sorted(tuple(sorted(group)) for group in union.to_sets())
