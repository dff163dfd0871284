"""Exact linear algebra on top of sympy's DomainMatrix.

Every matrix in the package is a sparse ``DomainMatrix`` over ``QQ`` or a
prime field ``GF(p)``. Elimination is sympy's leftmost-pivot RREF, so ranks,
pivots and kernel bases are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from sympy.polys.matrices import DomainMatrix

from quiverhh_core import LinalgError

Vector = list


@dataclass(frozen=True)
class RrefResult:
    reduced: DomainMatrix
    pivot_cols: tuple[int, ...]
    rank: int


@dataclass(frozen=True)
class CochainComplexReport:
    """Per-degree data of a finite stretch of a cochain complex.

    `cochain_dims[n]` is dim C^n for n = 0..N+1, `ranks[n]` the rank of the
    differential C^n -> C^{n+1} for n = 0..N and `cohomology[n]` the
    dimension of H^n for n = 0..N.
    """

    cochain_dims: tuple[int, ...]
    ranks: tuple[int, ...]
    cohomology: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        if len(self.cochain_dims) != len(self.ranks) + 1:
            raise LinalgError("Need one more cochain dimension than differential ranks.")
        dims = []
        for n, rank_n in enumerate(self.ranks):
            previous = self.ranks[n - 1] if n > 0 else 0
            dims.append(self.cochain_dims[n] - rank_n - previous)
        object.__setattr__(self, "cohomology", tuple(dims))


def matrix(
    rows: Mapping[int, Mapping[int, Any]],
    shape: tuple[int, int],
    domain: Any,
) -> DomainMatrix:
    """Sparse matrix from ``{row: {col: element}}``; zero entries are dropped."""

    nrows, ncols = shape
    clean: dict[int, dict[int, Any]] = {}
    for i, row in rows.items():
        if not 0 <= i < nrows:
            raise LinalgError(f"Row {i} outside a {nrows}x{ncols} matrix.")
        kept = {}
        for j, value in row.items():
            if not 0 <= j < ncols:
                raise LinalgError(f"Column {j} outside a {nrows}x{ncols} matrix.")
            if not domain.is_zero(value):
                kept[j] = value
        if kept:
            clean[i] = kept
    return DomainMatrix(clean, shape, domain)


def from_rows(rows: Sequence[Sequence[Any]], domain: Any, ncols: int | None = None) -> DomainMatrix:
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    entries = {}
    for i, row in enumerate(rows):
        if len(row) != ncols:
            raise LinalgError("Ragged rows.")
        entries[i] = {j: domain.convert(v) for j, v in enumerate(row)}
    return matrix(entries, (len(rows), ncols), domain)


def from_columns(columns: Sequence[Sequence[Any]], nrows: int, domain: Any) -> DomainMatrix:
    entries: dict[int, dict[int, Any]] = {}
    for j, column in enumerate(columns):
        if len(column) != nrows:
            raise LinalgError("Column length does not match the row count.")
        for i, value in enumerate(column):
            entries.setdefault(i, {})[j] = value
    return matrix(entries, (nrows, len(columns)), domain)


def zeros(shape: tuple[int, int], domain: Any) -> DomainMatrix:
    return DomainMatrix({}, shape, domain)


def entries(m: DomainMatrix) -> list[list[Any]]:
    nrows, ncols = m.shape
    if nrows == 0 or ncols == 0:
        return [[] for _ in range(nrows)]
    return m.to_list()


def rref(m: DomainMatrix) -> RrefResult:
    nrows, ncols = m.shape
    if nrows == 0 or ncols == 0:
        return RrefResult(m, (), 0)
    reduced, pivots = m.rref()
    pivots = tuple(int(p) for p in pivots)
    return RrefResult(reduced, pivots, len(pivots))


def rank(m: DomainMatrix) -> int:
    return rref(m).rank


def kernel_basis(m: DomainMatrix) -> list[Vector]:
    """Right null space, one vector per free column (increasing).

    Each vector has a 1 at its free column, zeros at the other free columns
    and is solved for at the pivot columns.
    """

    K = m.domain
    _, ncols = m.shape
    result = rref(m)
    rows = entries(result.reduced)
    pivot_set = set(result.pivot_cols)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector = [K.zero] * ncols
        vector[free] = K.one
        for i, pivot in enumerate(result.pivot_cols):
            vector[pivot] = -rows[i][free]
        basis.append(vector)
    return basis


def member_of_span(v: Sequence[Any], basis: Sequence[Sequence[Any]], domain: Any) -> bool:
    for b in basis:
        if len(b) != len(v):
            raise LinalgError(f"Dimension mismatch: {len(v)} vs {len(b)}.")
    if not basis:
        return all(domain.is_zero(x) for x in v)
    spanned = rank(from_rows(list(basis), domain, ncols=len(v)))
    return rank(from_rows([*basis, v], domain, ncols=len(v))) == spanned


def matmul(a: DomainMatrix, b: DomainMatrix) -> DomainMatrix:
    if a.domain != b.domain:
        raise LinalgError("Cannot multiply matrices over different fields.")
    if a.shape[1] != b.shape[0]:
        raise LinalgError(f"Shape mismatch: {a.shape} x {b.shape}.")
    if 0 in a.shape or 0 in b.shape:
        return zeros((a.shape[0], b.shape[1]), a.domain)
    return a.matmul(b)


def hstack(*blocks: DomainMatrix) -> DomainMatrix:
    if not blocks:
        raise LinalgError("Nothing to stack.")
    domain = blocks[0].domain
    nrows = blocks[0].shape[0]
    stacked: dict[int, dict[int, Any]] = {}
    offset = 0
    for block in blocks:
        if block.domain != domain or block.shape[0] != nrows:
            raise LinalgError("Blocks must share field and row count.")
        for i, row in enumerate(entries(block)):
            for j, value in enumerate(row):
                if not domain.is_zero(value):
                    stacked.setdefault(i, {})[offset + j] = value
        offset += block.shape[1]
    return matrix(stacked, (nrows, offset), domain)


def transpose(m: DomainMatrix) -> DomainMatrix:
    if 0 in m.shape:
        return zeros((m.shape[1], m.shape[0]), m.domain)
    return m.transpose()


def is_zero(m: DomainMatrix) -> bool:
    if 0 in m.shape:
        return True
    return m.is_zero_matrix


def same_matrix(a: DomainMatrix, b: DomainMatrix) -> bool:
    if a.shape != b.shape:
        return False
    return entries(a) == entries(b)


def first_difference(a: DomainMatrix, b: DomainMatrix) -> tuple[int, int] | None:
    """Position of the first differing entry, in row-major order."""

    if a.shape != b.shape:
        raise LinalgError(f"Shape mismatch: {a.shape} vs {b.shape}.")
    for i, (row_a, row_b) in enumerate(zip(entries(a), entries(b))):
        for j, (x, y) in enumerate(zip(row_a, row_b)):
            if x != y:
                return i, j
    return None


def apply(m: DomainMatrix, vector: Sequence[Any]) -> Vector:
    """Matrix times column vector."""

    rows = entries(m)
    K = m.domain
    if len(vector) != m.shape[1]:
        raise LinalgError("Vector length does not match the column count.")
    out = []
    for row in rows:
        total = K.zero
        for x, y in zip(row, vector):
            if x and y:
                total += x * y
        out.append(total)
    return out
