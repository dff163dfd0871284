"""The reduced Hochschild complex Hom_{E^e}(rad A^{(x)n}, A) of a bound algebra.

Degree-n tensor tuples are composable n-tuples of positive-length basis
paths; degree 0 has one tuple `(e_x,)` per vertex. A cochain basis element is
a pair (tuple, basis path parallel to the tuple).
"""

from __future__ import annotations

from dataclasses import dataclass
from multiprocessing.pool import ThreadPool
from typing import Any

from sympy.polys.matrices import DomainMatrix

from quiverhh_algebra import BoundAlgebra
from quiverhh_core import StatusCallback, sign
from quiverhh_linalg import CochainComplexReport, kernel_basis, matrix, rank
from quiverhh_quiver import Path

Tensor = tuple[Path, ...]
CochainKey = tuple[Tensor, Path]


def tensor_source(t: Tensor) -> str:
    return t[0].source


def tensor_target(t: Tensor) -> str:
    return t[-1].target


def tensor_basis(a: BoundAlgebra, n: int) -> list[Tensor]:
    """Composable n-tuples of radical basis paths in lexicographic order."""

    if n == 0:
        return [(Path.trivial(v),) for v in a.quiver.vertices]
    cache = a._tensor_cache
    if n in cache:
        return cache[n]
    radical = a.radical_basis()
    if n == 1:
        result = [(p,) for p in radical]
    else:
        starting: dict[str, list[Path]] = {}
        for p in radical:
            starting.setdefault(p.source, []).append(p)
        result = [t + (p,) for t in tensor_basis(a, n - 1) for p in starting.get(t[-1].target, [])]
    cache[n] = result
    return result


@dataclass(frozen=True)
class CochainSpace:
    degree: int
    keys: tuple[CochainKey, ...]
    index: dict[CochainKey, int]

    @property
    def dim(self) -> int:
        return len(self.keys)


def cochain_basis(a: BoundAlgebra, n: int) -> CochainSpace:
    keys = tuple(
        (t, path) for t in tensor_basis(a, n) for path in a.basis(tensor_source(t), tensor_target(t))
    )
    return CochainSpace(n, keys, {key: i for i, key in enumerate(keys)})


def _add(target: dict[int, Any], column: int, value: Any, K: Any) -> None:
    total = target.get(column, K.zero) + value
    if total:
        target[column] = total
    else:
        target.pop(column, None)


def _rows_for(
    a: BoundAlgebra,
    n: int,
    tensors: list[Tensor],
    source: CochainSpace,
    target: CochainSpace,
) -> dict[int, dict[int, Any]]:
    K = a.domain
    rows: dict[int, dict[int, Any]] = {}

    def contribute(tau_prime: Tensor, argument: Tensor, scale: Any, act) -> None:
        # act(value) multiplies f(argument) = value into the output coordinate space
        for value in a.basis(tensor_source(argument), tensor_target(argument)):
            column = source.index[(argument, value)]
            for out, coefficient in act(value).items():
                row = rows.setdefault(target.index[(tau_prime, out)], {})
                _add(row, column, scale * coefficient, K)

    for tau_prime in tensors:
        first, last = tau_prime[0], tau_prime[-1]
        head = tau_prime[1:] if n > 0 else (Path.trivial(first.target),)
        contribute(tau_prime, head, K.one, lambda value: a.product(first, value))
        for i in range(1, n + 1):
            merged = a.product(tau_prime[i - 1], tau_prime[i])
            for q, c in merged.items():
                argument = tau_prime[: i - 1] + (q,) + tau_prime[i + 1 :]
                contribute(tau_prime, argument, K(sign(i)) * c, lambda value: {value: K.one})
        tail = tau_prime[:-1] if n > 0 else (Path.trivial(last.source),)
        contribute(tau_prime, tail, K(sign(n + 1)), lambda value: a.product(value, last))
    return rows


def hochschild_differential(a: BoundAlgebra, n: int, *, threads: int = 1) -> DomainMatrix:
    """Matrix of b^n: C^n -> C^{n+1}; rows index C^{n+1}, columns C^n.

    (b^n f)(a_0, ..., a_n) = a_0 f(a_1, ..., a_n)
        + sum_{i=1..n} (-1)^i f(..., a_{i-1} a_i, ...)
        + (-1)^{n+1} f(a_0, ..., a_{n-1}) a_n.

    A product of two positive-length paths never has an idempotent part, so
    the interior terms only ever see radical basis paths.
    """

    source = cochain_basis(a, n)
    target = cochain_basis(a, n + 1)
    tensors = tensor_basis(a, n + 1)
    if threads > 1 and len(tensors) > threads:
        size = -(-len(tensors) // threads)
        chunks = [tensors[k : k + size] for k in range(0, len(tensors), size)]
        with ThreadPool(threads) as pool:
            parts = pool.map(lambda chunk: _rows_for(a, n, chunk, source, target), chunks)
        rows: dict[int, dict[int, Any]] = {}
        for part in parts:
            rows.update(part)
    else:
        rows = _rows_for(a, n, tensors, source, target)
    return matrix(rows, (target.dim, source.dim), a.domain)


def hochschild_complex(
    a: BoundAlgebra,
    max_degree: int,
    *,
    threads: int = 1,
    on_status: StatusCallback | None = None,
) -> CochainComplexReport:
    dims = [cochain_basis(a, n).dim for n in range(max_degree + 2)]
    ranks = []
    for n in range(max_degree + 1):
        if on_status:
            on_status(f"Degree {n}: {dims[n]} cochains")
        ranks.append(rank(hochschild_differential(a, n, threads=threads)))
    return CochainComplexReport(tuple(dims), tuple(ranks))


def hochschild_dims(
    a: BoundAlgebra,
    max_degree: int,
    *,
    threads: int = 1,
    on_status: StatusCallback | None = None,
) -> list[int]:
    return list(hochschild_complex(a, max_degree, threads=threads, on_status=on_status).cohomology)


def hochschild_cocycles(a: BoundAlgebra, n: int) -> list[list[Any]]:
    """Basis of ker b^n in the cochain basis of degree n."""

    return kernel_basis(hochschild_differential(a, n))

