"""The comparison morphism Phi*: Hom(SC_*, k) -> C^*(A) and its contraction.

Everything is materialised as explicit matrices over the working field:

* `t_map` is the recursive chain value T_n(w_1, ..., w_n);
* `phi_matrix(n)` has rows indexed by the Hochschild cochain basis and
  columns by the n-chains of the associated poset;
* `g_map` is the homotopy G^n built from a right compatible family, and
  S_{n+1} f = f o G^n is checked on a basis of Ker Phi^n.

Chain values are plain dicts `{chain: coefficient}` with no zero entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from sympy.polys.matrices import DomainMatrix

from quiverhh_algebra import BoundAlgebra, build_algebra, has_trivial_loops_only
from quiverhh_config import FieldSpec
from quiverhh_core import ModelError, NotComposableError, StatusCallback, VerificationError, sign
from quiverhh_hochschild import cochain_basis, hochschild_differential, tensor_basis
from quiverhh_homotopy import (
    RIGHT,
    AssociatedPoset,
    CompatibleFamily,
    PathClasses,
    build_sigma,
    compute_classes,
    find_compatible_family,
    splits,
)
from quiverhh_linalg import (
    apply,
    first_difference,
    from_columns,
    hstack,
    kernel_basis,
    matmul,
    matrix,
    rank,
    same_matrix,
    transpose,
    zeros,
)
from quiverhh_poset import Chain, Poset, chains, incidence_presentation, simplicial_boundary
from quiverhh_quiver import Path, compose, compose_all

SimplicialChainValue = dict[Chain, Any]
Tensor = tuple[Path, ...]


@dataclass(frozen=True, eq=False)
class ComparisonContext:
    algebra: BoundAlgebra
    classes: PathClasses
    sigma: AssociatedPoset
    family: CompatibleFamily | None
    _t_cache: dict[Tensor, SimplicialChainValue] = field(default_factory=dict, repr=False)
    _g_cache: dict[Chain, SimplicialChainValue] = field(default_factory=dict, repr=False)
    _phi_cache: dict[int, DomainMatrix] = field(default_factory=dict, repr=False)
    _b_cache: dict[int, DomainMatrix] = field(default_factory=dict, repr=False)

    @property
    def poset(self) -> Poset:
        return self.sigma.poset

    @property
    def domain(self) -> Any:
        return self.algebra.domain

    def vertex_element(self, vertex: str) -> int:
        element = self.sigma.element_of(Path.trivial(vertex))
        if element is None:
            raise ModelError(f"vertex {vertex} has no element in the associated poset")
        return element

    def require_family(self) -> CompatibleFamily:
        if self.family is None:
            raise ModelError("no right compatible family; the contraction is unavailable")
        return self.family

    def describe(self, chain: Chain) -> str:
        return " > ".join(self.poset.elements[i] for i in chain)


def build_context(
    a: BoundAlgebra,
    *,
    classes: PathClasses | None = None,
    on_status: StatusCallback | None = None,
) -> ComparisonContext:
    """Classes, Sigma and the first right compatible family of a coherent presentation."""

    classes = classes or compute_classes(a, on_status=on_status)
    if not classes.coherent:
        evidence, outlier = classes.witness
        raise ModelError(
            f"presentation is not homotopy coherent: {evidence} lies in I, the equivalent {outlier} does not"
        )
    sigma = build_sigma(classes)
    if on_status:
        on_status(f"Associated poset has {sigma.size} elements")
    family = find_compatible_family(classes, sigma, RIGHT, on_status=on_status)
    return ComparisonContext(a, classes, sigma, family)


def _combine(K: Any, *parts: tuple[Any, SimplicialChainValue]) -> SimplicialChainValue:
    out: SimplicialChainValue = {}
    for scale, value in parts:
        for chain, coefficient in value.items():
            total = out.get(chain, K.zero) + scale * coefficient
            if total:
                out[chain] = total
            else:
                out.pop(chain, None)
    return out


def _append(ctx: ComparisonContext, value: SimplicialChainValue, element: int) -> SimplicialChainValue:
    out: SimplicialChainValue = {}
    for chain, coefficient in value.items():
        if not ctx.poset.is_greater(chain[-1], element):
            raise VerificationError(
                "appending an element does not give a strict chain",
                f"{ctx.describe(chain)} then {ctx.poset.elements[element]}",
            )
        out[chain + (element,)] = coefficient
    return out


def _check_composable(paths: Tensor) -> None:
    for left, right in zip(paths, paths[1:]):
        if left.target != right.source:
            raise NotComposableError(f"{left} ends at {left.target} but {right} starts at {right.source}")


def t_map(ctx: ComparisonContext, paths: Sequence[Path]) -> SimplicialChainValue:
    """T_n(w_1, ..., w_n); a single trivial path (e_x,) is the degree-0 input.

    T_0(e_x) = [e_x] and for n >= 1
    T_n(w) = [T_{n-1}(w_1..w_{n-1}) + (-1)^n T_{n-1}(w_2..w_n)] > [w_1...w_n],
    where an empty sub-tuple stands for the trivial path at that end. The
    value is 0 when the product has no element in the poset.
    """

    paths = tuple(paths)
    cached = ctx._t_cache.get(paths)
    if cached is not None:
        return cached
    if not paths:
        raise ModelError("T_n needs at least one path")
    K = ctx.domain
    if len(paths) == 1 and paths[0].is_trivial:
        result = {(ctx.vertex_element(paths[0].source),): K.one}
    else:
        if any(p.is_trivial for p in paths):
            raise ModelError("T_n takes positive-length paths")
        _check_composable(paths)
        element = ctx.sigma.element_of(compose_all(paths))
        if element is None:
            result = {}
        else:
            prefix = paths[:-1] or (Path.trivial(paths[0].source),)
            suffix = paths[1:] or (Path.trivial(paths[-1].target),)
            inner = _combine(K, (K.one, t_map(ctx, prefix)), (K(sign(len(paths))), t_map(ctx, suffix)))
            result = _append(ctx, inner, element)
    ctx._t_cache[paths] = result
    return result


def interior_boundary(paths: Sequence[Path]) -> list[tuple[int, Tensor]]:
    """The interior terms sum_{i=1..n} (-1)^i (w_0, ..., w_{i-1} w_i, ..., w_n)."""

    paths = tuple(paths)
    return [
        (sign(i), paths[: i - 1] + (compose(paths[i - 1], paths[i]),) + paths[i + 1 :])
        for i in range(1, len(paths))
    ]


def partial_boundary(paths: Sequence[Path]) -> list[tuple[int, Tensor]]:
    """d_{n+1}(w_0, ..., w_n) with d_1(w) = e_t(w) - e_s(w)."""

    paths = tuple(paths)
    if not paths:
        raise ModelError("the boundary needs at least one path")
    _check_composable(paths)
    if len(paths) == 1:
        w = paths[0]
        return [(1, (Path.trivial(w.target),)), (-1, (Path.trivial(w.source),))]
    n = len(paths) - 1
    return [(1, paths[1:]), *interior_boundary(paths), (sign(n + 1), paths[:-1])]


def chain_boundary(ctx: ComparisonContext, value: SimplicialChainValue) -> SimplicialChainValue:
    """delta applied to a chain value; 0-chains go to 0."""

    K = ctx.domain
    parts = []
    for chain, coefficient in value.items():
        if len(chain) == 1:
            continue
        for omit in range(len(chain)):
            parts.append((K(sign(omit)) * coefficient, {chain[:omit] + chain[omit + 1 :]: K.one}))
    return _combine(K, *parts)


def coboundary(ctx: ComparisonContext, n: int) -> DomainMatrix:
    """B^n: Hom(SC_n, k) -> Hom(SC_{n+1}, k) in the indicator bases."""

    cached = ctx._b_cache.get(n)
    if cached is None:
        cached = transpose(simplicial_boundary(ctx.poset, n, ctx.algebra.field))
        ctx._b_cache[n] = cached
    return cached


def _previous_coboundary(ctx: ComparisonContext, n: int) -> DomainMatrix:
    if n == 0:
        return zeros((len(chains(ctx.poset, 0)), 0), ctx.domain)
    return coboundary(ctx, n - 1)


def phi_matrix(ctx: ComparisonContext, n: int) -> DomainMatrix:
    """Phi^n(f)(w_1, ..., w_n) = f(T_n(w_1, ..., w_n)) * (w_1 ... w_n)."""

    cached = ctx._phi_cache.get(n)
    if cached is not None:
        return cached
    a = ctx.algebra
    space = cochain_basis(a, n)
    columns = chains(ctx.poset, n)
    column_index = {chain: j for j, chain in enumerate(columns)}
    rows: dict[int, dict[int, Any]] = {}
    for i, (tensor, value) in enumerate(space.keys):
        coefficient = a.normal_form(compose_all(tensor)).get(value)
        if not coefficient:
            continue
        for chain, c in t_map(ctx, tensor).items():
            rows.setdefault(i, {})[column_index[chain]] = c * coefficient
    result = matrix(rows, (space.dim, len(columns)), ctx.domain)
    ctx._phi_cache[n] = result
    return result


def phi_rank(ctx: ComparisonContext, n: int) -> int:
    return rank(phi_matrix(ctx, n))


def phi_surjective(ctx: ComparisonContext, n: int) -> bool:
    return phi_rank(ctx, n) == cochain_basis(ctx.algebra, n).dim


@dataclass(frozen=True)
class VerificationReport:
    name: str
    max_degree: int
    checked: int
    violation: str | None = None

    @property
    def passed(self) -> bool:
        return self.violation is None

    def raise_if_failed(self) -> None:
        if self.violation is not None:
            raise VerificationError(f"{self.name} failed", self.violation)


def _clean_tensors(ctx: ComparisonContext, n: int) -> Iterable[Tensor]:
    for tensor in tensor_basis(ctx.algebra, n):
        if ctx.sigma.element_of(compose_all(tensor)) is not None:
            yield tensor


def _format_tensor(tensor: Tensor) -> str:
    return "(" + ", ".join(str(p) for p in tensor) + ")"


def verify_chain_map(
    ctx: ComparisonContext,
    max_degree: int,
    *,
    on_status: StatusCallback | None = None,
) -> VerificationReport:
    """Phi^{n+1} B^n = b^n Phi^n and T_n d_{n+1} = delta_{n+1} T_{n+1}, for n < N."""

    a = ctx.algebra
    K = ctx.domain
    checked = 0
    for n in range(max_degree):
        if on_status:
            on_status(f"Chain map check in degree {n}")
        left = matmul(phi_matrix(ctx, n + 1), coboundary(ctx, n))
        right = matmul(hochschild_differential(a, n), phi_matrix(ctx, n))
        checked += 1
        if not same_matrix(left, right):
            i, j = first_difference(left, right)
            tensor, value = cochain_basis(a, n + 1).keys[i]
            chain = chains(ctx.poset, n)[j]
            return VerificationReport(
                "chain map",
                max_degree,
                checked,
                f"degree {n}: Phi B and b Phi differ at {_format_tensor(tensor)} -> {value}, chain {ctx.describe(chain)}",
            )
        for tensor in _clean_tensors(ctx, n + 1):
            checked += 1
            lhs = _combine(K, *((K(c), t_map(ctx, term)) for c, term in partial_boundary(tensor)))
            rhs = chain_boundary(ctx, t_map(ctx, tensor))
            if lhs != rhs:
                return VerificationReport(
                    "chain map", max_degree, checked, f"T d differs from delta T on {_format_tensor(tensor)}"
                )
    return VerificationReport("chain map", max_degree, checked)


def check_t_invariance(ctx: ComparisonContext, max_degree: int) -> VerificationReport:
    """T_n agrees on componentwise equivalent tuples (block-mate substitution)."""

    checked = 0
    classes = ctx.classes
    for n in range(1, max_degree + 1):
        for tensor in _clean_tensors(ctx, n):
            base = t_map(ctx, tensor)
            for position, w in enumerate(tensor):
                for mate in classes.members(classes.class_of(w)):
                    if mate == w:
                        continue
                    checked += 1
                    swapped = tensor[:position] + (mate,) + tensor[position + 1 :]
                    if t_map(ctx, swapped) != base:
                        return VerificationReport(
                            "T invariance",
                            max_degree,
                            checked,
                            f"{_format_tensor(tensor)} and {_format_tensor(swapped)} have different T values",
                        )
    return VerificationReport("T invariance", max_degree, checked)


def family_paths(ctx: ComparisonContext, chain: Chain) -> list[Path]:
    """u_i = u(s_{i-1}, s_i) for i = 1..n."""

    family = ctx.require_family()
    return [family(chain[i - 1], chain[i]) for i in range(1, len(chain))]


def g_map(ctx: ComparisonContext, chain: Sequence[int]) -> SimplicialChainValue:
    """The homotopy G^n on a strict chain s_0 > ... > s_n.

    G^0([w]) is 0 for trivial w and [e_t(w)] > [w] otherwise. For n >= 1 with
    Omega = {i : u_i trivial}: when Omega is nonempty or [u_1...u_n] = s_n,
    G^n = G^{n-1}(s_0..s_{n-1}) > s_n; otherwise
    G^n = [G^{n-1}(s_0..s_{n-1}) + (-1)^n T_n(u_1, ..., u_n)] > s_n.
    """

    chain = tuple(chain)
    cached = ctx._g_cache.get(chain)
    if cached is not None:
        return cached
    ctx.require_family()
    K = ctx.domain
    n = len(chain) - 1
    if n == 0:
        representative = ctx.sigma.representatives[chain[0]]
        if representative.is_trivial:
            result = {}
        else:
            result = {(ctx.vertex_element(representative.target), chain[0]): K.one}
    else:
        us = family_paths(ctx, chain)
        prefix = g_map(ctx, chain[:-1])
        omega = [i for i, u in enumerate(us, start=1) if u.is_trivial]
        if omega or ctx.sigma.element_of(compose_all(us)) == chain[-1]:
            inner = prefix
        else:
            inner = _combine(K, (K.one, prefix), (K(sign(n)), t_map(ctx, us)))
        result = _append(ctx, inner, chain[-1])
    ctx._g_cache[chain] = result
    return result


def _apply_g(ctx: ComparisonContext, value: SimplicialChainValue) -> SimplicialChainValue:
    return _combine(ctx.domain, *((c, g_map(ctx, chain)) for chain, c in value.items()))


def homotopy_value(ctx: ComparisonContext, chain: Chain) -> SimplicialChainValue:
    """(delta_{n+1} G^n + G^{n-1} delta_n)(chain)."""

    K = ctx.domain
    value = chain_boundary(ctx, g_map(ctx, chain))
    if len(chain) > 1:
        value = _combine(K, (K.one, value), (K.one, _apply_g(ctx, chain_boundary(ctx, {chain: K.one}))))
    return value


def expected_homotopy_value(ctx: ComparisonContext, chain: Chain) -> SimplicialChainValue:
    """chain itself when some u_i is trivial, otherwise chain - T_n(u_1, ..., u_n)."""

    K = ctx.domain
    if len(chain) == 1:
        target = ctx.sigma.representatives[chain[0]].target
        return _combine(K, (K.one, {chain: K.one}), (-K.one, t_map(ctx, (Path.trivial(target),))))
    us = family_paths(ctx, chain)
    if any(u.is_trivial for u in us):
        return {chain: K.one}
    return _combine(K, (K.one, {chain: K.one}), (-K.one, t_map(ctx, us)))


def verify_contraction(
    ctx: ComparisonContext,
    max_degree: int,
    *,
    on_status: StatusCallback | None = None,
) -> VerificationReport:
    """The homotopy identities up to degree N.

    Per chain: delta G + G delta matches `expected_homotopy_value`. Per
    tensor tuple: G^n T_n = 0. Per kernel vector f of Phi^n:
    f o (delta G + G delta) = f, i.e. S B + B S = id on Ker Phi^n.
    """

    family = ctx.require_family()
    classes = ctx.classes
    K = ctx.domain
    checked = 0
    for n in range(max_degree + 1):
        if on_status:
            on_status(f"Contraction check in degree {n}")
        basis = chains(ctx.poset, n)
        index = {chain: j for j, chain in enumerate(basis)}
        homotopy_rows: dict[int, dict[int, Any]] = {}
        for j, chain in enumerate(basis):
            checked += 1
            value = homotopy_value(ctx, chain)
            if value != expected_homotopy_value(ctx, chain):
                return VerificationReport(
                    "contraction", max_degree, checked, f"delta G + G delta is wrong on {ctx.describe(chain)}"
                )
            for target, c in value.items():
                homotopy_rows.setdefault(index[target], {})[j] = c
            if n >= 2 and family(chain[-2], chain[-1]).is_trivial:
                outer = family(chain[-3], chain[-1])
                inner = family(chain[-3], chain[-2])
                if classes.class_of(outer) != classes.class_of(inner):
                    return VerificationReport(
                        "contraction",
                        max_degree,
                        checked,
                        f"u({ctx.describe(chain[-3:-2])}, {ctx.describe(chain[-1:])}) = {outer} is not equivalent to {inner}",
                    )

        for tensor in tensor_basis(ctx.algebra, n):
            checked += 1
            if _apply_g(ctx, t_map(ctx, tensor)):
                return VerificationReport(
                    "contraction", max_degree, checked, f"G T is not zero on {_format_tensor(tensor)}"
                )

        homotopy = matrix(homotopy_rows, (len(basis), len(basis)), K)
        for f in kernel_basis(phi_matrix(ctx, n)):
            checked += 1
            image = apply(transpose(homotopy), f)
            if image != list(f):
                return VerificationReport(
                    "contraction", max_degree, checked, f"S B + B S is not the identity on Ker Phi^{n}"
                )
    return VerificationReport("contraction", max_degree, checked)


def kernel_complex_cohomology(ctx: ComparisonContext, max_degree: int) -> list[int]:
    """Cohomology dimensions of the subcomplex Ker Phi* for degrees 0..N."""

    K = ctx.domain
    kernels = []
    image_ranks = []
    for n in range(max_degree + 1):
        size = len(chains(ctx.poset, n))
        basis = kernel_basis(phi_matrix(ctx, n))
        kernels.append(len(basis))
        image_ranks.append(rank(matmul(coboundary(ctx, n), from_columns(basis, size, K))))
    return [
        kernels[n] - image_ranks[n] - (image_ranks[n - 1] if n > 0 else 0) for n in range(max_degree + 1)
    ]


@dataclass(frozen=True)
class InducedMapReport:
    degree: int
    domain_dim: int
    codomain_dim: int
    rank: int

    @property
    def injective(self) -> bool:
        return self.rank == self.domain_dim

    @property
    def surjective(self) -> bool:
        return self.rank == self.codomain_dim

    @property
    def verdict(self) -> str:
        if self.injective and self.surjective:
            return "isomorphism"
        if self.injective:
            return "injective"
        if self.surjective:
            return "surjective"
        return "neither"


def induced_hh_map(ctx: ComparisonContext, n: int) -> InducedMapReport:
    """HH(Phi^n): SH^n(Sigma) -> HH^n(A), by rank differencing.

    rank = rank[Phi^n Z | im b^{n-1}] - rank(b^{n-1}) with Z a basis of
    simplicial cocycles.
    """

    a = ctx.algebra
    K = ctx.domain
    size = len(chains(ctx.poset, n))
    cocycles = kernel_basis(coboundary(ctx, n))
    simplicial_dim = len(cocycles) - rank(_previous_coboundary(ctx, n))

    b_now = hochschild_differential(a, n)
    if n == 0:
        b_before = zeros((cochain_basis(a, 0).dim, 0), K)
    else:
        b_before = hochschild_differential(a, n - 1)
    rank_before = rank(b_before)
    hochschild_dim = b_now.shape[1] - rank(b_now) - rank_before

    images = matmul(phi_matrix(ctx, n), from_columns(cocycles, size, K))
    induced = rank(hstack(images, b_before)) - rank_before
    return InducedMapReport(n, simplicial_dim, hochschild_dim, induced)


@dataclass(frozen=True)
class InjectivityReport:
    degree: int
    coherent: bool
    right_compatible: bool
    previous_phi_surjective: bool
    trivial_loops_only: bool
    induced: InducedMapReport

    @property
    def hypotheses_hold(self) -> bool:
        return self.coherent and self.right_compatible and self.previous_phi_surjective

    @property
    def conclusion_holds(self) -> bool:
        return self.induced.injective

    @property
    def consistent(self) -> bool:
        return not self.hypotheses_hold or self.conclusion_holds


def injectivity_report(ctx: ComparisonContext, n: int) -> InjectivityReport:
    return InjectivityReport(
        degree=n,
        coherent=ctx.classes.coherent,
        right_compatible=ctx.family is not None,
        previous_phi_surjective=n == 0 or phi_surjective(ctx, n - 1),
        trivial_loops_only=has_trivial_loops_only(ctx.algebra),
        induced=induced_hh_map(ctx, n),
    )


def check_associated_sequences(ctx: ComparisonContext, max_length: int = 3) -> list[Chain]:
    """Chains where dropping an interior s_i does not merge u_i, u_{i+1} into u(s_{i-1}, s_{i+1})."""

    family = ctx.require_family()
    classes = ctx.classes
    failures = []
    for n in range(2, max_length + 1):
        for chain in chains(ctx.poset, n):
            for i in range(1, n):
                joined = compose(family(chain[i - 1], chain[i]), family(chain[i], chain[i + 1]))
                if classes.class_of(joined) != classes.class_of(family(chain[i - 1], chain[i + 1])):
                    failures.append(chain)
                    break
    return failures


def check_trivial_absorption(ctx: ComparisonContext) -> list[tuple[Path, Path]]:
    """Pairs (member, v) with [member] = [v][w] or [w][v] for a nontrivial clean v and [w] = [member]."""

    classes = ctx.classes
    failures = []
    for element, class_id in enumerate(ctx.sigma.class_ids):
        for member in ctx.sigma.members(element):
            for u, w, v in splits(classes, member):
                if classes.class_of(w) != class_id:
                    continue
                for extra in (u, v):
                    if not extra.is_trivial and classes.is_clean(classes.class_of(extra)):
                        failures.append((member, extra))
    return failures


@dataclass(frozen=True)
class EpsilonReport:
    max_degree: int
    cochain_dims: tuple[int, ...]
    chain_counts: tuple[int, ...]
    bijective: tuple[bool, ...]
    commutes: tuple[bool, ...]

    @property
    def passed(self) -> bool:
        return all(self.bijective) and all(self.commutes)


def epsilon_matrix(a: BoundAlgebra, p: Poset, n: int) -> DomainMatrix:
    """eps_n(f)(w_1, ..., w_n) = f(s_0 > ... > s_n) * (w_1 ... w_n) for an incidence algebra."""

    space = cochain_basis(a, n)
    columns = chains(p, n)
    column_index = {chain: j for j, chain in enumerate(columns)}
    rows: dict[int, dict[int, Any]] = {}
    for i, (tensor, value) in enumerate(space.keys):
        chain = (p.index(tensor[0].source),) + tuple(p.index(w.target) for w in tensor if not w.is_trivial)
        coefficient = a.normal_form(compose_all(tensor)).get(value)
        if coefficient:
            rows[i] = {column_index[chain]: coefficient}
    return matrix(rows, (space.dim, len(columns)), a.domain)


def epsilon_check(
    p: Poset,
    max_degree: int,
    field_spec: FieldSpec | None = None,
    *,
    on_status: StatusCallback | None = None,
) -> EpsilonReport:
    """eps_n is a bijection commuting with (B^n, b^n) for the incidence algebra of p."""

    a = build_algebra(incidence_presentation(p), field_spec, on_status=on_status)
    dims, counts, bijective, commutes = [], [], [], []
    for n in range(max_degree + 1):
        eps = epsilon_matrix(a, p, n)
        dims.append(eps.shape[0])
        counts.append(eps.shape[1])
        bijective.append(eps.shape[0] == eps.shape[1] and rank(eps) == eps.shape[0])
        if n < max_degree:
            b_simplicial = transpose(simplicial_boundary(p, n, a.field))
            left = matmul(epsilon_matrix(a, p, n + 1), b_simplicial)
            right = matmul(hochschild_differential(a, n), eps)
            commutes.append(same_matrix(left, right))
    return EpsilonReport(max_degree, tuple(dims), tuple(counts), tuple(bijective), tuple(commutes))
