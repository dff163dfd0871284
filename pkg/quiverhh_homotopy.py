"""Path classes under ~, the poset of clean classes and compatible families.

~ is generated by (a) paths sharing a minimal relation and (b) closure under
left and right concatenation. Only paths of length < m are tracked. For a
coherent presentation every member of a clean class is shorter than m, so
the capped union-find is exact; for an incoherent one a rewrite step always
swaps factors of length < m, so the flags still catch the incoherence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from networkx.utils import UnionFind

from quiverhh_algebra import BoundAlgebra, MinimalRelationBlocks, minimal_relation_blocks
from quiverhh_core import ModelError, StatusCallback
from quiverhh_poset import Poset
from quiverhh_quiver import Arrow, Path, compose, enumerate_paths, subpath

RIGHT = "right"
LEFT = "left"


@dataclass(frozen=True, eq=False)
class PathClasses:
    algebra: BoundAlgebra
    classes: tuple[tuple[Path, ...], ...]
    class_index: dict[Path, int]
    touches_ideal: tuple[bool, ...]
    evidence: tuple[Path | None, ...]
    witness: tuple[Path, Path] | None

    @property
    def coherent(self) -> bool:
        return self.witness is None

    def class_of(self, path: Path) -> int | None:
        """Class id, or None for paths beyond the bound (they lie in I)."""

        return self.class_index.get(path)

    def members(self, class_id: int) -> tuple[Path, ...]:
        return self.classes[class_id]

    def is_clean(self, class_id: int | None) -> bool:
        return class_id is not None and not self.touches_ideal[class_id]

    def clean_class_of(self, path: Path) -> int | None:
        class_id = self.class_of(path)
        return class_id if self.is_clean(class_id) else None


def _extend(path: Path, arrow: Arrow, side: str) -> Path | None:
    if side == LEFT:
        if arrow.target != path.source:
            return None
        return Path(arrow.source, path.target, (arrow.name,) + path.arrows)
    if path.target != arrow.source:
        return None
    return Path(path.source, arrow.target, path.arrows + (arrow.name,))


def compute_classes(
    a: BoundAlgebra,
    blocks: MinimalRelationBlocks | None = None,
    *,
    on_status: StatusCallback | None = None,
) -> PathClasses:
    blocks = blocks or minimal_relation_blocks(a)
    limit = a.bound - 1
    paths = enumerate_paths(a.quiver, limit)
    arrows = sorted(a.quiver.arrows, key=lambda arrow: arrow.name)

    union = UnionFind(paths)
    for block in blocks.all_blocks():
        if len(block) >= 2:
            union.union(*block)

    # path -> a path of I equivalent to it (possibly longer than the bound)
    evidence: dict[Path, Path] = {p: p for p in paths if not p.is_trivial and a.is_zero_path(p)}

    rounds = 0
    changed = True
    while changed:
        changed = False
        rounds += 1
        for group in union.to_sets():
            members = sorted(group)
            known = next((evidence[m] for m in members if m in evidence), None)
            for arrow in arrows:
                for side in (LEFT, RIGHT):
                    inside: list[Path] = []
                    outside: list[Path] = []
                    for member in members:
                        extended = _extend(member, arrow, side)
                        if extended is None:
                            continue
                        (inside if extended.length <= limit else outside).append(extended)
                    if not inside:
                        continue
                    root = union[inside[0]]
                    if any(union[x] != root for x in inside[1:]):
                        union.union(*inside)
                        changed = True
                    if outside:
                        proof = outside[0]
                    elif known is not None:
                        proof = _extend(known, arrow, side)
                    else:
                        continue
                    if inside[0] not in evidence:
                        evidence[inside[0]] = proof
                        changed = True
    if on_status:
        on_status(f"Path classes stable after {rounds} round(s)")

    classes = sorted(tuple(sorted(group)) for group in union.to_sets())
    class_index = {p: i for i, members in enumerate(classes) for p in members}
    flags = []
    proofs: list[Path | None] = []
    witness = None
    for members in classes:
        proof = next((evidence[m] for m in members if m in evidence), None)
        flags.append(proof is not None)
        proofs.append(proof)
        if proof is not None and witness is None:
            outlier = next((m for m in members if not a.is_zero_path(m)), None)
            if outlier is not None:
                witness = (proof, outlier)
    return PathClasses(a, tuple(classes), class_index, tuple(flags), tuple(proofs), witness)


def check_homotopy_coherent(c: PathClasses, a: BoundAlgebra | None = None) -> tuple[bool, tuple[Path, Path] | None]:
    """True iff every class touching I lies in I; otherwise (w in I, w' not in I)."""

    return c.witness is None, c.witness


def splits(c: PathClasses, path: Path) -> Iterator[tuple[Path, Path, Path]]:
    """Every factorisation path = u.w.v, trivial factors included."""

    quiver = c.algebra.quiver
    for start in range(path.length + 1):
        for stop in range(start, path.length + 1):
            yield (
                subpath(quiver, path, 0, start),
                subpath(quiver, path, start, stop),
                subpath(quiver, path, stop, path.length),
            )


@dataclass(frozen=True, eq=False)
class AssociatedPoset:
    classes: PathClasses
    poset: Poset
    class_ids: tuple[int, ...]
    representatives: tuple[Path, ...]

    @property
    def size(self) -> int:
        return self.poset.size

    def members(self, element: int) -> tuple[Path, ...]:
        return self.classes.members(self.class_ids[element])

    def element_of_class(self, class_id: int | None) -> int | None:
        if class_id is None:
            return None
        return self._by_class.get(class_id)

    def element_of(self, path: Path) -> int | None:
        return self.element_of_class(self.classes.class_of(path))

    @property
    def _by_class(self) -> dict[int, int]:
        cache = self.__dict__.get("_by_class_cache")
        if cache is None:
            cache = {cid: i for i, cid in enumerate(self.class_ids)}
            self.__dict__["_by_class_cache"] = cache
        return cache


def build_sigma(c: PathClasses) -> AssociatedPoset:
    if not c.coherent:
        raise ModelError("not a poset; presentation is not homotopy coherent")
    a = c.algebra
    clean = [i for i in range(len(c.classes)) if c.is_clean(i)]

    def representative(class_id: int) -> Path:
        members = c.members(class_id)
        return next((m for m in members if a.is_basis_path(m)), members[0])

    clean.sort(key=lambda i: representative(i).sort_key())
    names = [str(representative(i)) for i in clean]
    element = {class_id: k for k, class_id in enumerate(clean)}

    relations = set()
    for lower, class_id in enumerate(clean):
        for member in c.members(class_id):
            for u, w, v in splits(c, member):
                upper = element.get(c.class_of(w))
                if upper is None or upper == lower:
                    continue
                if c.is_clean(c.class_of(u)) and c.is_clean(c.class_of(v)):
                    relations.add((names[upper], names[lower]))
    try:
        poset = Poset.from_relations(names, sorted(relations))
    except ModelError as exc:
        raise ModelError("not a poset; presentation is not homotopy coherent") from exc
    return AssociatedPoset(c, poset, tuple(clean), tuple(representative(i) for i in clean))


@dataclass(frozen=True)
class CompatibleFamily:
    """u(s, s') (right side) or v(s, s') (left side) per comparable pair."""

    side: str
    choices: dict[tuple[int, int], Path]

    def __call__(self, s: int, s_prime: int) -> Path:
        return self.choices[(s, s_prime)]


def _candidates(c: PathClasses, sigma: AssociatedPoset, s: int, s_prime: int, side: str) -> list[Path]:
    wanted = sigma.class_ids[s]
    best: dict[int, Path] = {}
    for member in sigma.members(s_prime):
        for u, w, v in splits(c, member):
            if c.class_of(w) != wanted:
                continue
            chosen, other = (v, u) if side == RIGHT else (u, v)
            if not c.is_clean(c.class_of(other)):
                continue
            chosen_class = c.class_of(chosen)
            if not c.is_clean(chosen_class):
                continue
            if chosen_class not in best or chosen < best[chosen_class]:
                best[chosen_class] = chosen
    return sorted(best.values())


def _product_class(c: PathClasses, first: Path, second: Path) -> int | None:
    if first.target != second.source:
        return None
    return c.class_of(compose(first, second))


def find_compatible_family(
    c: PathClasses,
    sigma: AssociatedPoset,
    side: str = RIGHT,
    *,
    on_status: StatusCallback | None = None,
) -> CompatibleFamily | None:
    """Backtracking search for the lexicographically first compatible family.

    Right: class(u(s,s') u(s',s'')) = class(u(s,s'')) on every 2-chain.
    Left: class(v(s',s'') v(s,s')) = class(v(s,s'')).
    """

    if side not in (RIGHT, LEFT):
        raise ModelError(f"side must be right or left, got {side!r}")
    poset = sigma.poset
    pairs = [(i, j) for i in range(poset.size) for j in range(poset.size) if poset.is_greater(i, j)]
    order = {pair: k for k, pair in enumerate(pairs)}
    candidates = [_candidates(c, sigma, i, j, side) for i, j in pairs]
    if any(not options for options in candidates):
        return None

    # triples whose last-assigned pair is k get checked when k is assigned
    checks: list[list[tuple[int, int, int]]] = [[] for _ in pairs]
    for i, j in pairs:
        for k in range(poset.size):
            if poset.is_greater(j, k):
                triple = (order[(i, j)], order[(j, k)], order[(i, k)])
                checks[max(triple)].append(triple)

    def consistent(position: int, chosen: list[Path]) -> bool:
        for upper, lower, outer in checks[position]:
            if side == RIGHT:
                product = _product_class(c, chosen[upper], chosen[lower])
            else:
                product = _product_class(c, chosen[lower], chosen[upper])
            if product is None or product != c.class_of(chosen[outer]):
                return False
        return True

    chosen: list[Path] = []
    cursor = [0] * len(pairs)
    position = 0
    while 0 <= position < len(pairs):
        options = candidates[position]
        placed = False
        while cursor[position] < len(options):
            del chosen[position:]
            chosen.append(options[cursor[position]])
            cursor[position] += 1
            if consistent(position, chosen):
                placed = True
                break
        if placed:
            position += 1
        else:
            cursor[position] = 0
            del chosen[position:]
            position -= 1

    if position < 0:
        if on_status:
            on_status(f"No {side} compatible family")
        return None
    return CompatibleFamily(side, {pair: chosen[k] for k, pair in enumerate(pairs)})
