from __future__ import annotations

import pytest

from quiverhh_core import ModelError
from quiverhh_hochschild import hochschild_dims
from quiverhh_inputs import serialize_poset
from quiverhh_linalg import entries, is_zero, matmul
from quiverhh_poset import (
    Poset,
    chains,
    incidence_presentation,
    iz_reduce,
    simplicial_boundary,
    simplicial_cohomology_dims,
)

BUNDLED_POSETS = [
    "chain2.poset",
    "chain3.poset",
    "chain4.poset",
    "diamond.poset",
    "crown.poset",
    "sigma1.poset",
    "sigma2.poset",
    "kronecker3_sigma.poset",
]


def test_cycle_in_relations_is_rejected():
    with pytest.raises(ModelError, match="cycle"):
        Poset.from_relations(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])


def test_chains(load_bundled_poset):
    chain2 = load_bundled_poset("chain2.poset")
    assert chains(chain2, 1) == [(0, 1)]
    assert chains(chain2, 2) == []
    assert len(chains(load_bundled_poset("sigma1.poset"), 0)) == 7
    assert len(chains(load_bundled_poset("crown.poset"), 1)) == 4


def test_simplicial_boundary_signs(load_bundled_poset):
    chain2 = load_bundled_poset("chain2.poset")
    assert entries(simplicial_boundary(chain2, 0)) == [[-1], [1]]

    chain3 = load_bundled_poset("chain3.poset")
    # rows a>b, a>c, b>c
    assert entries(simplicial_boundary(chain3, 1)) == [[1], [-1], [1]]


@pytest.mark.parametrize("name", BUNDLED_POSETS)
def test_boundary_squares_to_zero(load_bundled_poset, name: str):
    p = load_bundled_poset(name)
    for n in range(3):
        assert is_zero(matmul(simplicial_boundary(p, n), simplicial_boundary(p, n + 1)))


@pytest.mark.parametrize(
    ("name", "expected"),
    [
        ("chain3.poset", [1, 0, 0]),
        ("diamond.poset", [1, 0, 0]),
        ("crown.poset", [1, 1, 0]),
        ("sigma1.poset", [1, 1, 0]),
        ("sigma2.poset", [1, 0, 0]),
        ("kronecker3_sigma.poset", [1, 2, 0]),
    ],
)
def test_simplicial_cohomology(load_bundled_poset, name: str, expected: list[int]):
    assert simplicial_cohomology_dims(load_bundled_poset(name), 2) == expected


def test_disconnected_poset_counts_components():
    p = Poset.from_relations(["a", "b", "c"], [("a", "b")])
    assert simplicial_cohomology_dims(p, 1) == [2, 0]


def test_reduce_sigma1(load_bundled_poset):
    reduced = iz_reduce(load_bundled_poset("sigma1.poset"))
    assert serialize_poset(reduced) == (
        "element e_1\nelement e_2\nelement e_3\nelement alpha\nelement beta.gamma\n"
        "cover e_1 alpha\ncover e_1 beta.gamma\ncover e_2 alpha\ncover e_2 beta.gamma\ncover e_3 beta.gamma\n"
    )


def test_reduce_sigma2_and_chain(load_bundled_poset):
    messages: list[str] = []
    reduced = iz_reduce(load_bundled_poset("sigma2.poset"), on_status=messages.append)
    assert reduced.elements == ("e_1", "e_2", "e_3", "beta.gamma")
    assert messages == ["Removing alpha", "Removing beta", "Removing gamma"]

    chain = iz_reduce(load_bundled_poset("chain3.poset"))
    assert chain.elements == ("a", "c")
    assert chain.hasse_edges() == [("a", "c")]


@pytest.mark.parametrize("name", BUNDLED_POSETS)
def test_reduction_keeps_cohomology(load_bundled_poset, name: str):
    p = load_bundled_poset(name)
    assert simplicial_cohomology_dims(iz_reduce(p), 3) == simplicial_cohomology_dims(p, 3)


def test_incidence_presentation(load_bundled_poset):
    chain2 = incidence_presentation(load_bundled_poset("chain2.poset"))
    assert chain2.relations == ()
    assert chain2.bound == 2

    diamond = incidence_presentation(load_bundled_poset("diamond.poset"))
    assert len(diamond.relations) == 1
    assert diamond.bound == 3

    sigma2 = incidence_presentation(load_bundled_poset("sigma2.poset"))
    assert len(sigma2.quiver.vertices) == 7
    # three parallel paths e_2 -> beta.gamma give three pairwise differences
    from_e2 = [r for r in sigma2.relations if (r.source, r.target) == ("e_2", "beta.gamma")]
    assert len(from_e2) == 3


@pytest.mark.parametrize("name", ["chain2.poset", "chain3.poset", "diamond.poset", "crown.poset", "sigma1.poset", "sigma2.poset"])
def test_incidence_hochschild_matches_simplicial(load_algebra, load_bundled_poset, name: str):
    assert hochschild_dims(load_algebra(name), 3) == simplicial_cohomology_dims(load_bundled_poset(name), 3)
