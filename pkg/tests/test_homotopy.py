from __future__ import annotations

import pytest

from quiverhh_core import ModelError
from quiverhh_homotopy import (
    LEFT,
    RIGHT,
    build_sigma,
    check_homotopy_coherent,
    compute_classes,
    find_compatible_family,
    splits,
)
from quiverhh_quiver import Path, path_from_arrows

SIGMA1_EDGES = {
    ("e_1", "alpha"),
    ("e_1", "beta"),
    ("e_2", "alpha"),
    ("e_2", "beta"),
    ("e_2", "gamma"),
    ("e_3", "gamma"),
    ("beta", "beta.gamma"),
    ("gamma", "beta.gamma"),
}


def _path(a, *names: str) -> Path:
    return path_from_arrows(a.quiver, names)


def test_binomial_relation_joins_classes(load_algebra):
    a = load_algebra("ejemplo_i2.bqp")
    classes = compute_classes(a)
    joined = classes.class_of(_path(a, "alpha", "gamma"))
    assert classes.members(joined) == (_path(a, "alpha", "gamma"), _path(a, "beta", "gamma"))
    assert classes.is_clean(joined)
    assert all(len(members) == 1 for i, members in enumerate(classes.classes) if i != joined)


def test_monomial_relation_flags_its_class(load_algebra):
    a = load_algebra("ejemplo_i1.bqp")
    classes = compute_classes(a)
    assert not classes.is_clean(classes.class_of(_path(a, "alpha", "gamma")))
    assert classes.is_clean(classes.class_of(_path(a, "beta", "gamma")))
    assert all(len(members) == 1 for members in classes.classes)
    assert check_homotopy_coherent(classes) == (True, None)


def test_paths_beyond_the_bound_have_no_class(load_algebra):
    a = load_algebra("two_cycle_f2.bqp")
    classes = compute_classes(a)
    assert classes.class_of(_path(a, "a", "b")) is None
    assert classes.clean_class_of(_path(a, "a")) is not None


def test_incoherent_presentation_has_a_witness(load_algebra):
    classes = compute_classes(load_algebra("incoherent.bqp"))
    coherent, witness = check_homotopy_coherent(classes)
    assert not coherent
    assert [str(p) for p in witness] == ["a.d.e", "b.d.e"]
    with pytest.raises(ModelError, match="not homotopy coherent"):
        build_sigma(classes)


def test_status_line(load_algebra):
    messages: list[str] = []
    compute_classes(load_algebra("ejemplo_i2.bqp"), on_status=messages.append)
    assert len(messages) == 1
    assert messages[0].startswith("Path classes stable after")


def test_splits_cover_every_factorisation(load_algebra):
    a = load_algebra("ejemplo_i1.bqp")
    classes = compute_classes(a)
    found = list(splits(classes, _path(a, "beta", "gamma")))
    # (start, stop) with 0 <= start <= stop <= 2
    assert len(found) == 6
    assert (Path.trivial("1"), _path(a, "beta"), _path(a, "gamma")) in found


def test_sigma1(load_algebra):
    sigma = build_sigma(compute_classes(load_algebra("ejemplo_i1.bqp")))
    assert sigma.poset.elements == ("e_1", "e_2", "e_3", "alpha", "beta", "gamma", "beta.gamma")
    assert set(sigma.poset.hasse_edges()) == SIGMA1_EDGES
    assert len(sigma.poset.hasse_edges()) == 8


def test_sigma2_adds_one_edge(load_algebra):
    a = load_algebra("ejemplo_i2.bqp")
    sigma = build_sigma(compute_classes(a))
    assert set(sigma.poset.hasse_edges()) == SIGMA1_EDGES | {("alpha", "beta.gamma")}
    top = sigma.poset.index("beta.gamma")
    assert sigma.members(top) == (_path(a, "alpha", "gamma"), _path(a, "beta", "gamma"))
    assert sigma.element_of(_path(a, "alpha", "gamma")) == top


@pytest.mark.parametrize(("name", "arrows"), [("kronecker2.bqp", 2), ("kronecker3.bqp", 3)])
def test_kronecker_sigma(load_algebra, name: str, arrows: int):
    sigma = build_sigma(compute_classes(load_algebra(name)))
    assert sigma.size == 2 + arrows
    assert len(sigma.poset.hasse_edges()) == 2 * arrows
    assert all(upper in {"e_1", "e_2"} for upper, _ in sigma.poset.hasse_edges())


def test_right_family_of_ejemplo(load_algebra):
    a = load_algebra("ejemplo_i1.bqp")
    classes = compute_classes(a)
    sigma = build_sigma(classes)
    family = find_compatible_family(classes, sigma, RIGHT)
    assert family is not None
    index = sigma.poset.index
    assert family(index("e_1"), index("alpha")) == _path(a, "alpha")
    assert family(index("beta"), index("beta.gamma")) == _path(a, "gamma")
    assert family(index("gamma"), index("beta.gamma")) == Path.trivial("3")


@pytest.mark.parametrize(
    ("name", "right", "left"),
    [
        ("ejemplo_i1.bqp", True, True),
        ("ejemplo_i2.bqp", True, False),
        ("ejemplo_no.bqp", False, False),
        ("sigma2.poset", True, True),
    ],
)
def test_compatibility(load_algebra, name: str, right: bool, left: bool):
    classes = compute_classes(load_algebra(name))
    sigma = build_sigma(classes)
    assert (find_compatible_family(classes, sigma, RIGHT) is not None) == right
    assert (find_compatible_family(classes, sigma, LEFT) is not None) == left


def test_unknown_side(load_algebra):
    classes = compute_classes(load_algebra("ejemplo_i1.bqp"))
    with pytest.raises(ModelError):
        find_compatible_family(classes, build_sigma(classes), "up")
