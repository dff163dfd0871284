from __future__ import annotations

import pytest

from quiverhh_config import FieldSpec
from quiverhh_hochschild import (
    cochain_basis,
    hochschild_cocycles,
    hochschild_complex,
    hochschild_differential,
    hochschild_dims,
    tensor_basis,
)
from quiverhh_linalg import is_zero, matmul, rank, same_matrix
from quiverhh_quiver import Path


def test_base_field(load_algebra):
    a = load_algebra("point.bqp")
    assert tensor_basis(a, 0) == [(Path.trivial("1"),)]
    assert tensor_basis(a, 1) == []
    assert hochschild_dims(a, 3) == [1, 0, 0, 0]


def test_ejemplo_low_degrees(load_algebra):
    a = load_algebra("ejemplo_i1.bqp")
    assert cochain_basis(a, 0).dim == 3
    assert rank(hochschild_differential(a, 0)) == 2
    # tuples alpha, beta into A(1,2) of dim 2; gamma and beta.gamma into 1-dim spaces
    assert cochain_basis(a, 1).dim == 6
    assert [[str(p) for p in t] for t in tensor_basis(a, 2)] == [["alpha", "gamma"], ["beta", "gamma"]]
    assert tensor_basis(a, 3) == []


@pytest.mark.parametrize(
    ("name", "max_degree", "expected"),
    [
        ("ejemplo_i1.bqp", 3, [1, 2, 0, 0]),
        ("sigma1.poset", 3, [1, 1, 0, 0]),
        ("sigma2.poset", 3, [1, 0, 0, 0]),
        ("kronecker2.bqp", 2, [1, 3, 0]),
        ("kronecker3.bqp", 2, [1, 8, 0]),
        ("crown.poset", 2, [1, 1, 0]),
        ("two_cycle_f2.bqp", 5, [1, 1, 1, 1, 1, 1]),
        ("three_cycle_f2.bqp", 7, [1, 1, 0, 0, 0, 0, 1, 1]),
    ],
)
def test_hochschild_dims(load_algebra, name: str, max_degree: int, expected: list[int]):
    assert hochschild_dims(load_algebra(name), max_degree) == expected


@pytest.mark.parametrize("name", ["ejemplo_i2.bqp", "ejemplo_no.bqp", "three_cycle_f2.bqp", "loop_x2_x3.bqp"])
def test_differential_squares_to_zero(load_algebra, name: str):
    a = load_algebra(name)
    for n in range(3):
        assert is_zero(matmul(hochschild_differential(a, n + 1), hochschild_differential(a, n)))


def test_threads_give_the_same_matrices(load_algebra):
    a = load_algebra("q3_f2.bqp")
    for n in range(3):
        assert same_matrix(hochschild_differential(a, n), hochschild_differential(a, n, threads=3))


def test_complex_report_and_status(load_algebra):
    messages: list[str] = []
    report = hochschild_complex(load_algebra("kronecker2.bqp"), 2, on_status=messages.append)
    assert report.cochain_dims == (2, 4, 0, 0)
    assert report.ranks == (1, 0, 0)
    assert messages == ["Degree 0: 2 cochains", "Degree 1: 4 cochains", "Degree 2: 0 cochains"]


def test_prime_field(load_algebra):
    assert hochschild_dims(load_algebra("ejemplo_i1.bqp", FieldSpec.parse("fp:32003")), 3) == [1, 2, 0, 0]


def test_cocycles(load_algebra):
    point = hochschild_cocycles(load_algebra("point.bqp"), 0)
    assert point == [[1]]

    a = load_algebra("ejemplo_i1.bqp")
    # HH^1 = 2 plus the rank 2 of b^0
    assert len(hochschild_cocycles(a, 1)) == 4
