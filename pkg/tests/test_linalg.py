from __future__ import annotations

import pytest
from sympy.polys.domains import QQ

from quiverhh_config import FieldSpec
from quiverhh_core import LinalgError
from quiverhh_linalg import (
    CochainComplexReport,
    apply,
    first_difference,
    from_rows,
    hstack,
    is_zero,
    kernel_basis,
    matmul,
    matrix,
    member_of_span,
    rank,
    transpose,
    zeros,
)


def test_rank_and_kernel():
    m = from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]], QQ)
    assert rank(m) == 2
    kernel = kernel_basis(m)
    assert len(kernel) == 1
    assert apply(m, kernel[0]) == [0, 0, 0]
    # free column gets a 1
    assert kernel[0][2] == 1


def test_rank_depends_on_field():
    rows = [[1, 1], [1, -1]]
    assert rank(from_rows(rows, QQ)) == 2
    f2 = FieldSpec.parse("fp:2").domain
    assert rank(from_rows(rows, f2)) == 1


def test_empty_shapes():
    assert rank(zeros((0, 3), QQ)) == 0
    assert len(kernel_basis(zeros((0, 3), QQ))) == 3
    assert is_zero(zeros((2, 0), QQ))
    assert matmul(zeros((2, 0), QQ), zeros((0, 4), QQ)).shape == (2, 4)
    assert transpose(zeros((2, 0), QQ)).shape == (0, 2)


def test_member_of_span():
    basis = [[1, 0, 1], [0, 1, 1]]
    assert member_of_span([1, 1, 2], basis, QQ)
    assert not member_of_span([1, 1, 1], basis, QQ)
    assert member_of_span([0, 0, 0], [], QQ)
    with pytest.raises(LinalgError):
        member_of_span([1, 0], basis, QQ)


def test_sparse_matrix_bounds_and_zero_entries():
    m = matrix({0: {1: QQ(0)}, 1: {0: QQ(2)}}, (2, 2), QQ)
    assert rank(m) == 1
    with pytest.raises(LinalgError):
        matrix({2: {0: QQ(1)}}, (2, 2), QQ)


def test_hstack_and_first_difference():
    a = from_rows([[1], [0]], QQ)
    b = from_rows([[0], [1]], QQ)
    stacked = hstack(a, b)
    assert stacked.shape == (2, 2)
    assert rank(stacked) == 2
    assert first_difference(a, a) is None
    assert first_difference(a, b) == (0, 0)


def test_cochain_complex_report():
    report = CochainComplexReport((2, 4, 2), (1, 2))
    assert report.cohomology == (1, 1)
    with pytest.raises(LinalgError):
        CochainComplexReport((2, 4), (1, 2))
