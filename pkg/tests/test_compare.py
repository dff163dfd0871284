from __future__ import annotations

from pathlib import Path as FilePath

import pytest

from quiverhh_compare import (
    VerificationReport,
    build_context,
    chain_boundary,
    check_associated_sequences,
    check_t_invariance,
    check_trivial_absorption,
    epsilon_check,
    g_map,
    induced_hh_map,
    injectivity_report,
    kernel_complex_cohomology,
    partial_boundary,
    phi_matrix,
    phi_surjective,
    t_map,
    verify_chain_map,
    verify_contraction,
)
from quiverhh_core import ModelError, NotComposableError, VerificationError
from quiverhh_hochschild import cochain_basis
from quiverhh_linalg import rank
from quiverhh_quiver import Path, compose, path_from_arrows

CORPUS = FilePath(__file__).resolve().parent.parent / "corpus"
BUNDLED_POSETS = sorted(p.name for p in CORPUS.glob("*.poset"))
COHERENT_CORPUS = sorted(p.name for p in CORPUS.iterdir() if p.suffix in {".bqp", ".poset"} and p.stem != "incoherent")


def _path(a, *names: str) -> Path:
    return path_from_arrows(a.quiver, names)


def _named(ctx, value) -> dict:
    return {ctx.describe(chain): coefficient for chain, coefficient in value.items()}


@pytest.fixture
def ctx_i1(load_algebra):
    return build_context(load_algebra("ejemplo_i1.bqp"))


@pytest.fixture
def ctx_i2(load_algebra):
    return build_context(load_algebra("ejemplo_i2.bqp"))


def test_incoherent_input_is_refused(load_algebra):
    with pytest.raises(ModelError, match="not homotopy coherent"):
        build_context(load_algebra("incoherent.bqp"))


def test_t_map_values(ctx_i1, ctx_i2):
    a = ctx_i1.algebra
    assert _named(ctx_i1, t_map(ctx_i1, [_path(a, "alpha")])) == {"e_1 > alpha": 1, "e_2 > alpha": -1}
    assert t_map(ctx_i1, [_path(a, "alpha"), _path(a, "gamma")]) == {}
    assert _named(ctx_i1, t_map(ctx_i1, [Path.trivial("2")])) == {"e_2": 1}

    b = ctx_i2.algebra
    assert _named(ctx_i2, t_map(ctx_i2, [_path(b, "alpha"), _path(b, "gamma")])) == {
        "e_1 > alpha > beta.gamma": 1,
        "e_2 > alpha > beta.gamma": -1,
        "e_2 > gamma > beta.gamma": 1,
        "e_3 > gamma > beta.gamma": -1,
    }


def test_t_map_refuses_bad_tuples(ctx_i1):
    a = ctx_i1.algebra
    with pytest.raises(NotComposableError):
        t_map(ctx_i1, [_path(a, "gamma"), _path(a, "alpha")])
    with pytest.raises(ModelError):
        t_map(ctx_i1, [])


def test_partial_boundary(ctx_i1):
    a = ctx_i1.algebra
    alpha, gamma = _path(a, "alpha"), _path(a, "gamma")
    assert partial_boundary([alpha]) == [(1, (Path.trivial("2"),)), (-1, (Path.trivial("1"),))]
    assert partial_boundary([alpha, gamma]) == [(1, (gamma,)), (-1, (compose(alpha, gamma),)), (1, (alpha,))]

    p, q, r = Path("1", "2", ("p",)), Path("2", "3", ("q",)), Path("3", "4", ("r",))
    assert len(partial_boundary([p, q, r])) == 4


def test_phi_zero_is_the_idempotent_cochain(ctx_i1):
    phi0 = phi_matrix(ctx_i1, 0)
    assert phi0.shape == (3, 7)
    assert rank(phi0) == 3
    assert phi_surjective(ctx_i1, 0)
    # the indicator of [e_2] goes to e_2 -> e_2
    column = ctx_i1.poset.index("e_2")
    values = [row[column] for row in phi0.to_list()]
    assert values == [0, 1, 0]


@pytest.mark.parametrize("name", COHERENT_CORPUS)
def test_chain_map(load_algebra, name: str):
    ctx = build_context(load_algebra(name))
    report = verify_chain_map(ctx, 3)
    assert report.passed, report.violation
    report.raise_if_failed()
    assert check_t_invariance(ctx, 2).passed


def test_g_map_in_low_degree(ctx_i1):
    index = ctx_i1.poset.index
    assert _named(ctx_i1, g_map(ctx_i1, (index("alpha"),))) == {"e_2 > alpha": 1}
    assert g_map(ctx_i1, (index("e_1"),)) == {}
    boundary = chain_boundary(ctx_i1, g_map(ctx_i1, (index("alpha"),)))
    assert _named(ctx_i1, boundary) == {"alpha": 1, "e_2": -1}


@pytest.mark.parametrize("name", COHERENT_CORPUS)
def test_contraction(load_algebra, name: str):
    ctx = build_context(load_algebra(name))
    if ctx.family is None:
        pytest.skip("no right compatible family")
    report = verify_contraction(ctx, 3)
    assert report.passed, report.violation
    assert check_associated_sequences(ctx) == []
    assert kernel_complex_cohomology(ctx, 3) == [0, 0, 0, 0]


def test_contraction_needs_a_right_family(load_algebra):
    ctx = build_context(load_algebra("ejemplo_no.bqp"))
    assert ctx.family is None
    with pytest.raises(ModelError, match="no right compatible family"):
        verify_contraction(ctx, 1)


def test_failed_report_raises():
    report = VerificationReport("chain map", 2, 5, "degree 1: mismatch")
    assert not report.passed
    with pytest.raises(VerificationError, match="degree 1: mismatch"):
        report.raise_if_failed()


def test_induced_map_on_ejemplo(ctx_i1):
    report = induced_hh_map(ctx_i1, 1)
    assert (report.domain_dim, report.codomain_dim, report.rank) == (1, 2, 1)
    assert report.verdict == "injective"

    report = injectivity_report(ctx_i1, 1)
    assert report.hypotheses_hold
    assert report.conclusion_holds
    assert report.consistent
    assert report.trivial_loops_only


@pytest.mark.parametrize(("name", "arrows"), [("kronecker2.bqp", 2), ("kronecker3.bqp", 3)])
def test_induced_map_on_kronecker(load_algebra, name: str, arrows: int):
    ctx = build_context(load_algebra(name))
    report = induced_hh_map(ctx, 1)
    assert (report.domain_dim, report.codomain_dim, report.rank) == (arrows - 1, arrows**2 - 1, arrows - 1)
    assert report.injective and not report.surjective


@pytest.mark.parametrize("name", BUNDLED_POSETS)
def test_incidence_algebras_give_isomorphisms(load_algebra, name: str):
    ctx = build_context(load_algebra(name))
    for n in range(4):
        assert phi_surjective(ctx, n)
        assert induced_hh_map(ctx, n).verdict == "isomorphism"


def test_kernel_complex_is_acyclic(ctx_i1, load_algebra):
    assert kernel_complex_cohomology(ctx_i1, 2) == [0, 0, 0]
    crown = build_context(load_algebra("crown.poset"))
    assert kernel_complex_cohomology(crown, 2) == [0, 0, 0]


def test_phi_shapes_follow_the_bases(ctx_i2):
    for n in range(3):
        phi = phi_matrix(ctx_i2, n)
        assert phi.shape[0] == cochain_basis(ctx_i2.algebra, n).dim


@pytest.mark.parametrize("name", BUNDLED_POSETS)
def test_epsilon_isomorphism(load_bundled_poset, name: str):
    report = epsilon_check(load_bundled_poset(name), 3)
    assert report.passed
    assert report.cochain_dims == report.chain_counts


@pytest.mark.parametrize(("name", "expected"), [("q3_f2.bqp", 2), ("q4_f2.bqp", 3)])
def test_double_arrow_line_embeds_its_first_cohomology(load_algebra, name: str, expected: int):
    ctx = build_context(load_algebra(name))
    report = induced_hh_map(ctx, 1)
    assert report.domain_dim == expected
    assert report.injective
    assert injectivity_report(ctx, 1).hypotheses_hold


@pytest.mark.parametrize("name", ["ejemplo_i1.bqp", "ejemplo_i2.bqp", "ejemplo_no.bqp", "sigma1.poset"])
def test_clean_classes_absorb_no_nontrivial_factor(load_algebra, name: str):
    assert check_trivial_absorption(build_context(load_algebra(name))) == []
