
import pytest

from algebra_utils import Element, Monomial, braces_in, monomial_degree, print_monomial
from basis_utils import (
    canonical_trees, degree_table, enumerate_basis, oracle_dimension, raw_trees,
    set_partitions, sparse_rank,
)
from expr_utils import make_context
from rewrite_utils import normalize_element


def test_set_partitions():
    parts = list(set_partitions((1, 2, 3, 4)))
    assert len(parts) == 15
    assert [(1, 2, 3, 4)] in parts
    for blocks in parts:
        assert [b[0] for b in blocks] == sorted(b[0] for b in blocks)


def test_single_brace_basis():
    monomials = enumerate_basis(make_context(2, 3, 3), 3)
    assert [print_monomial(m) for m in monomials] == ["{x1,x2,x3}"]


def test_four_labels_degree_three():
    monomials = enumerate_basis(make_context(2, 3, 4), 3)
    assert sorted(print_monomial(m) for m in monomials) == sorted([
        "{x1,x2,x3}*x4", "{x1,x2,x4}*x3", "{x1,x3,x4}*x2", "x1*{x2,x3,x4}",
    ])


def test_four_labels_degree_four():
    monomials = enumerate_basis(make_context(2, 3, 4), 4)
    assert len(monomials) == 3
    assert all(print_monomial(m).startswith("[x") for m in monomials)


def test_five_label_trees():
    assert len(canonical_trees((1, 2, 3, 4, 5), 3)) == 6


def test_poisson_trees_are_permutations():
    assert len(canonical_trees((1, 2, 3, 4), 2)) == 6


def test_basis_is_sorted_by_degree(d):
    monomials = enumerate_basis(make_context(d, 3, 4))
    degrees = [monomial_degree(m, d) for m in monomials]
    assert degrees == sorted(degrees)
    assert degrees[0] == 0


def test_raw_trees_need_a_brace_under_every_node():
    for tree in raw_trees((1, 2, 3, 4), 3):
        assert braces_in(tree)


def test_sparse_rank():
    rows = [{0: 1, 1: 1}, {0: 2, 1: 2}, {1: 1}, {2: 0}]
    assert sparse_rank(rows, 3) == 2
    assert sparse_rank([], 3) == 0


def test_sparse_rank_is_exact_over_rationals():
    # 셋째 행은 앞 두 행의 차, 첫째·둘째·넷째 행의 행렬식은 2
    rows = [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}, {0: 1, 2: 1}]
    assert sparse_rank(rows, 3) == 3


@pytest.mark.parametrize("n", [3, 4, 5])
def test_oracle_agrees_with_enumeration(n):
    table = degree_table(make_context(2, 3, n), with_oracle=True)
    assert list(table.columns) == ["degree", "count", "oracle"]
    assert (table["count"] == table["oracle"]).all(), table.to_string(index=False)


def test_oracle_small_cases():
    assert oracle_dimension(make_context(2, 3, 4), 3) == 4
    assert oracle_dimension(make_context(2, 3, 4), 4) == 3


def test_canonical_trees_are_normal_forms(d):
    context = make_context(d, 3, 6)
    for tree in canonical_trees((1, 2, 3, 4, 5, 6), 3):
        el = Element.of(context, Monomial.of(tree))
        assert normalize_element(el) == el, print_monomial(Monomial.of(tree))
