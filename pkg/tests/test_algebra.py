import pytest
from hypothesis import given, strategies as st

from algebra_utils import (
    Element, FlatBrace, GradedMarker, Monomial, Node, Singleton,
    add, bracket, canonical_order, element_to_dict, expr_degree, flat_brace, koszul_swap_sign,
    monomial_degree, ordering_sign, parity_sign, print_element, product, scale, shifted,
)
from error_utils import ContextError, SignConventionError
from expr_utils import make_context, parse_syntax


def test_degrees(d):
    assert expr_degree(parse_syntax("{x1,x2,x3}"), d) == 2 * d - 1
    assert expr_degree(parse_syntax("x2*[{x1,x3,x4},x5]"), d) == 3 * d - 2
    assert expr_degree(parse_syntax("x1*x2*x3*x4"), d) == 0
    assert shifted(0, d) == d - 1


def test_monomial_degree_counts_brackets(d):
    mono = Monomial.of(Node(Singleton(4), FlatBrace((1, 2, 3))), Singleton(5))
    assert monomial_degree(mono, d) == 3 * d - 2


@pytest.mark.parametrize("p, q, expected", [
    (0, 7, 1),
    (3, 1, -1),   # (2d-1, d-1) at d=2
    (5, 2, 1),    # (2d-1, d-1) at d=3
])
def test_koszul_swap_sign(p, q, expected):
    assert koszul_swap_sign(p, q) == expected


def test_ordering_sign_basics():
    a, b = GradedMarker("a", 2), GradedMarker("b", 4)
    y, z = GradedMarker("y", 1), GradedMarker("z", 3)
    assert ordering_sign([a, y, z], [a, y, z]) == 1
    assert ordering_sign([a, b], [b, a]) == 1
    assert ordering_sign([y, z], [z, y]) == -1
    with pytest.raises(SignConventionError):
        ordering_sign([a, y], [a, z])


@given(st.permutations(range(5)), st.permutations(range(5)))
def test_ordering_sign_is_multiplicative(first, second):
    markers = [GradedMarker(f"m{i}", i) for i in range(5)]
    middle = [markers[i] for i in first]
    target = [middle[i] for i in second]
    assert ordering_sign(markers, target) == ordering_sign(markers, middle) * ordering_sign(middle, target)


def test_flat_brace_symmetry_sign(d):
    sign, brace = flat_brace([2, 1, 3], d)
    assert brace == FlatBrace((1, 2, 3))
    assert sign == parity_sign(d)
    assert flat_brace([3, 2, 1], d)[0] == parity_sign(3 * d)


def test_linear_operations():
    context = make_context(2, 3, 2)
    a = Element.of(context, Monomial.of(Singleton(1), Singleton(2)))
    b = Element.of(context, Monomial.of(Singleton(2), Singleton(1)), 3)
    assert (a + scale(-1, a)).is_zero()
    assert scale(0, a).is_zero()
    merged = add(a, b)
    assert len(merged) == 2
    assert merged.terms[Monomial.of(Singleton(2), Singleton(1))] == 3


def test_context_mismatch():
    with pytest.raises(ContextError):
        add(Element.singleton(make_context(2, 3, 1), 1), Element.singleton(make_context(3, 3, 1), 1))


def test_bracket_expands_over_products():
    context = make_context(2, 3, 3)
    x = [Element.singleton(context, l) for l in (1, 2, 3)]
    result = bracket(x[0], product(x[1], x[2]))
    assert result.terms == {
        Monomial.of(Node(Singleton(1), Singleton(2)), Singleton(3)): 1,
        Monomial.of(Singleton(2), Node(Singleton(1), Singleton(3))): 1,
    }


def test_canonical_order_sign(d):
    brace_a = FlatBrace((2, 4, 6))
    brace_b = FlatBrace((1, 3, 5))
    sign, ordered = canonical_order(Monomial.of(brace_a, brace_b), d)
    assert ordered == Monomial.of(brace_b, brace_a)
    # 홀수 차수 2d-1 인자 두 개의 교환
    assert sign == -1


def test_printing_and_schema():
    context = make_context(2, 3, 3)
    el = Element(context, {Monomial.of(FlatBrace((1, 2, 3))): -1})
    assert print_element(el) == "-1*{x1,x2,x3}"
    assert print_element(Element.zero(context)) == "0"
    assert element_to_dict(el) == {
        "ambient": {"d": 2, "k": 3, "n": 3},
        "degree": 3,
        "terms": [{"coeff": -1, "monomial": "{x1,x2,x3}"}],
    }
    assert element_to_dict(Element.zero(context))["degree"] is None
