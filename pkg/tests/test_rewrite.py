import random

import pytest
from hypothesis import given, settings, strategies as st

from algebra_utils import (
    Element, FlatBrace, Monomial, Node, RawBrace, Singleton, parity_sign, print_element,
)
from config_utils import DEFAULT_SEED
from expr_utils import Scaled, Sum, make_context, parse, parse_syntax
from rewrite_utils import (
    brace_in_brace_coefficient, brace_in_brace_first_form, brace_in_brace_second_form, canonicalize,
    comb_brackets, filtration_kill, impurity, jacobi_straighten, lower, normalize, normalize_element,
    purify_braces,
)
from verify_utils import all_passed, confluence_cases, random_expression, run_cases


def combo(pairs, d, k, n):
    """(계수, 식) 목록의 정규형"""
    context = make_context(d, k, n)
    expr = Sum(tuple(Scaled(c, parse_syntax(text)) for c, text in pairs))
    return normalize(expr, context)


def test_lower_basics():
    context = make_context(2, 3, 2)
    assert lower(parse("x1*x2", context), context) == Element.of(context, Monomial.of(Singleton(1), Singleton(2)))
    assert lower(parse("{x1,x2}", context), context) == Element.of(context, Monomial.of(Node(Singleton(1), Singleton(2))))
    doubled = lower(parse("x1*x2+x1*x2", context), context)
    assert doubled.terms == {Monomial.of(Singleton(1), Singleton(2)): 2}


def test_brace_transposition(normal_form, d):
    expected = "1*{x1,x2,x3}" if d % 2 == 0 else "-1*{x1,x2,x3}"
    assert print_element(normal_form("{x2,x1,x3}", d, 3, 3)) == expected


def test_singleton_is_fixed(normal_form):
    assert print_element(normal_form("x1", 2, 3, 1)) == "1*x1"


@pytest.mark.parametrize("text, k, n", [
    ("[{x1,x2,x3},x4]*{x5,x6,x7}", 4, 7),
    ("[[x1,x3],x2]", 3, 3),
    ("{x1,x2,x3}", 4, 3),
    ("[x1,x2]", 3, 2),
])
def test_filtration_kills(normal_form, d, text, k, n):
    assert normal_form(text, d, k, n).is_zero()


def test_degree_zero_survives(normal_form, d):
    assert print_element(normal_form("x1*x2*x3", d, 4, 3)) == "1*x1*x2*x3"


def test_filtration_kill_keeps_ambient_arity():
    context = make_context(2, 3, 4)
    el = Element.of(context, Monomial.of(FlatBrace((1, 2, 3)), Singleton(4)))
    assert filtration_kill(el) == el
    assert filtration_kill(Element(context.with_k(4), el.terms)).is_zero()


def test_product_in_brace(d):
    lhs = combo([(1, "{x1,x2,x3*x4}")], d, 3, 4)
    rhs = combo([(1, "x3*{x1,x2,x4}"), (1, "{x1,x2,x3}*x4")], d, 3, 4)
    assert lhs == rhs
    assert not lhs.is_zero()


def test_bracket_in_brace(d):
    lhs = combo([(1, "{x1,x2,[x3,x4]}")], d, 3, 4)
    rhs = combo([(parity_sign(d), "[{x1,x2,x4},x3]"), (1, "[{x1,x2,x3},x4]")], d, 3, 4)
    assert lhs == rhs


def test_brace_in_brace_vector(d):
    lhs = combo([(1, "{x1,x2,{x3,x4,x5}}")], d, 4, 5)
    rhs = combo([
        (parity_sign(4 * d), "[x3,{x1,x2,x4,x5}]"),
        (parity_sign(5 * d), "[x4,{x1,x2,x3,x5}]"),
        (parity_sign(6 * d), "[x5,{x1,x2,x3,x4}]"),
    ], d, 4, 5)
    assert lhs == rhs
    assert len(lhs) == 3


def test_brace_in_brace_coefficient():
    assert brace_in_brace_coefficient(3, 3, 2) == 1
    assert brace_in_brace_coefficient(3, 4, 3) == -1
    assert brace_in_brace_coefficient(4, 4, 3) == 1


@pytest.mark.parametrize("k1, k2", [(3, 3), (3, 4), (4, 3)])
def test_brace_in_brace_forms_agree(d, k1, k2):
    context = make_context(d, k1 + k2 - 2, k1 + k2 - 1)
    outer = list(range(1, k1))
    inner = list(range(k1, k1 + k2))
    first = brace_in_brace_first_form(context, outer, inner)
    second = brace_in_brace_second_form(context, outer, inner)
    assert normalize_element(first - second).is_zero()


def test_antisymmetry_to_canonical_tail(normal_form, d):
    assert print_element(normal_form("[{x1,x2,x3},x4]", d, 3, 4)) == "-1*[x4,{x1,x2,x3}]"
    assert print_element(normal_form("[x4,{x1,x2,x3}]", d, 3, 4)) == "1*[x4,{x1,x2,x3}]"


def test_two_brace_bracket_puts_minimum_in_tail(normal_form, d):
    el = normal_form("[{x1,x3,x5},{x2,x4,x6}]", d, 3, 6)
    (mono, coeff), = el.terms.items()
    assert mono == Monomial.of(Node(FlatBrace((2, 4, 6)), FlatBrace((1, 3, 5))))
    # 이동 차수 3d-2 두 개의 교환
    assert coeff == -parity_sign((3 * d - 2) ** 2)


def test_antisymmetry_identity(d):
    sign = parity_sign((3 * d - 2) * (d - 1))
    assert combo([(1, "[x1,{x2,x3,x4}]"), (sign, "[{x2,x3,x4},x1]")], d, 3, 4).is_zero()


def test_generalized_jacobi_straightening(d):
    lhs = combo([(1, "[x1,{x2,x3,x4}]")], d, 3, 4)
    rhs = combo([
        (-parity_sign(d), "[x2,{x1,x3,x4}]"),
        (-parity_sign(2 * d), "[x3,{x1,x2,x4}]"),
        (-parity_sign(3 * d), "[x4,{x1,x2,x3}]"),
    ], d, 3, 4)
    assert lhs == rhs
    assert len(lhs) == 3


def test_generalized_jacobi_sum_vanishes(d):
    pairs = []
    for j in range(1, 5):
        rest = ",".join(f"x{l}" for l in range(1, 5) if l != j)
        pairs.append((parity_sign((j - 1) * d), f"[x{j},{{{rest}}}]"))
    assert combo(pairs, d, 3, 4).is_zero()


def test_poisson_arity_two_brace_is_bracket(normal_form, d):
    assert normal_form("{x1,x2}", d, 2, 2) == normal_form("[x1,x2]", d, 2, 2)
    assert not normal_form("[x1,x2]", d, 2, 2).is_zero()


def test_purify_leaves_flat_braces():
    context = make_context(2, 4, 5)
    el = purify_braces(lower(parse("{x1,x2,{x3,x4,x5}}", context), context))
    for mono in el.terms:
        assert impurity(mono) == (0, 0, 0)


def test_impurity_measure():
    raw = Monomial.of(RawBrace((Monomial.of(Singleton(1)), Monomial.of(Singleton(2), Singleton(3)))))
    assert impurity(raw) == (1, 3, 1)
    assert impurity(Monomial.of(FlatBrace((1, 2, 3)))) == (0, 0, 0)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1),
       d=st.integers(min_value=2, max_value=3),
       k=st.integers(min_value=2, max_value=4),
       extra=st.integers(min_value=0, max_value=2))
def test_normal_form_is_idempotent(seed, d, k, extra):
    context = make_context(d, k, k + extra)
    expr = random_expression(context, random.Random(seed))
    result = normalize(expr, context)
    assert normalize_element(result) == result
    assert normalize(expr, context, rng=random.Random(seed + 1)) == result


@pytest.mark.parametrize("d_value, k", [(2, 3), (2, 4), (3, 3), (3, 4)])
def test_confluence_cells(d_value, k):
    report = run_cases(confluence_cases([d_value], [k], 1000, DEFAULT_SEED), threads=1, progress=False)
    assert len(report) == 1000
    assert all_passed(report), report[~report["passed"]].head().to_string()


def _labels(factor):
    if isinstance(factor, Singleton):
        return [factor.label]
    if isinstance(factor, FlatBrace):
        return list(factor.labels)
    if isinstance(factor, RawBrace):
        return [l for arg in factor.args for f in arg.factors for l in _labels(f)]
    return _labels(factor.left) + _labels(factor.right)


def _stages(el):
    """정규화 한 바퀴의 단계별 결과 (파이프라인 순서)"""
    for name, stage in (("purify", purify_braces), ("kill", filtration_kill), ("comb", comb_brackets),
                        ("straighten", jacobi_straighten), ("kill", filtration_kill),
                        ("canonicalize", canonicalize)):
        result = stage(el)
        yield name, el, result
        el = result


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1),
       d=st.integers(min_value=2, max_value=3),
       k=st.integers(min_value=3, max_value=4),
       extra=st.integers(min_value=0, max_value=2))
def test_every_stage_preserves_degrees_and_labels(seed, d, k, extra):
    context = make_context(d, k, k + extra)
    current = lower(random_expression(context, random.Random(seed)), context)
    expected_labels = list(range(1, context.n + 1))
    for mono in current.terms:
        assert sorted(l for f in mono.factors for l in _labels(f)) == expected_labels
    for name, before, after in _stages(current):
        assert after.degrees() <= before.degrees(), name
        for mono in after.terms:
            assert sorted(l for f in mono.factors for l in _labels(f)) == expected_labels, name
