#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""필터 오퍼라드 합성, 재라벨, 접붙이기 부호, 자명성 분류"""

import logging
from enum import Enum
from typing import List, Optional

from algebra_utils import (
    Element, Factor, FlatBrace, Monomial, Singleton,
    bracket, braces_in, factor_degree, flat_brace, monomial_degree, parity_sign,
    product, raw_brace, relabel, sum_elements,
)
from error_utils import ClassificationError, CompositionError, ContextError
from expr_utils import AmbientContext, Brace, Bracket, Expr, Product, Scaled, Sum, Var, make_context, relabel_expr
from rewrite_utils import normalize_element

logger = logging.getLogger(__name__)


class TypeClass(str, Enum):
    """I: 차수 0, II: 괄호 하나에 중괄호 하나, III: 그 밖의 모든 곱"""
    I = "I"
    II = "II"
    III = "III"


def filtration_index(k: int) -> int:
    """B_d^(k) 는 필터 단계 F_{k-2}"""
    return k - 2


def _classify_monomial(mono: Monomial, d: int) -> TypeClass:
    if monomial_degree(mono, d) == 0:
        return TypeClass.I
    clusters = [f for f in mono.factors if not isinstance(f, Singleton)]
    if len(clusters) == 1 and len(braces_in(clusters[0])) == 1:
        return TypeClass.II
    return TypeClass.III


def classify(el: Element) -> TypeClass:
    """정규형 동차 원소의 유형

    Raises:
        ClassificationError: 영원소, 비동차, 단항식 유형이 섞인 경우
    """
    if el.is_zero():
        raise ClassificationError("영원소는 유형이 없습니다")
    if not el.is_homogeneous:
        raise ClassificationError(f"비동차 원소: 차수 {sorted(el.degrees())}")
    classes = {_classify_monomial(m, el.ctx.d) for m in el.terms}
    if len(classes) > 1:
        raise ClassificationError(f"단항식 유형이 섞여 있습니다: {sorted(c.value for c in classes)}")
    return classes.pop()


def slot_in_brace(el: Element, i: int) -> bool:
    """라벨 i 가 어떤 단항식의 중괄호 안에 있는지"""
    return any(i in b.labels for m in el.terms for f in m.factors for b in braces_in(f))


def triviality_witness(class_a: TypeClass, class_b: TypeClass, inside_brace: bool) -> bool:
    """합성 a ∘_i b 가 0이어야 하면 True"""
    if class_a is TypeClass.I and class_b is TypeClass.I:
        return False
    if class_a is TypeClass.II and class_b is TypeClass.II:
        return not inside_brace
    return True


# ---------------------------------------------------------------------------
# 접붙이기
# ---------------------------------------------------------------------------

def _degree_before(mono: Monomial, slot: int, d: int) -> int:
    """쓰인 순서에서 x_slot 앞에 놓인 부분의 차수 (x_slot 을 감싼 중괄호 자신은 제외)

    b 를 맨 왼쪽에서 x_slot 자리까지 옮기는 Koszul 부호의 지수로 쓰입니다.
    괄호의 쉼표는 d-1, 닫힌 인자는 자기 차수 전체를 냅니다.
    """

    def visit(factor: Factor) -> Optional[int]:
        if isinstance(factor, Singleton):
            return 0 if factor.label == slot else None
        if isinstance(factor, FlatBrace):
            return 0 if slot in factor.labels else None
        left = visit(factor.left)
        if left is not None:
            return left
        right = visit(factor.right)
        if right is None:
            return None
        return factor_degree(factor.left, d) + d - 1 + right

    total = 0
    for f in mono.factors:
        inner = visit(f)
        if inner is not None:
            return total + inner
        total += factor_degree(f, d)
    raise CompositionError(f"단항식에 x{slot} 이 없습니다")


def _graft_factor(factor: Factor, slot: int, inserted: Element, mapping, ctx: AmbientContext) -> Element:
    if isinstance(factor, Singleton):
        if factor.label == slot:
            return inserted
        return Element.singleton(ctx, mapping(factor.label))
    if isinstance(factor, FlatBrace):
        if slot in factor.labels:
            args = [inserted if l == slot else Element.singleton(ctx, mapping(l)) for l in factor.labels]
            return raw_brace(ctx, args)
        sign, flat = flat_brace([mapping(l) for l in factor.labels], ctx.d)
        return Element.of(ctx, Monomial.of(flat), sign)
    return bracket(_graft_factor(factor.left, slot, inserted, mapping, ctx),
                   _graft_factor(factor.right, slot, inserted, mapping, ctx))


def _graft_monomial(mono: Monomial, slot: int, inserted: Element, mapping, ctx: AmbientContext) -> Element:
    acc = Element.of(ctx, Monomial(()))
    for f in mono.factors:
        acc = product(acc, _graft_factor(f, slot, inserted, mapping, ctx))
    return acc


def compose(a: Element, i: int, b: Element) -> Element:
    """부분 합성 a ∘_i b (주변 k' = k1 + k2 - 2, n' = n1 + n2 - 1)

    Args:
        a: 정규형 원소 (d, k1, n1)
        i: 슬롯 (1..n1)
        b: 정규형 원소 (d, k2, n2)

    Returns:
        Element: k' 에서의 정규형
    """
    if a.ctx.d != b.ctx.d:
        raise CompositionError(f"차원 불일치: d={a.ctx.d} 와 d={b.ctx.d}")
    n1, n2 = a.ctx.n, b.ctx.n
    if not 1 <= i <= n1:
        raise CompositionError(f"슬롯 {i} 가 범위 1..{n1} 를 벗어났습니다")

    ctx = make_context(a.ctx.d, a.ctx.k + b.ctx.k - 2, n1 + n2 - 1)
    d = ctx.d

    def outer(label: int) -> int:
        return label if label < i else label + n2 - 1

    shifted_b = relabel(b, lambda l: l + i - 1, ctx)

    parts: List[Element] = []
    for mono_b, coeff_b in shifted_b.terms.items():
        inserted = Element.of(ctx, mono_b)
        degree_b = monomial_degree(mono_b, d)
        for mono_a, coeff_a in a.terms.items():
            sign = parity_sign(degree_b * _degree_before(mono_a, i, d))
            grafted = _graft_monomial(mono_a, i, inserted, outer, ctx)
            parts.append((sign * coeff_a * coeff_b) * grafted)

    result = normalize_element(sum_elements(ctx, parts))
    logger.debug(f"[합성 완료] ∘_{i}: k'={ctx.k}, n'={ctx.n}, 항 {len(result)}개")
    return result


def left_action(p: Element, i: int, b: Element) -> Element:
    """포아송 원소 p 에 대한 좌작용 p ∘_i b"""
    if p.ctx.k != 2:
        raise CompositionError(f"좌작용의 바깥 원소는 k=2 이어야 합니다 (k={p.ctx.k})")
    return compose(p, i, b)


def right_action(a: Element, i: int, q: Element) -> Element:
    """포아송 원소 q 에 대한 우작용 a ∘_i q"""
    if q.ctx.k != 2:
        raise CompositionError(f"우작용의 안쪽 원소는 k=2 이어야 합니다 (k={q.ctx.k})")
    return compose(a, i, q)


def include(el: Element, k_new: int) -> Element:
    """포함 B_d^(k) ⊂ B_d^(k_new) 가 유도하는 사상 (양의 차수는 0으로)"""
    if k_new < el.ctx.k:
        raise ContextError(f"k={el.ctx.k} 에서 더 작은 k={k_new} 로 포함할 수 없습니다")
    ctx = el.ctx.with_k(k_new)
    if k_new == el.ctx.k:
        return Element(ctx, dict(el.terms))
    return Element(ctx, {m: c for m, c in el.terms.items() if monomial_degree(m, ctx.d) == 0})


# ---------------------------------------------------------------------------
# 식 수준 접붙이기 (정규화 전 출력용)
# ---------------------------------------------------------------------------

def _substitute(expr: Expr, slot: int, replacement: Expr, mapping) -> Expr:
    if isinstance(expr, Var):
        return replacement if expr.label == slot else Var(mapping(expr.label))
    if isinstance(expr, Brace):
        return Brace(tuple(_substitute(a, slot, replacement, mapping) for a in expr.args))
    if isinstance(expr, Bracket):
        return Bracket(_substitute(expr.left, slot, replacement, mapping),
                       _substitute(expr.right, slot, replacement, mapping))
    if isinstance(expr, Product):
        return Product(tuple(_substitute(f, slot, replacement, mapping) for f in expr.factors))
    if isinstance(expr, Scaled):
        return Scaled(expr.coeff, _substitute(expr.body, slot, replacement, mapping))
    return Sum(tuple(_substitute(t, slot, replacement, mapping) for t in expr.terms))


def graft_expr(a: Expr, i: int, b: Expr, n1: int, n2: int) -> Expr:
    """a 의 x_i 자리에 재라벨된 b 를 넣은 식"""
    if not 1 <= i <= n1:
        raise CompositionError(f"슬롯 {i} 가 범위 1..{n1} 를 벗어났습니다")
    inner = relabel_expr(b, lambda l: l + i - 1)
    return _substitute(a, i, inner, lambda l: l if l < i else l + n2 - 1)
