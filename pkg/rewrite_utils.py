#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""정규화 파이프라인

    lower -> purify_braces -> filtration_kill -> comb_brackets
          -> jacobi_straighten -> filtration_kill -> canonicalize

각 단계는 원소를 받아 원소를 돌려주는 순수 함수입니다. rng 를 넘기면
정화 위치, 합성 인자 선택, 처리 순서가 무작위로 바뀌며 결과는 같아야
합니다 (합류성 검사용).
"""

import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

from algebra_utils import (
    Element, Factor, FlatBrace, Monomial, Node, RawBrace, Singleton,
    bracket, brace_degree, braces_in, canonical_order, flat_brace, has_raw_brace,
    monomial_degree, parity_sign, product, raw_brace, sum_elements,
)
from error_utils import SignConventionError
from expr_utils import AmbientContext, Bracket, Expr, Product, Scaled, Sum, Var
from lie_utils import straighten_lie, tree_to_lie, word_factor

logger = logging.getLogger(__name__)

Path = Tuple[int, ...]

MAX_FIXPOINT_ROUNDS = 4


# ---------------------------------------------------------------------------
# lower
# ---------------------------------------------------------------------------

def lower(expr: Expr, ctx: AmbientContext) -> Element:
    """AST를 항 모델로 옮깁니다. 인자 2개짜리 중괄호는 괄호가 됩니다."""
    if isinstance(expr, Var):
        return Element.singleton(ctx, expr.label)
    if isinstance(expr, Scaled):
        return expr.coeff * lower(expr.body, ctx)
    if isinstance(expr, Sum):
        return sum_elements(ctx, (lower(t, ctx) for t in expr.terms))
    if isinstance(expr, Product):
        acc = lower(expr.factors[0], ctx)
        for f in expr.factors[1:]:
            acc = product(acc, lower(f, ctx))
        return acc
    if isinstance(expr, Bracket):
        return bracket(lower(expr.left, ctx), lower(expr.right, ctx))
    args = [lower(a, ctx) for a in expr.args]
    if len(args) == 2:
        return bracket(args[0], args[1])
    return raw_brace(ctx, args)


# ---------------------------------------------------------------------------
# purify
# ---------------------------------------------------------------------------

def _is_composite(arg: Monomial) -> bool:
    return not (len(arg.factors) == 1 and isinstance(arg.factors[0], Singleton))


def _factor_size(factor: Factor) -> int:
    if isinstance(factor, Singleton):
        return 1
    if isinstance(factor, FlatBrace):
        return 1 + len(factor.labels)
    if isinstance(factor, RawBrace):
        return 1 + sum(_monomial_size(a) for a in factor.args)
    return 1 + _factor_size(factor.left) + _factor_size(factor.right)


def _monomial_size(mono: Monomial) -> int:
    return len(mono.factors) - 1 + sum(_factor_size(f) for f in mono.factors)


def _raw_stats(factor: Factor) -> Tuple[int, int, int]:
    if isinstance(factor, RawBrace):
        count = size = 0
        raws = 1
        for arg in factor.args:
            if _is_composite(arg):
                count += 1
                size += _monomial_size(arg)
            c, s, r = _monomial_raw_stats(arg)
            count, size, raws = count + c, size + s, raws + r
        return count, size, raws
    if isinstance(factor, Node):
        lc, ls, lr = _raw_stats(factor.left)
        rc, rs, rr = _raw_stats(factor.right)
        return lc + rc, ls + rs, lr + rr
    return 0, 0, 0


def _monomial_raw_stats(mono: Monomial) -> Tuple[int, int, int]:
    count = size = raws = 0
    for f in mono.factors:
        c, s, r = _raw_stats(f)
        count, size, raws = count + c, size + s, raws + r
    return count, size, raws


def impurity(mono: Monomial) -> Tuple[int, int, int]:
    """정화 종료 측도: (합성 인자 수, 합성 인자 크기, 정화 전 중괄호 수)"""
    return _monomial_raw_stats(mono)


def _innermost_paths(mono: Monomial) -> List[Path]:
    """인자에 다른 RawBrace를 포함하지 않는 RawBrace들의 경로"""
    found: List[Path] = []

    def visit_factor(factor: Factor, path: Path) -> None:
        if isinstance(factor, Node):
            visit_factor(factor.left, path + (0,))
            visit_factor(factor.right, path + (1,))
        elif isinstance(factor, RawBrace):
            inner = [any(has_raw_brace(f) for f in a.factors) for a in factor.args]
            if not any(inner):
                found.append(path)
                return
            for j, arg in enumerate(factor.args):
                visit_monomial(arg, path + (j,))

    def visit_monomial(m: Monomial, path: Path) -> None:
        for i, f in enumerate(m.factors):
            visit_factor(f, path + (i,))

    visit_monomial(mono, ())
    return found


def _at(mono: Monomial, path: Path) -> Factor:
    factor = mono.factors[path[0]]
    rest = path[1:]
    while rest:
        if isinstance(factor, Node):
            factor = factor.left if rest[0] == 0 else factor.right
            rest = rest[1:]
        else:
            arg = factor.args[rest[0]]
            factor = arg.factors[rest[1]]
            rest = rest[2:]
    return factor


def _single(ctx: AmbientContext, factor: Factor) -> Element:
    return Element.of(ctx, Monomial.of(factor))


def _rebuild_monomial(mono: Monomial, path: Path, repl: Element, ctx: AmbientContext) -> Element:
    index, rest = path[0], path[1:]
    acc: Optional[Element] = None
    for i, f in enumerate(mono.factors):
        part = _rebuild_factor(f, rest, repl, ctx) if i == index else _single(ctx, f)
        acc = part if acc is None else product(acc, part)
    return acc


def _rebuild_factor(factor: Factor, path: Path, repl: Element, ctx: AmbientContext) -> Element:
    if not path:
        return repl
    if isinstance(factor, Node):
        if path[0] == 0:
            return bracket(_rebuild_factor(factor.left, path[1:], repl, ctx), _single(ctx, factor.right))
        return bracket(_single(ctx, factor.left), _rebuild_factor(factor.right, path[1:], repl, ctx))
    args = [Element.of(ctx, a) for a in factor.args]
    j = path[0]
    args[j] = _rebuild_monomial(factor.args[j], path[1:], repl, ctx)
    return raw_brace(ctx, args)


def brace_in_brace_coefficient(outer_arity: int, position: int, d: int) -> int:
    """중괄호 안 중괄호 전개에서 position 번째 라벨 항의 계수

    (-1)^{(outer_arity-1)d} (-1)^{(position-1)d}
    """
    return parity_sign((outer_arity - 1) * d + (position - 1) * d)


def _raw(ctx: AmbientContext, args: Sequence[Monomial]) -> Element:
    return _single(ctx, RawBrace(tuple(args)))


def _purify_brace(brace: RawBrace, ctx: AmbientContext, rng: Optional[random.Random]) -> Element:
    """가장 안쪽 중괄호 하나에 재작성 규칙 하나를 적용합니다."""
    d = ctx.d
    args = list(brace.args)
    composites = [j for j, a in enumerate(args) if _is_composite(a)]

    if not composites:
        labels = [a.factors[0].label for a in args]
        if len(labels) == 2:
            return bracket(Element.singleton(ctx, labels[0]), Element.singleton(ctx, labels[1]))
        sign, flat = flat_brace(labels, d)
        return Element.of(ctx, Monomial.of(flat), sign)

    j = rng.choice(composites) if rng is not None else composites[-1]
    target = args[j]
    target_degree = monomial_degree(target, d)

    # 합성 인자를 마지막 자리로 옮긴다: 한 번 지날 때마다 (-1)^{d + |a||b|}
    sign = 1
    for other in args[j + 1:]:
        sign *= parity_sign(d + target_degree * monomial_degree(other, d))
    others = args[:j] + args[j + 1:]

    marker = brace_degree(len(args), d)
    spectators = sum(monomial_degree(a, d) for a in others)
    outer = marker + spectators

    if len(target.factors) >= 2:
        y = Monomial(target.factors[:1])
        w = Monomial(target.factors[1:])
        first = parity_sign(monomial_degree(y, d) * outer) * product(Element.of(ctx, y), _raw(ctx, others + [w]))
        second = product(_raw(ctx, others + [y]), Element.of(ctx, w))
        return sign * (first + second)

    factor = target.factors[0]
    if isinstance(factor, Node):
        y = Monomial.of(factor.left)
        w = Monomial.of(factor.right)
        y_shifted = monomial_degree(y, d) + d - 1
        first = parity_sign(y_shifted * outer) * bracket(Element.of(ctx, y), _raw(ctx, others + [w]))
        second = bracket(_raw(ctx, others + [y]), Element.of(ctx, w))
        return sign * (first + second)

    if isinstance(factor, FlatBrace):
        m = len(args)
        spectator_sign = parity_sign(spectators * target_degree)
        terms = []
        for pos, label in enumerate(factor.labels, start=1):
            coeff = spectator_sign * brace_in_brace_coefficient(m, m - 1 + pos, d)
            rest = [Monomial.of(Singleton(l)) for l in factor.labels if l != label]
            inner = _raw(ctx, others + rest)
            terms.append(coeff * bracket(Element.singleton(ctx, label), inner))
        return sign * sum_elements(ctx, terms)

    raise SignConventionError(f"가장 안쪽이 아닌 중괄호를 정화하려 했습니다: {factor}")


def purify_braces(el: Element, rng: Optional[random.Random] = None) -> Element:
    """모든 중괄호를 싱글톤 인자만 갖는 FlatBrace로 만듭니다.

    곱은 일반화 Leibniz(곱), 괄호는 일반화 Leibniz(괄호), 안쪽 중괄호는
    중괄호 안 중괄호 규칙으로 풀며, 각 단계마다 impurity 측도가 엄격히
    감소하는지 확인합니다.
    """
    ctx = el.ctx
    current = dict(el.terms)
    steps = 0
    while True:
        pending = [(m, c) for m, c in current.items() if _innermost_paths(m)]
        if not pending:
            break
        if rng is not None:
            rng.shuffle(pending)

        nxt: Dict[Monomial, int] = {m: c for m, c in current.items() if not _innermost_paths(m)}
        for mono, coeff in pending:
            paths = _innermost_paths(mono)
            path = rng.choice(paths) if rng is not None else paths[-1]
            repl = _purify_brace(_at(mono, path), ctx, rng)
            before = impurity(mono)
            for image, c in _rebuild_monomial(mono, path, repl, ctx):
                if impurity(image) >= before:
                    raise SignConventionError(
                        f"정화 측도가 감소하지 않았습니다: {mono} {before} -> {image} {impurity(image)}")
                nxt[image] = nxt.get(image, 0) + coeff * c
            steps += 1
        current = {m: c for m, c in nxt.items() if c}

    logger.debug(f"[정화] {steps}단계, 결과 항 {len(current)}개")
    return Element(ctx, current)


# ---------------------------------------------------------------------------
# kill / comb / straighten / canonicalize
# ---------------------------------------------------------------------------

def _survives(mono: Monomial, ctx: AmbientContext) -> bool:
    if monomial_degree(mono, ctx.d) == 0:
        return True
    braces = [b for f in mono.factors for b in braces_in(f)]
    if any(len(b.labels) < ctx.k for b in braces):
        return False
    if ctx.k >= 3 and not braces:
        return False
    return True


def filtration_kill(el: Element) -> Element:
    """주변 k보다 작은 중괄호를 가진 양의 차수 단항식, (k>=3) 중괄호 없는 양의 차수 단항식을 지웁니다."""
    return Element(el.ctx, {m: c for m, c in el.terms.items() if _survives(m, el.ctx)})


def _comb_factor(factor: Factor, ctx: AmbientContext, straighten: bool,
                 rng: Optional[random.Random]) -> Element:
    if not isinstance(factor, Node):
        return _single(ctx, factor)
    lie = tree_to_lie(factor, ctx.d, poisson=ctx.k == 2)
    if straighten and ctx.k >= 3:
        lie = straighten_lie(lie, ctx.d, rng)
    return Element.collect(ctx, ((Monomial.of(word_factor(w)), c) for w, c in lie.items()))


def _comb(el: Element, straighten: bool, rng: Optional[random.Random]) -> Element:
    ctx = el.ctx
    items = list(el.terms.items())
    if rng is not None:
        rng.shuffle(items)
    parts = []
    for mono, coeff in items:
        acc = Element.of(ctx, Monomial(()), coeff)
        for f in mono.factors:
            acc = product(acc, _comb_factor(f, ctx, straighten, rng))
            if acc.is_zero():
                break
        parts.append(acc)
    return sum_elements(ctx, parts)


def comb_brackets(el: Element, rng: Optional[random.Random] = None) -> Element:
    """괄호 트리를 오른쪽 정규 단어로 정리합니다 (꼬리: 최소 라벨 글자)."""
    return _comb(el, straighten=False, rng=rng)


def jacobi_straighten(el: Element, rng: Optional[random.Random] = None) -> Element:
    """[x_i, {S}] (i < min S) 꼴을 일반화 Jacobi 관계로 제거합니다."""
    return _comb(el, straighten=True, rng=rng)


def canonicalize(el: Element) -> Element:
    """인자를 최소 라벨 순으로 정렬 (Koszul 부호)하고 같은 단항식을 합칩니다."""
    d = el.ctx.d
    out = []
    for mono, coeff in el.terms.items():
        sign, ordered = canonical_order(mono, d)
        out.append((ordered, sign * coeff))
    return Element.collect(el.ctx, out)


def normalize_element(el: Element, rng: Optional[random.Random] = None) -> Element:
    """정규형 계산 (고정점까지 반복)"""
    current = el
    for _ in range(MAX_FIXPOINT_ROUNDS):
        result = purify_braces(current, rng)
        result = filtration_kill(result)
        result = comb_brackets(result, rng)
        result = jacobi_straighten(result, rng)
        result = filtration_kill(result)
        result = canonicalize(result)
        if result == current:
            return result
        current = result
    raise SignConventionError(f"{MAX_FIXPOINT_ROUNDS}회 반복 안에 정규형이 고정되지 않았습니다")


def normalize(expr: Expr, ctx: AmbientContext, rng: Optional[random.Random] = None) -> Element:
    """식을 정규형 원소로 만듭니다."""
    result = normalize_element(lower(expr, ctx), rng)
    logger.debug(f"[정규화 완료] 항 {len(result)}개")
    return result


# ---------------------------------------------------------------------------
# 중괄호 안 중괄호 전개의 두 형태
# ---------------------------------------------------------------------------

def _brace_term(ctx: AmbientContext, written: Sequence[int], index: int) -> Element:
    label = written[index]
    rest = [l for i, l in enumerate(written) if i != index]
    sign, flat = flat_brace(rest, ctx.d)
    return sign * bracket(Element.singleton(ctx, label), Element.of(ctx, Monomial.of(flat)))


def brace_in_brace_first_form(ctx: AmbientContext, outer: Sequence[int], inner: Sequence[int]) -> Element:
    """바깥 라벨에 대한 합으로 쓴 전개 (검증 벡터)"""
    written = list(outer) + list(inner)
    k1 = len(outer) + 1
    terms = [
        -parity_sign((k1 - 1) * ctx.d + i * ctx.d) * _brace_term(ctx, written, i)
        for i in range(len(outer))
    ]
    return sum_elements(ctx, terms)


def brace_in_brace_second_form(ctx: AmbientContext, outer: Sequence[int], inner: Sequence[int]) -> Element:
    """안쪽 라벨에 대한 합으로 쓴 전개 (재작성 규칙과 같은 형태)"""
    written = list(outer) + list(inner)
    k1 = len(outer) + 1
    terms = [
        brace_in_brace_coefficient(k1, i + 1, ctx.d) * _brace_term(ctx, written, i)
        for i in range(len(outer), len(written))
    ]
    return sum_elements(ctx, terms)
