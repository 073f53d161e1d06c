#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""차수가 있는 항 모델: 원자, 괄호 트리, 단항식, 원소와 Koszul 부호

단항식은 인자(싱글톤 또는 괄호 트리)의 곱이며, 원소는 단항식의 정수 계수
선형결합입니다. 괄호 [a,b]의 차수는 d-1, 중괄호 {x1,...,xm}의 차수는
(m-1)d-1 이고, 이동 차수 |a|' = |a| + d - 1 로 반대칭 부호를 계산합니다.

    [a,b]   = -(-1)^{|a|'|b|'} [b,a]
    [a,b·c] = [a,b]·c + (-1)^{|b||a|'} b·[a,c]
    a·b     = (-1)^{|a||b|} b·a
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from error_utils import ContextError, ExpressionError, SignConventionError
from expr_utils import AmbientContext, Brace, Bracket, Expr, Product, Scaled, Var

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# 원자와 트리
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Singleton:
    label: int


@dataclass(frozen=True)
class FlatBrace:
    """싱글톤만을 인자로 갖는 중괄호. 라벨은 오름차순."""
    labels: Tuple[int, ...]


@dataclass(frozen=True)
class RawBrace:
    """정화 전의 중괄호. 각 인자는 단항식."""
    args: Tuple["Monomial", ...]


@dataclass(frozen=True)
class Node:
    left: "Factor"
    right: "Factor"


Atom = Union[Singleton, FlatBrace]
Factor = Union[Singleton, FlatBrace, RawBrace, Node]


@dataclass(frozen=True)
class Monomial:
    factors: Tuple[Factor, ...]

    @classmethod
    def of(cls, *factors: Factor) -> "Monomial":
        return cls(tuple(factors))

    def __str__(self):
        return print_monomial(self)


def parity_sign(exponent: int) -> int:
    """(-1)^exponent"""
    return -1 if exponent % 2 else 1


def shifted(degree: int, d: int) -> int:
    return degree + d - 1


# ---------------------------------------------------------------------------
# 차수와 라벨
# ---------------------------------------------------------------------------

def brace_degree(arity: int, d: int) -> int:
    return (arity - 1) * d - 1


def factor_degree(factor: Factor, d: int) -> int:
    if isinstance(factor, Singleton):
        return 0
    if isinstance(factor, FlatBrace):
        return brace_degree(len(factor.labels), d)
    if isinstance(factor, RawBrace):
        return brace_degree(len(factor.args), d) + sum(monomial_degree(a, d) for a in factor.args)
    return d - 1 + factor_degree(factor.left, d) + factor_degree(factor.right, d)


def monomial_degree(mono: Monomial, d: int) -> int:
    """단항식의 차수: 중괄호 (a-1)d-1, 괄호 노드 d-1, 싱글톤 0의 합"""
    return sum(factor_degree(f, d) for f in mono.factors)


def degree(mono: Monomial, ctx: AmbientContext) -> int:
    return monomial_degree(mono, ctx.d)


def factor_labels(factor: Factor) -> FrozenSet[int]:
    if isinstance(factor, Singleton):
        return frozenset((factor.label,))
    if isinstance(factor, FlatBrace):
        return frozenset(factor.labels)
    if isinstance(factor, RawBrace):
        return frozenset().union(*(monomial_labels(a) for a in factor.args))
    return factor_labels(factor.left) | factor_labels(factor.right)


def monomial_labels(mono: Monomial) -> FrozenSet[int]:
    return frozenset().union(*(factor_labels(f) for f in mono.factors))


def min_label(factor: Factor) -> int:
    return min(factor_labels(factor))


def braces_in(factor: Factor) -> List[FlatBrace]:
    """인자 안의 FlatBrace 목록 (쓰인 순서)"""
    if isinstance(factor, FlatBrace):
        return [factor]
    if isinstance(factor, Node):
        return braces_in(factor.left) + braces_in(factor.right)
    if isinstance(factor, RawBrace):
        return [b for a in factor.args for f in a.factors for b in braces_in(f)]
    return []


def has_raw_brace(factor: Factor) -> bool:
    if isinstance(factor, RawBrace):
        return True
    if isinstance(factor, Node):
        return has_raw_brace(factor.left) or has_raw_brace(factor.right)
    return False


# ---------------------------------------------------------------------------
# Koszul 부호
# ---------------------------------------------------------------------------

def koszul_swap_sign(p: int, q: int) -> int:
    """인접한 차수 p, q 인자를 교환할 때의 부호 (-1)^{pq}"""
    return parity_sign(p * q)


class GradedMarker(NamedTuple):
    """쓰인 순서로 방출되는 차수 표지 (중괄호는 여는 괄호, 괄호는 쉼표 위치)"""
    name: str
    degree: int


def ordering_sign(written: Sequence[GradedMarker], target: Sequence[GradedMarker]) -> int:
    """written 순서를 target 순서로 재배열할 때의 Koszul 부호

    Raises:
        SignConventionError: 두 표지 목록의 구성이 다를 때
    """
    if Counter(written) != Counter(target):
        raise SignConventionError("표지 구성이 서로 다릅니다")

    # 같은 표지가 반복되면 나타난 순서대로 짝짓는다
    slots: Dict[GradedMarker, List[int]] = {}
    for index, marker in enumerate(target):
        slots.setdefault(marker, []).append(index)
    positions = [slots[m].pop(0) for m in written]

    sign = 1
    for i in range(len(positions)):
        for j in range(i + 1, len(positions)):
            if positions[i] > positions[j]:
                sign *= koszul_swap_sign(written[i].degree, written[j].degree)
    return sign


def factor_markers(factor: Factor, d: int) -> List[GradedMarker]:
    """인자의 표지를 쓰인 순서대로 나열합니다."""
    if isinstance(factor, Singleton):
        return []
    if isinstance(factor, FlatBrace):
        return [GradedMarker(print_factor(factor), brace_degree(len(factor.labels), d))]
    if isinstance(factor, RawBrace):
        head = GradedMarker("S" + print_factor(factor), brace_degree(len(factor.args), d))
        return [head] + [m for a in factor.args for m in monomial_markers(a, d)]
    comma = GradedMarker("," + print_factor(factor), d - 1)
    return factor_markers(factor.left, d) + [comma] + factor_markers(factor.right, d)


def monomial_markers(mono: Monomial, d: int) -> List[GradedMarker]:
    return [m for f in mono.factors for m in factor_markers(f, d)]


def sort_sign(keys: Sequence, degrees: Sequence[int]) -> Tuple[int, List[int]]:
    """keys 오름차순 정렬의 Koszul 부호와 정렬 순열"""
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    sign = 1
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                sign *= koszul_swap_sign(degrees[order[i]], degrees[order[j]])
    return sign, order


def flat_brace(labels: Sequence[int], d: int) -> Tuple[int, FlatBrace]:
    """라벨을 오름차순으로 정렬한 FlatBrace와 대칭 부호 (-1)^{|σ|d}"""
    inversions = sum(1 for i in range(len(labels)) for j in range(i + 1, len(labels)) if labels[i] > labels[j])
    return parity_sign(inversions * d), FlatBrace(tuple(sorted(labels)))


# ---------------------------------------------------------------------------
# 원소
# ---------------------------------------------------------------------------

class Element:
    """단항식의 정수 계수 선형결합 (계수 0은 저장하지 않음)"""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: AmbientContext, terms: Optional[Dict[Monomial, int]] = None):
        self.ctx = ctx
        self.terms: Dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def zero(cls, ctx: AmbientContext) -> "Element":
        return cls(ctx)

    @classmethod
    def of(cls, ctx: AmbientContext, mono: Monomial, coeff: int = 1) -> "Element":
        return cls(ctx, {mono: coeff})

    @classmethod
    def singleton(cls, ctx: AmbientContext, label: int) -> "Element":
        return cls.of(ctx, Monomial.of(Singleton(label)))

    @classmethod
    def collect(cls, ctx: AmbientContext, pairs: Iterable[Tuple[Monomial, int]]) -> "Element":
        acc: Dict[Monomial, int] = {}
        for mono, coeff in pairs:
            acc[mono] = acc.get(mono, 0) + coeff
        return cls(ctx, acc)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Monomial, int]]:
        return iter(self.terms.items())

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda item: print_monomial(item[0]))

    def degrees(self) -> FrozenSet[int]:
        return frozenset(monomial_degree(m, self.ctx.d) for m in self.terms)

    @property
    def degree(self) -> Optional[int]:
        """동차 원소의 차수. 영원소나 혼합 차수 합이면 None"""
        degs = self.degrees()
        return next(iter(degs)) if len(degs) == 1 else None

    @property
    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def __add__(self, other: "Element") -> "Element":
        return add(self, other)

    def __sub__(self, other: "Element") -> "Element":
        return add(self, scale(-1, other))

    def __neg__(self) -> "Element":
        return scale(-1, self)

    def __rmul__(self, coeff: int) -> "Element":
        return scale(coeff, self)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Element(d={self.ctx.d}, k={self.ctx.k}, n={self.ctx.n}: {print_element(self)})"

    def __str__(self):
        return print_element(self)


def _check_same_ctx(a: Element, b: Element) -> None:
    if a.ctx != b.ctx:
        raise ContextError(f"컨텍스트 불일치: {a.ctx} != {b.ctx}")


def add(a: Element, b: Element) -> Element:
    """계수별 합"""
    _check_same_ctx(a, b)
    acc = dict(a.terms)
    for mono, coeff in b.terms.items():
        acc[mono] = acc.get(mono, 0) + coeff
    return Element(a.ctx, acc)


def scale(c: int, a: Element) -> Element:
    if c == 0:
        return Element.zero(a.ctx)
    return Element(a.ctx, {m: c * v for m, v in a.terms.items()})


def sum_elements(ctx: AmbientContext, elements: Iterable[Element]) -> Element:
    acc: Dict[Monomial, int] = {}
    for el in elements:
        _check_same_ctx(Element.zero(ctx), el)
        for mono, coeff in el.terms.items():
            acc[mono] = acc.get(mono, 0) + coeff
    return Element(ctx, acc)


def product(a: Element, b: Element) -> Element:
    """인자를 이어 붙인 곱 (재정렬은 canonicalize 단계에서)"""
    _check_same_ctx(a, b)
    return Element.collect(a.ctx, (
        (Monomial(ma.factors + mb.factors), ca * cb)
        for ma, ca in a.terms.items()
        for mb, cb in b.terms.items()
    ))


def _bracket_monomials(a: Monomial, b: Monomial, d: int) -> List[Tuple[Monomial, int]]:
    if not a.factors or not b.factors:
        return []
    if len(b.factors) >= 2:
        # 오른쪽 Leibniz 법칙
        head, rest = Monomial(b.factors[:1]), Monomial(b.factors[1:])
        sign = parity_sign(monomial_degree(head, d) * shifted(monomial_degree(a, d), d))
        out = [(Monomial(m.factors + rest.factors), c) for m, c in _bracket_monomials(a, head, d)]
        out += [(Monomial(head.factors + m.factors), sign * c) for m, c in _bracket_monomials(a, rest, d)]
        return out
    if len(a.factors) >= 2:
        sign = -koszul_swap_sign(shifted(monomial_degree(a, d), d), shifted(monomial_degree(b, d), d))
        return [(m, sign * c) for m, c in _bracket_monomials(b, a, d)]
    return [(Monomial.of(Node(a.factors[0], b.factors[0])), 1)]


def bracket(a: Element, b: Element) -> Element:
    """원소의 괄호 [a,b] (곱에 대해서는 Leibniz 법칙으로 전개)"""
    _check_same_ctx(a, b)
    d = a.ctx.d
    return Element.collect(a.ctx, (
        (m, ca * cb * c)
        for ma, ca in a.terms.items()
        for mb, cb in b.terms.items()
        for m, c in _bracket_monomials(ma, mb, d)
    ))


def raw_brace(ctx: AmbientContext, args: Sequence[Element]) -> Element:
    """인자 원소들의 다중선형 전개로 RawBrace 원소를 만듭니다."""
    combos: List[Tuple[Tuple[Monomial, ...], int]] = [((), 1)]
    for arg in args:
        combos = [(monos + (m,), coeff * c) for monos, coeff in combos for m, c in arg.terms.items()]
    return Element.collect(ctx, ((Monomial.of(RawBrace(monos)), coeff) for monos, coeff in combos))


def canonical_order(mono: Monomial, d: int) -> Tuple[int, Monomial]:
    """인자를 최소 라벨 오름차순으로 정렬 (Koszul 부호 포함)"""
    keys = [min_label(f) for f in mono.factors]
    degrees = [factor_degree(f, d) for f in mono.factors]
    sign, order = sort_sign(keys, degrees)
    return sign, Monomial(tuple(mono.factors[i] for i in order))


# ---------------------------------------------------------------------------
# 재라벨
# ---------------------------------------------------------------------------

def relabel_factor(factor: Factor, mapping: Callable[[int], int], d: int) -> Tuple[int, Factor]:
    if isinstance(factor, Singleton):
        return 1, Singleton(mapping(factor.label))
    if isinstance(factor, FlatBrace):
        return flat_brace([mapping(l) for l in factor.labels], d)
    if isinstance(factor, RawBrace):
        sign, args = 1, []
        for arg in factor.args:
            s, m = relabel_monomial(arg, mapping, d)
            sign *= s
            args.append(m)
        return sign, RawBrace(tuple(args))
    sl, left = relabel_factor(factor.left, mapping, d)
    sr, right = relabel_factor(factor.right, mapping, d)
    return sl * sr, Node(left, right)


def relabel_monomial(mono: Monomial, mapping: Callable[[int], int], d: int) -> Tuple[int, Monomial]:
    sign, factors = 1, []
    for f in mono.factors:
        s, g = relabel_factor(f, mapping, d)
        sign *= s
        factors.append(g)
    return sign, Monomial(tuple(factors))


def relabel(el: Element, mapping: Callable[[int], int], ctx: AmbientContext) -> Element:
    """라벨을 바꾼 원소를 ctx 안에서 만듭니다 (중괄호 재정렬 부호 포함)."""
    out = []
    for mono, coeff in el.terms.items():
        sign, image = relabel_monomial(mono, mapping, ctx.d)
        out.append((image, sign * coeff))
    return Element.collect(ctx, out)


# ---------------------------------------------------------------------------
# 식의 차수
# ---------------------------------------------------------------------------

def expr_degree(expr: Expr, d: int) -> int:
    """정규화 없이 계산한 식의 차수

    Raises:
        ExpressionError: 합의 항들의 차수가 다를 때
    """
    if isinstance(expr, Var):
        return 0
    if isinstance(expr, Brace):
        return brace_degree(len(expr.args), d) + sum(expr_degree(a, d) for a in expr.args)
    if isinstance(expr, Bracket):
        return d - 1 + expr_degree(expr.left, d) + expr_degree(expr.right, d)
    if isinstance(expr, Product):
        return sum(expr_degree(f, d) for f in expr.factors)
    if isinstance(expr, Scaled):
        return expr_degree(expr.body, d)
    degs = {expr_degree(t, d) for t in expr.terms}
    if len(degs) != 1:
        raise ExpressionError(f"비동차 합: 항의 차수 {sorted(degs)}")
    return degs.pop()


# ---------------------------------------------------------------------------
# 출력
# ---------------------------------------------------------------------------

def print_factor(factor: Factor) -> str:
    if isinstance(factor, Singleton):
        return f"x{factor.label}"
    if isinstance(factor, FlatBrace):
        return "{" + ",".join(f"x{l}" for l in factor.labels) + "}"
    if isinstance(factor, RawBrace):
        return "{" + ",".join(print_monomial(a) for a in factor.args) + "}"
    return f"[{print_factor(factor.left)},{print_factor(factor.right)}]"


def print_monomial(mono: Monomial) -> str:
    if not mono.factors:
        return "1"
    return "*".join(print_factor(f) for f in mono.factors)


def print_element(el: Element) -> str:
    """정수 계수를 항상 붙인 출력. 영원소는 "0"."""
    if el.is_zero():
        return "0"
    parts = []
    for index, (mono, coeff) in enumerate(el.sorted_terms()):
        body = print_monomial(mono)
        if index == 0:
            parts.append(f"{coeff}*{body}")
        elif coeff < 0:
            parts.append(f"-{-coeff}*{body}")
        else:
            parts.append(f"+{coeff}*{body}")
    return "".join(parts)


def element_to_dict(el: Element) -> dict:
    """JSON 스키마 {ambient, degree, terms}"""
    return {
        "ambient": {"d": el.ctx.d, "k": el.ctx.k, "n": el.ctx.n},
        "degree": el.degree,
        "terms": [{"coeff": c, "monomial": print_monomial(m)} for m, c in el.sorted_terms()],
    }
