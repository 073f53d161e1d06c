#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""괄호/중괄호 식의 구문 분석, 검증, 출력

사용자가 입력하는 모든 원소는 이 모듈을 거쳐 들어옵니다.
문법 (공백 무시):

    element := [ "+" | "-" ] term { ("+" | "-") term }
    term    := [ integer "*" ] factor { ("*" | "·") factor }
    factor  := var | brace | bracket | "(" element ")"
    var     := "x" digits
    brace   := "{" element { "," element } "}"
    bracket := "[" element "," element "]"
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from error_utils import ContextError, ExpressionError

logger = logging.getLogger(__name__)


class AmbientContext(BaseModel):
    """주변 컨텍스트 (d: 공간 차원, k: 중첩 한계, n: 라벨 수)"""

    model_config = ConfigDict(frozen=True)

    d: int = Field(ge=2)
    k: int = Field(ge=2)
    n: int = Field(ge=0)

    def with_n(self, n: int) -> "AmbientContext":
        return make_context(self.d, self.k, n)

    def with_k(self, k: int) -> "AmbientContext":
        return make_context(self.d, k, self.n)


def make_context(d: int, k: int, n: int) -> AmbientContext:
    """검증된 AmbientContext를 생성합니다. d=1 등은 ContextError."""
    try:
        return AmbientContext(d=d, k=k, n=n)
    except ValidationError as e:
        raise ContextError(f"잘못된 컨텍스트 (d={d}, k={k}, n={n}): d≥2, k≥2, n≥0 이어야 합니다") from e


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    label: int


@dataclass(frozen=True)
class Brace:
    args: Tuple["Expr", ...]


@dataclass(frozen=True)
class Bracket:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Product:
    factors: Tuple["Expr", ...]


@dataclass(frozen=True)
class Scaled:
    coeff: int
    body: "Expr"


@dataclass(frozen=True)
class Sum:
    terms: Tuple["Expr", ...]


Expr = Union[Var, Brace, Bracket, Product, Scaled, Sum]


# ---------------------------------------------------------------------------
# 토큰화
# ---------------------------------------------------------------------------

_PUNCT = {"{", "}", "[", "]", "(", ")", ",", "+", "-", "*", "·"}
MAX_NESTING = 100


@dataclass(frozen=True)
class _Token:
    kind: str  # 'var', 'int', 'punct', 'end'
    text: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, i))
            i += 1
            continue
        if ch == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit() and text[j].isascii():
                j += 1
            if j == i + 1:
                raise ExpressionError("'x' 뒤에 라벨 숫자가 필요합니다", i)
            tokens.append(_Token("var", text[i + 1:j], i))
            i = j
            continue
        if ch.isdigit() and ch.isascii():
            j = i
            while j < len(text) and text[j].isdigit() and text[j].isascii():
                j += 1
            tokens.append(_Token("int", text[i:j], i))
            i = j
            continue
        raise ExpressionError(f"예상치 못한 문자 {ch!r}", i)
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    """재귀 하강 파서"""

    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0
        self.depth = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def _is(self, text: str) -> bool:
        return self.current.kind == "punct" and self.current.text == text

    def _expect(self, text: str) -> _Token:
        if not self._is(text):
            found = self.current.text or "입력 끝"
            raise ExpressionError(f"{text!r}가 필요하지만 {found!r}를 만났습니다", self.current.pos)
        return self._advance()

    def parse(self) -> Expr:
        expr = self.element()
        if self.current.kind != "end":
            raise ExpressionError(f"해석되지 않은 입력 {self.current.text!r}", self.current.pos)
        return expr

    def element(self) -> Expr:
        terms = [self._signed_term(allow_plus=True)]
        while self._is("+") or self._is("-"):
            terms.append(self._signed_term(allow_plus=True))
        if len(terms) == 1:
            return terms[0]
        return Sum(tuple(terms))

    def _signed_term(self, allow_plus: bool) -> Expr:
        negative = False
        if self._is("-"):
            self._advance()
            negative = True
        elif allow_plus and self._is("+"):
            self._advance()
        term = self.term()
        if not negative:
            return term
        if isinstance(term, Scaled):
            return Scaled(-term.coeff, term.body)
        return Scaled(-1, term)

    def term(self) -> Expr:
        coeff = None
        if self.current.kind == "int":
            coeff = int(self._advance().text)
            self._expect("*")
        factors = [self.factor()]
        while self._is("*") or self._is("·"):
            self._advance()
            factors.append(self.factor())
        body = factors[0] if len(factors) == 1 else Product(tuple(factors))
        if coeff is None:
            return body
        return Scaled(coeff, body)

    def factor(self) -> Expr:
        tok = self.current
        if tok.kind == "var":
            self._advance()
            return Var(int(tok.text))
        if tok.kind != "punct" or tok.text not in ("(", "{", "["):
            found = tok.text or "입력 끝"
            raise ExpressionError(f"인자가 필요하지만 {found!r}를 만났습니다", tok.pos)
        if self.depth >= MAX_NESTING:
            raise ExpressionError(f"중첩이 {MAX_NESTING} 단계를 넘습니다", tok.pos)
        self.depth += 1
        try:
            return self._group()
        finally:
            self.depth -= 1

    def _group(self) -> Expr:
        if self._is("("):
            self._advance()
            inner = self.element()
            self._expect(")")
            return inner
        if self._is("{"):
            self._advance()
            args = [self.element()]
            while self._is(","):
                self._advance()
                args.append(self.element())
            self._expect("}")
            return Brace(tuple(args))
        self._expect("[")
        left = self.element()
        self._expect(",")
        right = self.element()
        self._expect("]")
        return Bracket(left, right)


def parse_syntax(text: str) -> Expr:
    """문법만 확인하여 AST를 반환합니다 (컨텍스트 검증 없음)."""
    return _Parser(text).parse()


def parse(text: str, ctx: AmbientContext) -> Expr:
    """문자열을 구문 분석하고 주어진 컨텍스트에서 검증합니다.

    Args:
        text: 입력 식
        ctx: 주변 컨텍스트

    Returns:
        Expr: 검증된 AST
    """
    expr = parse_syntax(text)
    validate(expr, ctx)
    logger.debug(f"[구문 분석] {text!r} -> {print_expr(expr)}")
    return expr


# ---------------------------------------------------------------------------
# 검증
# ---------------------------------------------------------------------------

def _labels(expr: Expr) -> FrozenSet[int]:
    """식의 라벨 집합. 한 항 안에서 라벨이 겹치면 오류."""
    if isinstance(expr, Var):
        return frozenset((expr.label,))
    if isinstance(expr, Scaled):
        return _labels(expr.body)
    if isinstance(expr, Sum):
        sets = [_labels(t) for t in expr.terms]
        for other in sets[1:]:
            if other != sets[0]:
                raise ExpressionError(
                    f"다중선형성 위반: 합의 항들이 서로 다른 라벨 집합을 가집니다 "
                    f"{sorted(sets[0])} != {sorted(other)}")
        return sets[0]

    if isinstance(expr, Brace):
        children = expr.args
    elif isinstance(expr, Bracket):
        children = (expr.left, expr.right)
    else:
        children = expr.factors

    seen: FrozenSet[int] = frozenset()
    for child in children:
        child_labels = _labels(child)
        overlap = seen & child_labels
        if overlap:
            raise ExpressionError(f"다중선형성 위반: 라벨 x{min(overlap)}가 두 번 이상 나타납니다")
        seen = seen | child_labels
    return seen


def capacity(expr: Expr) -> int:
    """중첩 용량: 식이 한 점에 강제로 겹치게 하는 원판의 최대 수"""
    if isinstance(expr, Var):
        return 1
    if isinstance(expr, Scaled):
        return capacity(expr.body)
    if isinstance(expr, Brace):
        caps = sorted((capacity(a) for a in expr.args), reverse=True)
        return sum(caps[:len(caps) - 1])
    if isinstance(expr, Bracket):
        return max(capacity(expr.left), capacity(expr.right))
    children = expr.factors if isinstance(expr, Product) else expr.terms
    return max(capacity(c) for c in children)


def _check_braces(expr: Expr, ctx: AmbientContext) -> None:
    if isinstance(expr, Var):
        return
    if isinstance(expr, Scaled):
        _check_braces(expr.body, ctx)
        return
    if isinstance(expr, Brace):
        if len(expr.args) < 2:
            raise ExpressionError(f"중괄호 인자는 2개 이상이어야 합니다: {print_expr(expr)}")
        for arg in expr.args:
            _check_braces(arg, ctx)
        cap = capacity(expr)
        if cap > ctx.k - 1:
            raise ExpressionError(
                f"중첩 용량 초과: {print_expr(expr)}의 용량 {cap} > k-1 = {ctx.k - 1}")
        return
    if isinstance(expr, Bracket):
        children = (expr.left, expr.right)
    elif isinstance(expr, Product):
        children = expr.factors
    else:
        children = expr.terms
    for child in children:
        _check_braces(child, ctx)


def validate(expr: Expr, ctx: AmbientContext) -> None:
    """라벨 범위, 다중선형성, 중괄호 용량을 검증합니다.

    Raises:
        ExpressionError: 검증 실패 시
    """
    labels = _labels(expr)
    out_of_range = sorted(l for l in labels if not 1 <= l <= ctx.n)
    if out_of_range:
        raise ExpressionError(f"라벨 x{out_of_range[0]}가 범위 1..{ctx.n}를 벗어났습니다")
    if labels != frozenset(range(1, ctx.n + 1)):
        missing = sorted(set(range(1, ctx.n + 1)) - labels)
        raise ExpressionError(f"다중선형성 위반: 라벨 x{missing[0]}가 없습니다")
    _check_braces(expr, ctx)


# ---------------------------------------------------------------------------
# 출력
# ---------------------------------------------------------------------------

def _print_factor(expr: Expr) -> str:
    if isinstance(expr, (Sum, Scaled, Product)):
        return f"({print_expr(expr)})"
    return print_expr(expr)


def _print_body(expr: Expr) -> str:
    # Scaled 본체: 곱은 괄호 없이 이어 붙인다
    if isinstance(expr, Product):
        return "*".join(_print_factor(f) for f in expr.factors)
    return _print_factor(expr)


def _print_term(expr: Expr) -> str:
    # 합 안의 합은 괄호로 감싸야 평탄화되지 않는다
    if isinstance(expr, Sum):
        return f"({print_expr(expr)})"
    return print_expr(expr)


def _print_signed(expr: Expr) -> str:
    if isinstance(expr, Scaled) and expr.coeff < 0:
        return f"-{-expr.coeff}*{_print_body(expr.body)}"
    return f"+{_print_term(expr)}"


def print_expr(expr: Expr) -> str:
    """정규 문자열 표현. parse_syntax(print_expr(e)) == e"""
    if isinstance(expr, Var):
        return f"x{expr.label}"
    if isinstance(expr, Brace):
        return "{" + ",".join(print_expr(a) for a in expr.args) + "}"
    if isinstance(expr, Bracket):
        return f"[{print_expr(expr.left)},{print_expr(expr.right)}]"
    if isinstance(expr, Product):
        return "*".join(_print_factor(f) for f in expr.factors)
    if isinstance(expr, Scaled):
        if expr.coeff < 0:
            return f"-{-expr.coeff}*{_print_body(expr.body)}"
        return f"{expr.coeff}*{_print_body(expr.body)}"
    first, *rest = expr.terms
    head = _print_term(first)
    return head + "".join(_print_signed(t) for t in rest)


def expr_to_dict(expr: Expr) -> dict:
    """JSON 출력을 위한 AST 직렬화"""
    if isinstance(expr, Var):
        return {"var": expr.label}
    if isinstance(expr, Brace):
        return {"brace": [expr_to_dict(a) for a in expr.args]}
    if isinstance(expr, Bracket):
        return {"bracket": [expr_to_dict(expr.left), expr_to_dict(expr.right)]}
    if isinstance(expr, Product):
        return {"product": [expr_to_dict(f) for f in expr.factors]}
    if isinstance(expr, Scaled):
        return {"scaled": {"coeff": expr.coeff, "body": expr_to_dict(expr.body)}}
    return {"sum": [expr_to_dict(t) for t in expr.terms]}


def relabel_expr(expr: Expr, mapping) -> Expr:
    """라벨을 mapping(label) -> label 로 바꾼 식"""
    if isinstance(expr, Var):
        return Var(mapping(expr.label))
    if isinstance(expr, Brace):
        return Brace(tuple(relabel_expr(a, mapping) for a in expr.args))
    if isinstance(expr, Bracket):
        return Bracket(relabel_expr(expr.left, mapping), relabel_expr(expr.right, mapping))
    if isinstance(expr, Product):
        return Product(tuple(relabel_expr(f, mapping) for f in expr.factors))
    if isinstance(expr, Scaled):
        return Scaled(expr.coeff, relabel_expr(expr.body, mapping))
    return Sum(tuple(relabel_expr(t, mapping) for t in expr.terms))


if __name__ == "__main__":
    ctx = make_context(2, 3, 5)
    sample = parse("x2*[{x1,x3,x4},x5]", ctx)
    print(sample)
    print(print_expr(sample))
