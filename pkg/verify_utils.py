#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""검증 스위트: 관계 소멸, 합성 자명성, 부호 장부, 합류성

각 스위트는 VerificationCase 목록을 만들고, run_cases 가 이를 스레드
풀에서 실행한 뒤 case_id 순으로 정렬된 DataFrame 보고서를 돌려줍니다.
같은 seed 에서는 언제나 같은 보고서가 나옵니다.
"""

import itertools
import logging
import random
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import pandas as pd
from tqdm import tqdm

from algebra_utils import Element, expr_degree, parity_sign, print_element
from config_utils import RuntimeSettings, load_settings
from error_utils import ContextError
from expr_utils import (
    AmbientContext, Brace, Bracket, Expr, Product, Scaled, Sum, Var,
    capacity, make_context, parse, parse_syntax, print_expr,
)
from forest_utils import psi_brace_pairing, verify_theorem_sign
from operad_utils import classify, compose, graft_expr, slot_in_brace, triviality_witness
from rewrite_utils import (
    brace_in_brace_first_form, brace_in_brace_second_form, normalize, normalize_element,
)

logger = logging.getLogger(__name__)

SUITES = ("relations", "composition", "signs", "confluence")

DEFAULT_RANGES = {
    "relations": ((2, 3), (3, 4, 5)),
    "composition": ((2, 3), (3, 4)),
    "signs": ((2, 3, 4, 5), (3, 4, 5)),
    "confluence": ((2, 3), (3, 4)),
}

CaseCheck = Callable[[], Tuple[bool, str]]


@dataclass(frozen=True)
class VerificationCase:
    case_id: str
    suite: str
    description: str
    check: CaseCheck
    n: Optional[int] = None


def _vanishes(el: Element) -> Tuple[bool, str]:
    return el.is_zero(), "" if el.is_zero() else f"남은 항: {print_element(el)}"


def _expr_vanishes(expr: Expr, ctx: AmbientContext) -> CaseCheck:
    return lambda: _vanishes(normalize(expr, ctx))


# ---------------------------------------------------------------------------
# 무작위 식
# ---------------------------------------------------------------------------

def _split(labels: List[int], parts: int, rng: random.Random) -> List[List[int]]:
    cuts = sorted(rng.sample(range(1, len(labels)), parts - 1))
    bounds = [0] + cuts + [len(labels)]
    return [labels[a:b] for a, b in zip(bounds, bounds[1:])]


def _random_block(labels: List[int], ctx: AmbientContext, rng: random.Random, depth: int) -> Expr:
    if len(labels) == 1:
        return Var(labels[0])
    if depth <= 0:
        return Product(tuple(Var(l) for l in labels))

    roll = rng.random()
    if roll < 0.45:
        arity = rng.randint(2, min(len(labels), ctx.k))
        args = tuple(_random_block(chunk, ctx, rng, depth - 1) for chunk in _split(labels, arity, rng))
        brace = Brace(args)
        if capacity(brace) <= ctx.k - 1:
            return brace
        return Product(args)
    if roll < 0.7:
        left, right = _split(labels, 2, rng)
        return Bracket(_random_block(left, ctx, rng, depth - 1), _random_block(right, ctx, rng, depth - 1))
    if roll < 0.9:
        parts = rng.randint(2, min(3, len(labels)))
        return Product(tuple(_random_block(chunk, ctx, rng, depth - 1) for chunk in _split(labels, parts, rng)))

    first = _random_block(rng.sample(labels, len(labels)), ctx, rng, depth - 1)
    second = _random_block(rng.sample(labels, len(labels)), ctx, rng, depth - 1)
    return Sum((first, Scaled(rng.choice((-2, -1, 1, 2)), second)))


def random_expression(ctx: AmbientContext, rng: random.Random, max_depth: int = 3) -> Expr:
    """ctx 에서 유효한 무작위 다중선형 식 (합, 스칼라, 곱, 괄호, 중첩 중괄호)

    Args:
        ctx: 주변 컨텍스트 (n >= 1)
        rng: 난수 생성기
        max_depth: 중첩 깊이 한계

    Returns:
        Expr: 검증을 통과하는 식
    """
    labels = list(range(1, ctx.n + 1))
    terms = []
    for _ in range(rng.randint(1, 3)):
        rng.shuffle(labels)
        body = _random_block(list(labels), ctx, rng, max_depth)
        coeff = rng.choice((-3, -2, -1, 1, 1, 2, 3))
        terms.append(body if coeff == 1 else Scaled(coeff, body))
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def random_ast(rng: random.Random, depth: int = 4, max_label: int = 9) -> Expr:
    """문법상 올바른 임의 AST (라벨, 다중선형성 검증 없음)"""
    if depth <= 0 or rng.random() < 0.25:
        return Var(rng.randint(1, max_label))
    kind = rng.choice(("brace", "bracket", "product", "scaled", "sum"))
    if kind == "brace":
        return Brace(tuple(random_ast(rng, depth - 1, max_label) for _ in range(rng.randint(1, 4))))
    if kind == "bracket":
        return Bracket(random_ast(rng, depth - 1, max_label), random_ast(rng, depth - 1, max_label))
    if kind == "product":
        return Product(tuple(random_ast(rng, depth - 1, max_label) for _ in range(rng.randint(2, 3))))
    if kind == "scaled":
        return Scaled(rng.randint(-20, 20), random_ast(rng, depth - 1, max_label))
    return Sum(tuple(random_ast(rng, depth - 1, max_label) for _ in range(rng.randint(2, 3))))


# ---------------------------------------------------------------------------
# 관계 소멸
# ---------------------------------------------------------------------------

def _vars(start: int, count: int) -> Tuple[Expr, ...]:
    return tuple(Var(l) for l in range(start, start + count))


def _cluster(kind: str, start: int) -> Tuple[Expr, int]:
    """관계 인스턴스의 Y, Z 후보와 사용한 라벨 수"""
    if kind == "x":
        return Var(start), 1
    if kind == "brace":
        return Brace(_vars(start, 3)), 3
    return Bracket(Var(start), Brace(_vars(start + 1, 3))), 4


def symmetry_instance(d: int, k: int, i: int) -> Expr:
    """{..,xi,xi+1,..} - (-1)^d {..,xi+1,xi,..}"""
    labels = list(range(1, k + 1))
    swapped = labels[:]
    swapped[i - 1], swapped[i] = swapped[i], swapped[i - 1]
    return Sum((Brace(tuple(Var(l) for l in labels)),
                Scaled(-parity_sign(d), Brace(tuple(Var(l) for l in swapped)))))


def generalized_jacobi_instance(d: int, k: int) -> Expr:
    terms = []
    for j in range(1, k + 2):
        rest = tuple(Var(l) for l in range(1, k + 2) if l != j)
        terms.append(Scaled(parity_sign((j - 1) * d), Bracket(Var(j), Brace(rest))))
    return Sum(tuple(terms))


def product_leibniz_instance(k: int) -> Expr:
    xs = _vars(1, k - 1)
    a, b = Var(k), Var(k + 1)
    return Sum((
        Brace(xs + (Product((a, b)),)),
        Scaled(-1, Product((a, Brace(xs + (b,))))),
        Scaled(-1, Product((Brace(xs + (a,)), b))),
    ))


def bracket_leibniz_instance(d: int, k: int) -> Expr:
    xs = _vars(1, k - 1)
    a, b = Var(k), Var(k + 1)
    return Sum((
        Brace(xs + (Bracket(a, b),)),
        Scaled(-parity_sign(d), Bracket(Brace(xs + (b,)), a)),
        Scaled(-1, Bracket(Brace(xs + (a,)), b)),
    ))


def generalized_leibniz_instance(d: int, k: int, kind_y: str, kind_z: str,
                                 bracket_form: bool) -> Optional[Tuple[Expr, int]]:
    """합성 인자 Y·Z 또는 [Y,Z] 를 품은 중괄호의 전개 차이와 라벨 수

    바깥 중괄호의 인자 수는 주변 k 에 꼭 맞게 정합니다. 맞출 수 없으면 None.
    """
    cap = max(capacity(_cluster(kind, 1)[0]) for kind in (kind_y, kind_z))
    outer_arity = k + 1 - cap
    if outer_arity < 3:
        return None

    shift = outer_arity - 1
    y, size_y = _cluster(kind_y, shift + 1)
    z, size_z = _cluster(kind_z, shift + 1 + size_y)
    xs = _vars(1, shift)
    marker = (outer_arity - 1) * d - 1
    deg_y = expr_degree(y, d)

    if bracket_form:
        sign = parity_sign((deg_y + d - 1) * marker)
        expr = Sum((
            Brace(xs + (Bracket(y, z),)),
            Scaled(-sign, Bracket(y, Brace(xs + (z,)))),
            Scaled(-1, Bracket(Brace(xs + (y,)), z)),
        ))
    else:
        sign = parity_sign(deg_y * marker)
        expr = Sum((
            Brace(xs + (Product((y, z)),)),
            Scaled(-sign, Product((y, Brace(xs + (z,))))),
            Scaled(-1, Product((Brace(xs + (y,)), z))),
        ))
    return expr, shift + size_y + size_z


def brace_in_brace_instance(d: int, k1: int, k2: int) -> Expr:
    """바깥 k1, 안쪽 k2 중괄호와 그 마지막 라벨 전개의 차이"""
    outer = _vars(1, k1 - 1)
    inner_labels = list(range(k1, k1 + k2))
    written = [v.label for v in outer] + inner_labels
    terms: List[Expr] = [Brace(outer + (Brace(tuple(Var(l) for l in inner_labels)),))]
    for position in range(k1, k1 + k2):
        label = written[position - 1]
        rest = tuple(Var(l) for l in written if l != label)
        coeff = parity_sign((k1 - 1) * d + (position - 1) * d)
        terms.append(Scaled(-coeff, Bracket(Var(label), Brace(rest))))
    return Sum(tuple(terms))


def relation_cases(ds: Sequence[int], ks: Sequence[int]) -> List[VerificationCase]:
    cases: List[VerificationCase] = []

    def add(case_id: str, description: str, check: CaseCheck, n: int) -> None:
        cases.append(VerificationCase(case_id, "relations", description, check, n))

    for d, k in itertools.product(ds, ks):
        cell = f"relations/d{d}/k{k}"
        for i in range(1, k):
            expr = symmetry_instance(d, k, i)
            add(f"{cell}/symmetry/{i:02d}", print_expr(expr), _expr_vanishes(expr, make_context(d, k, k)), k)

        expr = generalized_jacobi_instance(d, k)
        add(f"{cell}/jacobi", print_expr(expr), _expr_vanishes(expr, make_context(d, k, k + 1)), k + 1)

        expr = product_leibniz_instance(k)
        add(f"{cell}/leibniz-product", print_expr(expr), _expr_vanishes(expr, make_context(d, k, k + 1)), k + 1)

        expr = bracket_leibniz_instance(d, k)
        add(f"{cell}/leibniz-bracket", print_expr(expr), _expr_vanishes(expr, make_context(d, k, k + 1)), k + 1)

        kinds = ("x", "brace", "bracket")
        for kind_y, kind_z in itertools.product(kinds, kinds):
            for bracket_form in (False, True):
                built = generalized_leibniz_instance(d, k, kind_y, kind_z, bracket_form)
                if built is None:
                    continue
                expr, n = built
                form = "bracket" if bracket_form else "product"
                add(f"{cell}/cluster-{form}/{kind_y}-{kind_z}", print_expr(expr),
                    _expr_vanishes(expr, make_context(d, k, n)), n)

        for k1 in range(3, k):
            k2 = k + 2 - k1
            if k2 < 3:
                continue
            ctx = make_context(d, k, k1 + k2 - 1)
            expr = brace_in_brace_instance(d, k1, k2)
            add(f"{cell}/brace-in-brace/{k1}-{k2}", print_expr(expr), _expr_vanishes(expr, ctx), ctx.n)

            outer = list(range(1, k1))
            inner = list(range(k1, k1 + k2))

            def both_forms(ctx=ctx, outer=outer, inner=inner):
                first = brace_in_brace_first_form(ctx, outer, inner)
                second = brace_in_brace_second_form(ctx, outer, inner)
                return _vanishes(normalize_element(first - second))

            add(f"{cell}/brace-in-brace-forms/{k1}-{k2}", "첫째 형태 - 둘째 형태", both_forms, ctx.n)
    return cases


# ---------------------------------------------------------------------------
# 합성 자명성
# ---------------------------------------------------------------------------

def class_representatives(d: int, k: int) -> List[Tuple[str, Element]]:
    """유형 I, II, III 대표 원소 (정규형)"""
    brace = ",".join(f"x{l}" for l in range(1, k + 1))
    second = ",".join(f"x{l}" for l in range(k + 1, 2 * k + 1))
    texts = [
        ("I", "x1*x2", 2),
        ("II-brace", "{" + brace + "}", k),
        ("II-tree", f"[x{k + 1},{{{brace}}}]*x{k + 2}", k + 2),
        ("III", "{" + brace + "}*{" + second + "}", 2 * k),
    ]
    reps = []
    for name, text, n in texts:
        ctx = make_context(d, k, n)
        reps.append((name, normalize(parse(text, ctx), ctx)))
    return reps


def _triviality_check(a: Element, i: int, b: Element) -> CaseCheck:
    def check() -> Tuple[bool, str]:
        expected_zero = triviality_witness(classify(a), classify(b), slot_in_brace(a, i))
        result = compose(a, i, b)
        if result.is_zero() == expected_zero:
            return True, ""
        verdict = "0 이어야 함" if expected_zero else "0 이 아니어야 함"
        return False, f"{verdict}: {print_element(result)}"
    return check


def _compose_texts(d: int, a: Tuple[str, int, int], i: int, b: Tuple[str, int, int]) -> Element:
    (text_a, k1, n1), (text_b, k2, n2) = a, b
    ctx_a, ctx_b = make_context(d, k1, n1), make_context(d, k2, n2)
    return compose(normalize(parse(text_a, ctx_a), ctx_a), i, normalize(parse(text_b, ctx_b), ctx_b))


def composition_cases(ds: Sequence[int], ks: Sequence[int]) -> List[VerificationCase]:
    cases: List[VerificationCase] = []
    for d in ds:
        reps = {k: class_representatives(d, k) for k in ks}
        for k1, k2 in itertools.product(ks, ks):
            for (name_a, a), (name_b, b) in itertools.product(reps[k1], reps[k2]):
                for i in range(1, a.ctx.n + 1):
                    case_id = f"composition/d{d}/k{k1}-k{k2}/{name_a}-{name_b}/{i:02d}"
                    description = f"{print_element(a)} ∘_{i} {print_element(b)}"
                    cases.append(VerificationCase(case_id, "composition", description,
                                                  _triviality_check(a, i, b), a.ctx.n))

        worked = "[{x1,x2,x3},x4]*x5", 3, 5
        brace3 = "{x1,x2,x3}", 3, 3
        examples = [
            ("worked-5", worked, 5, brace3, True),
            ("worked-4", worked, 4, brace3, True),
            ("worked-3", worked, 3, brace3, False),
            ("proof-k5", ("[{x1,x2,x3},{x4,x5,x6}]", 3, 6), 2, ("{x1,x2,x3,x4}", 4, 4), True),
        ]
        for name, a, i, b, zero in examples:
            def check(a=a, i=i, b=b, zero=zero, d=d):
                result = _compose_texts(d, a, i, b)
                grafted = graft_expr(parse_syntax(a[0]), i, parse_syntax(b[0]), a[2], b[2])
                expected = normalize(grafted, result.ctx)
                passed = result.is_zero() == zero and result == expected
                return passed, f"{print_element(result)} / 접붙인 식: {print_element(expected)}"
            cases.append(VerificationCase(f"composition/d{d}/example/{name}", "composition",
                                          f"{a[0]} ∘_{i} {b[0]}", check, a[2]))
    return cases


# ---------------------------------------------------------------------------
# 부호
# ---------------------------------------------------------------------------

def _ledger_check(k1: int, k2: int, d: int) -> CaseCheck:
    def check() -> Tuple[bool, str]:
        ledger = verify_theorem_sign(k1, k2, d)
        return ledger.consistent, f"전체 부호 {ledger.product:+d}"
    return check


def _psi_check(d: int, k: int) -> CaseCheck:
    """중괄호 라벨 순열이 짝짓기 계수를 (-1)^{|σ|d} 만큼 바꾸는지"""
    def check() -> Tuple[bool, str]:
        ctx = make_context(d, k, k)
        base = psi_brace_pairing(list(range(1, k + 1)), d)
        for perm in itertools.permutations(range(1, k + 1)):
            normal = normalize(Brace(tuple(Var(l) for l in perm)), ctx)
            (_, coeff), = normal.terms.items()
            pairing = psi_brace_pairing(list(perm), d)
            if any(pairing[l] != coeff * base[l] for l in base):
                return False, f"순열 {perm}: 계수 {coeff}, 짝짓기 {pairing}"
        return True, ""
    return check


def sign_cases(ds: Sequence[int], ks: Sequence[int]) -> List[VerificationCase]:
    cases: List[VerificationCase] = []
    for d in ds:
        for k1, k2 in itertools.product(ks, ks):
            if k1 < 3 or k2 < 3:
                continue
            cases.append(VerificationCase(f"signs/d{d}/ledger/{k1}-{k2}", "signs",
                                          f"k1={k1}, k2={k2}", _ledger_check(k1, k2, d)))
        for k in (k for k in ks if k >= 3):
            cases.append(VerificationCase(f"signs/d{d}/psi/k{k}", "signs",
                                          f"{{x1..x{k}}} 순열", _psi_check(d, k)))
    return cases


# ---------------------------------------------------------------------------
# 합류성
# ---------------------------------------------------------------------------

def _confluence_check(ctx: AmbientContext, seed: int) -> CaseCheck:
    def check() -> Tuple[bool, str]:
        rng = random.Random(seed)
        expr = random_expression(ctx, rng)
        canonical = normalize(expr, ctx)
        shuffled = normalize(expr, ctx, rng=random.Random(seed + 1))
        if shuffled != canonical:
            return False, f"{print_expr(expr)}: {print_element(canonical)} != {print_element(shuffled)}"
        if normalize_element(canonical) != canonical:
            return False, f"{print_expr(expr)}: 정규형이 고정점이 아닙니다"
        if not canonical.is_zero():
            reparsed = normalize(parse(print_element(canonical), ctx), ctx)
            if reparsed != canonical:
                return False, f"{print_expr(expr)}: 출력 후 재정규화 결과가 다릅니다"
        return True, ""
    return check


def confluence_cases(ds: Sequence[int], ks: Sequence[int], count: int, seed: int,
                     ns: Optional[Sequence[int]] = None) -> List[VerificationCase]:
    """셀마다 count 개의 무작위 식. ns 가 없으면 n 은 k..k+2 에서 고릅니다."""
    cases: List[VerificationCase] = []
    for d, k in itertools.product(ds, ks):
        picker = random.Random(f"{seed}/{d}/{k}")
        for index in range(count):
            n = picker.choice(ns) if ns else picker.randint(k, k + 2)
            ctx = make_context(d, k, n)
            case_seed = picker.getrandbits(32)
            cases.append(VerificationCase(f"confluence/d{d}/k{k}/{index:05d}", "confluence",
                                          f"n={ctx.n}, seed={case_seed}", _confluence_check(ctx, case_seed), n))
    return cases


# ---------------------------------------------------------------------------
# 실행
# ---------------------------------------------------------------------------

def build_suite(suite: str, ds: Optional[Sequence[int]] = None, ks: Optional[Sequence[int]] = None,
                random_cases: Optional[int] = None, seed: Optional[int] = None,
                settings: Optional[RuntimeSettings] = None,
                ns: Optional[Sequence[int]] = None) -> List[VerificationCase]:
    """스위트의 케이스 목록

    ns 가 주어지면 라벨 수가 그 안에 있는 케이스만 남깁니다 (부호 장부처럼
    라벨 수가 없는 케이스는 그대로). 합류성 스위트는 ns 에서 n 을 고릅니다.

    Raises:
        ValueError: 알 수 없는 스위트
        ContextError: ns 에 양수가 아닌 값이 있을 때
    """
    if suite not in SUITES:
        raise ValueError(f"알 수 없는 스위트 {suite!r} (가능: {', '.join(SUITES)})")
    if ns is not None and any(n < 1 for n in ns):
        raise ContextError(f"라벨 수 범위는 양수여야 합니다: {list(ns)}")
    settings = settings or load_settings()
    default_ds, default_ks = DEFAULT_RANGES[suite]
    ds = tuple(ds or default_ds)
    ks = tuple(ks or default_ks)
    if suite == "relations":
        cases = relation_cases(ds, ks)
    elif suite == "composition":
        cases = composition_cases(ds, ks)
    elif suite == "signs":
        cases = sign_cases(ds, ks)
    else:
        count = settings.random_cases if random_cases is None else random_cases
        return confluence_cases(ds, ks, count, settings.seed if seed is None else seed, ns)
    if ns:
        cases = [case for case in cases if case.n is None or case.n in ns]
    return cases


def _run_one(case: VerificationCase) -> dict:
    try:
        passed, detail = case.check()
    except Exception as e:
        passed, detail = False, f"{type(e).__name__} - {e}"
    return {"case_id": case.case_id, "suite": case.suite, "description": case.description,
            "passed": bool(passed), "detail": detail}


def run_cases(cases: Sequence[VerificationCase], threads: int = 1, progress: bool = True) -> pd.DataFrame:
    """케이스를 실행하고 case_id 순으로 정렬된 보고서를 돌려줍니다."""
    rows = []
    show = progress and sys.stderr.isatty()
    with tqdm(total=len(cases), desc="[검증]", file=sys.stderr, disable=not show) as bar:
        if threads <= 1:
            for case in cases:
                rows.append(_run_one(case))
                bar.update(1)
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [pool.submit(_run_one, case) for case in cases]
                for future in as_completed(futures):
                    rows.append(future.result())
                    bar.update(1)

    report = pd.DataFrame(rows, columns=["case_id", "suite", "description", "passed", "detail"])
    report = report.sort_values("case_id", kind="stable").reset_index(drop=True)
    failed = int((~report["passed"]).sum()) if len(report) else 0
    if failed:
        for _, row in report[~report["passed"]].iterrows():
            logger.warning(f"[검증 실패] {row['case_id']}: {row['detail']}")
    logger.info(f"[검증 완료] {len(report)}개 중 실패 {failed}개")
    return report


def run_suite(suite: str, ds: Optional[Sequence[int]] = None, ks: Optional[Sequence[int]] = None,
              random_cases: Optional[int] = None, seed: Optional[int] = None,
              settings: Optional[RuntimeSettings] = None, progress: bool = True,
              ns: Optional[Sequence[int]] = None) -> pd.DataFrame:
    settings = settings or load_settings()
    cases = build_suite(suite, ds, ks, random_cases, seed, settings, ns)
    logger.info(f"[검증 시작] {suite}: {len(cases)}개, 스레드 {settings.threads}")
    return run_cases(cases, settings.threads, progress)


def all_passed(report: pd.DataFrame) -> bool:
    return bool(report["passed"].all()) if len(report) else True
