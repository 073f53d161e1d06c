#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""명령행 진입점: parse, normalize, degree, compose, verify, basis, signs

종료 코드: 0 성공, 1 내부 오류 또는 검증 실패, 2 사용자 입력 오류
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Sequence

from algebra_utils import element_to_dict, expr_degree, print_element, print_monomial
from basis_utils import degree_table, enumerate_basis, oracle_dimension
from config_utils import load_settings, override_settings
from error_utils import ClassificationError, USER_ERRORS
from expr_utils import expr_to_dict, make_context, parse, print_expr
from forest_utils import verify_theorem_sign
from logger_utils import setup_logging, shutdown_logging
from operad_utils import classify, compose, graft_expr
from rewrite_utils import normalize
from verify_utils import SUITES, all_passed, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USER_ERROR = 2


def _int_list(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"쉼표로 구분된 정수 목록이어야 합니다: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("빈 목록")
    return values


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"정수가 아닙니다: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"양의 정수여야 합니다: {value}")
    return value


def _emit(args, payload: dict, lines: Sequence[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, ensure_ascii=False))
    else:
        for line in lines:
            print(line)


def _classify_text(el) -> str:
    try:
        return classify(el).value
    except ClassificationError:
        return "-"


# ---------------------------------------------------------------------------
# 명령
# ---------------------------------------------------------------------------

def cmd_parse(args) -> int:
    ctx = make_context(args.d, args.k, args.n)
    expr = parse(args.expression, ctx)
    _emit(args, {"expression": print_expr(expr), "ast": expr_to_dict(expr)}, [print_expr(expr)])
    return EXIT_OK


def cmd_normalize(args) -> int:
    ctx = make_context(args.d, args.k, args.n)
    el = normalize(parse(args.expression, ctx), ctx)
    degree = "-" if el.degree is None else str(el.degree)
    _emit(args, element_to_dict(el), [print_element(el), f"degree: {degree}"])
    return EXIT_OK


def cmd_degree(args) -> int:
    ctx = make_context(args.d, args.k, args.n)
    expr = parse(args.expression, ctx)
    written = expr_degree(expr, ctx.d)
    normal = normalize(expr, ctx).degree
    _emit(args, {"expression": written, "normal_form": normal},
          [f"expression: {written}", f"normal form: {'-' if normal is None else normal}"])
    return EXIT_OK


def cmd_compose(args) -> int:
    ctx_a = make_context(args.d, args.k1, args.n1)
    ctx_b = make_context(args.d, args.k2, args.n2)
    expr_a = parse(args.outer, ctx_a)
    expr_b = parse(args.inner, ctx_b)
    graft = graft_expr(expr_a, args.at, expr_b, args.n1, args.n2)

    a = normalize(expr_a, ctx_a)
    b = normalize(expr_b, ctx_b)
    result = compose(a, args.at, b)

    classes = {"outer": _classify_text(a), "inner": _classify_text(b)}
    payload = element_to_dict(result)
    payload.update({"graft": print_expr(graft), "classes": classes})
    _emit(args, payload, [
        f"graft: {print_expr(graft)}",
        f"classes: {classes['outer']} ∘_{args.at} {classes['inner']}",
        print_element(result),
    ])
    return EXIT_OK


def cmd_verify(args) -> int:
    settings = override_settings(load_settings(), threads=args.threads, seed=args.seed,
                                 random_cases=args.random)

    report = run_suite(args.suite, args.d, args.k, settings=settings, progress=not args.quiet, ns=args.n)
    passed = all_passed(report)
    failed = int((~report["passed"]).sum()) if len(report) else 0

    if args.format == "json":
        print(json.dumps({"suite": args.suite, "seed": settings.seed, "passed": passed,
                          "cases": report.to_dict(orient="records")}, ensure_ascii=False))
    else:
        shown = report if args.all else report[~report["passed"]]
        if len(shown):
            print(shown[["case_id", "passed", "detail"]].to_string(index=False))
        print(f"{args.suite}: {len(report)}개 중 통과 {len(report) - failed}, 실패 {failed}")
    return EXIT_OK if passed else EXIT_FAILURE


def cmd_basis(args) -> int:
    ctx = make_context(args.d, args.k, args.n)
    if args.degree is None:
        table = degree_table(ctx, with_oracle=args.oracle)
        if args.format == "json":
            print(json.dumps({"ambient": {"d": ctx.d, "k": ctx.k, "n": ctx.n},
                              "degrees": table.to_dict(orient="records")}))
        else:
            print(table.to_string(index=False))
        return EXIT_OK

    monomials = enumerate_basis(ctx, args.degree)
    payload = {"ambient": {"d": ctx.d, "k": ctx.k, "n": ctx.n}, "degree": args.degree,
               "monomials": [print_monomial(m) for m in monomials], "count": len(monomials)}
    lines = [print_monomial(m) for m in monomials] + [f"count: {len(monomials)}"]
    status = EXIT_OK
    if args.oracle:
        dimension = oracle_dimension(ctx, args.degree)
        payload["oracle"] = dimension
        lines.append(f"oracle: {dimension}")
        if dimension != len(monomials):
            logger.warning(f"[기저 불일치] 열거 {len(monomials)} != 오라클 {dimension}")
            status = EXIT_FAILURE
    _emit(args, payload, lines)
    return status


def cmd_signs(args) -> int:
    ledger = verify_theorem_sign(args.k1, args.k2, args.d)
    lines = [f"{text}: {sign:+d}" for text, sign in ledger.steps]
    lines.append(f"total: {ledger.product:+d}")
    lines += [f"check {name}: expected {e:+d}, observed {o:+d}" for name, e, o in ledger.checks]
    lines += [f"note {name}: stated {s:+d}, used {u:+d}" for name, s, u in ledger.notes]
    _emit(args, ledger.to_dict(), lines)
    return EXIT_OK


# ---------------------------------------------------------------------------
# 인자 구성
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="출력 형식")
    common.add_argument("--verbose", action="store_true", help="DEBUG 로그 출력")
    common.add_argument("--log-file", default=None, help="회전 로그 파일 경로")

    parser = argparse.ArgumentParser(prog="overlap-operad",
                                     description="non-k-overlapping 원판 오퍼라드 호몰로지 계산기")
    sub = parser.add_subparsers(dest="command", required=True)

    def ambient(p: argparse.ArgumentParser) -> None:
        p.add_argument("--d", type=int, required=True, help="공간 차원 (>= 2)")
        p.add_argument("--k", type=int, required=True, help="중첩 한계 (>= 2)")
        p.add_argument("--n", type=int, required=True, help="라벨 수")

    for name, handler, helptext in (
        ("parse", cmd_parse, "식을 구문 분석하여 정규 문자열로 출력"),
        ("normalize", cmd_normalize, "정규형과 차수 출력"),
        ("degree", cmd_degree, "식과 정규형의 차수 출력"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        ambient(p)
        p.add_argument("expression")
        p.set_defaults(handler=handler)

    p = sub.add_parser("compose", parents=[common], help="부분 합성 a ∘_i b")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--at", type=int, required=True, help="슬롯 i")
    p.add_argument("outer")
    p.add_argument("inner")
    p.set_defaults(handler=cmd_compose)

    p = sub.add_parser("verify", parents=[common], help="검증 스위트 실행")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--d", type=_int_list, default=None, help="예: 2,3")
    p.add_argument("--k", type=_int_list, default=None, help="예: 3,4")
    p.add_argument("--n", type=_int_list, default=None, help="라벨 수 범위, 예: 3,4,5")
    p.add_argument("--random", type=int, default=None, help="합류성 스위트의 셀당 무작위 식 수")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=_positive_int, default=None)
    p.add_argument("--all", action="store_true", help="통과한 케이스도 출력")
    p.add_argument("--quiet", action="store_true", help="진행 표시줄 숨김")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("basis", parents=[common], help="정규형 단항식 열거")
    ambient(p)
    p.add_argument("--degree", type=int, default=None)
    p.add_argument("--oracle", action="store_true", help="관계 행렬 계수 오라클과 비교")
    p.set_defaults(handler=cmd_basis)

    p = sub.add_parser("signs", parents=[common], help="중괄호 안 중괄호 부호 장부")
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(handler=cmd_signs)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USER_ERROR if e.code not in (0, None) else EXIT_OK

    setup_logging(log_level=logging.DEBUG if args.verbose else logging.WARNING, log_file=args.log_file)
    try:
        return args.handler(args)
    except USER_ERRORS as e:
        print(f"오류: {e}", file=sys.stderr)
        return EXIT_USER_ERROR
    except Exception as e:
        logger.error(f"[내부 오류] {type(e).__name__} - {e}")
        return EXIT_FAILURE
    finally:
        shutdown_logging()


if __name__ == "__main__":
    sys.exit(main())
