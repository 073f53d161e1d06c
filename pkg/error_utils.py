#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""오퍼라드 계산 엔진 전체에서 사용하는 예외 계층."""

from typing import Optional


class OperadError(Exception):
    """모든 엔진 예외의 기본 클래스"""


class ExpressionError(OperadError):
    """구문, 라벨 범위, 다중선형성, 중첩 용량 오류

    Args:
        message: 진단 메시지
        position: 입력 문자열에서의 오류 위치 (알 수 없으면 None)
    """

    def __init__(self, message: str, position: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.position = position

    def __str__(self):
        if self.position is None:
            return self.message
        return f"{self.message} (위치 {self.position})"


class ContextError(OperadError):
    """잘못된 주변 컨텍스트 (d, k, n) 또는 컨텍스트 불일치"""


class CompositionError(OperadError):
    """합성 슬롯 범위 오류, 차원 d 불일치"""


class ClassificationError(OperadError):
    """영원소, 비동차 원소 등 분류할 수 없는 입력"""


class ForestError(OperadError):
    """허용되지 않는 k-숲 또는 잘못된 방향 집합 재배열"""


class SignConventionError(OperadError, AssertionError):
    """내부 부호 규약 또는 재작성 불변식 위반 (버그 신호)"""


# CLI 종료 코드 2로 매핑되는 사용자 오류
USER_ERRORS = (ExpressionError, ContextError, CompositionError, ClassificationError, ForestError)
