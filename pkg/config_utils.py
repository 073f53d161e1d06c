#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""실행 설정 (스레드 수, 기본 시드) 로딩"""

import os
import logging
from typing import Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from error_utils import ContextError

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = "OVERLAP_OPERAD_THREADS"
DEFAULT_SEED = 20240917
DEFAULT_RANDOM_CASES = 1000


def _default_threads() -> int:
    return max(1, min(8, os.cpu_count() or 1))


class RuntimeSettings(BaseModel):
    """프로세스 단위 실행 설정"""

    model_config = ConfigDict(frozen=True)

    threads: int = Field(default_factory=_default_threads, ge=1)
    seed: int = DEFAULT_SEED
    random_cases: int = Field(default=DEFAULT_RANDOM_CASES, ge=0)


def load_settings(environ: Optional[Mapping[str, str]] = None) -> RuntimeSettings:
    """환경 변수에서 설정을 읽습니다.

    Args:
        environ: 환경 변수 매핑 (None이면 os.environ)

    Returns:
        RuntimeSettings: 검증된 설정
    """
    env = os.environ if environ is None else environ
    raw = env.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return RuntimeSettings()

    try:
        settings = RuntimeSettings(threads=int(raw))
    except (ValueError, ValidationError) as e:
        logger.error(f"[설정 오류] {THREADS_ENV_VAR}={raw!r}: {type(e).__name__}")
        raise ContextError(f"{THREADS_ENV_VAR}는 양의 정수여야 합니다: {raw!r}") from e

    logger.debug(f"[설정] 스레드 수 제한: {settings.threads}")
    return settings


def override_settings(settings: RuntimeSettings, **overrides) -> RuntimeSettings:
    """None 이 아닌 값으로 덮어쓴 새 설정

    Raises:
        ContextError: 덮어쓴 값이 검증을 통과하지 못할 때
    """
    values = {key: value for key, value in overrides.items() if value is not None}
    try:
        return RuntimeSettings(**{**settings.model_dump(), **values})
    except ValidationError as e:
        fields = ", ".join(str(err["loc"][0]) for err in e.errors())
        logger.error(f"[설정 오류] {fields}: {type(e).__name__}")
        raise ContextError(f"잘못된 실행 설정 ({fields}): {values}") from e
