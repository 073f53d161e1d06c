#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import logging
import logging.handlers
import re
import sys
import threading
from typing import List, Optional, Tuple

# 제어 문자 필터 (줄바꿈, 탭 제외)
_CONTROL_CHARS = re.compile(r'[\x00-\x08\x0B\x0C\x0E-\x1F\x7F]')

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'
MAX_LOG_SIZE_MB = 5
BACKUP_COUNT = 3


# 싱글톤 로거 매니저
class LoggerManager:
    _instance = None
    _lock = threading.Lock()

    @classmethod
    def instance(cls):
        """싱글톤 인스턴스 반환"""
        if cls._instance is None:
            with cls._lock:
                if cls._instance is None:
                    cls._instance = cls()
        return cls._instance

    def __init__(self):
        # (로거, 핸들러) 쌍. 이 모듈이 설치한 핸들러만 관리한다
        self._installed: List[Tuple[logging.Logger, logging.Handler]] = []
        self._installed_lock = threading.Lock()

    def handlers(self, logger: Optional[logging.Logger] = None) -> List[logging.Handler]:
        with self._installed_lock:
            return [h for owner, h in self._installed if logger is None or owner is logger]

    def install(self, logger: logging.Logger, handler: logging.Handler) -> None:
        logger.addHandler(handler)
        with self._installed_lock:
            self._installed.append((logger, handler))

    def uninstall(self, logger: logging.Logger) -> None:
        """logger 에 설치했던 핸들러를 떼어 내고 닫습니다."""
        with self._installed_lock:
            mine = [(o, h) for o, h in self._installed if o is logger]
            self._installed = [(o, h) for o, h in self._installed if o is not logger]
        self._close(mine)

    def shutdown(self) -> None:
        """설치한 모든 핸들러를 닫습니다. 여러 번 호출해도 안전합니다."""
        with self._installed_lock:
            installed, self._installed = self._installed, []
        self._close(installed)

    @staticmethod
    def _close(pairs) -> None:
        for owner, handler in pairs:
            try:
                owner.removeHandler(handler)
                handler.flush()
                handler.close()
            except Exception:
                pass


def sanitize(message: str) -> str:
    try:
        return _CONTROL_CHARS.sub('', message)
    except Exception:
        return "[로그 메시지 처리 오류]"


# 콘솔 로그 핸들러
class SafeConsoleHandler(logging.StreamHandler):
    """stderr 로 쓰는 안전한 콘솔 핸들러 (예외를 밖으로 던지지 않음)"""

    def __init__(self, stream=None):
        super().__init__(stream if stream is not None else sys.stderr)

    def emit(self, record):
        try:
            msg = sanitize(self.format(record))
            if msg:
                self.stream.write(msg + self.terminator)
                self.flush()
        except Exception:
            # 로깅 실패로 명령이 중단되지 않도록 한다
            pass


# 파일 로그 핸들러 (로그 파일 자동 회전)
class SafeRotatingFileHandler(logging.handlers.RotatingFileHandler):
    """크기 기준으로 회전하는 UTF-8 로그 파일 핸들러"""

    def __init__(self, filename, max_size_mb=MAX_LOG_SIZE_MB, backup_count=BACKUP_COUNT):
        super().__init__(filename, maxBytes=max_size_mb * 1024 * 1024,
                         backupCount=backup_count, encoding='utf-8')

    def format(self, record):
        return sanitize(super().format(record))

    def emit(self, record):
        try:
            super().emit(record)
        except Exception:
            pass


# 로깅 설정
def setup_logging(name: str = "", log_level=logging.WARNING, log_file: Optional[str] = None,
                  console: bool = True) -> logging.Logger:
    """로깅 설정

    Args:
        name: 설정할 로거 이름 ("" 는 루트 로거)
        log_level: 로그 레벨
        log_file: 회전 로그 파일 경로 (없으면 파일 기록 안 함)
        console: stderr 콘솔 출력 여부

    Returns:
        logging.Logger: 설정된 로거
    """
    manager = LoggerManager.instance()
    logger = logging.getLogger(name)
    try:
        logger.setLevel(log_level)

        # 이전 호출에서 설치한 핸들러 제거
        manager.uninstall(logger)

        formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

        if console:
            console_handler = SafeConsoleHandler()
            console_handler.setLevel(log_level)
            console_handler.setFormatter(formatter)
            manager.install(logger, console_handler)

        if log_file:
            file_handler = SafeRotatingFileHandler(log_file)
            file_handler.setLevel(log_level)
            file_handler.setFormatter(formatter)
            manager.install(logger, file_handler)

        return logger

    except Exception as e:
        # 로깅 설정 중 오류 발생 시 기본 스트림 핸들러로 대체
        if not manager.handlers(logger):
            handler = logging.StreamHandler(sys.stderr)
            handler.setLevel(log_level)
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            manager.install(logger, handler)

        logger.warning(f"로깅 시스템 초기화 실패: {type(e).__name__} - {e}")
        return logger


# 종료 시 로깅 시스템 정리
def shutdown_logging():
    """로깅 시스템 종료 및 정리"""
    try:
        LoggerManager.instance().shutdown()
    except Exception:
        pass


if __name__ == "__main__":
    logger = setup_logging(log_level=logging.DEBUG, log_file="test_log.log")
    logger.debug("디버그 메시지")
    logger.info("정보 메시지\x07")
    logger.warning("경고 메시지")
    shutdown_logging()
