# -*- coding: utf-8 -*-
"""
非侵入式日志装饰器

专注于高层流程追踪：load corpus -> score -> rank -> report
只记录阶段的开始/完成/失败与耗时，不记录参数细节
"""

import functools
import logging
import time
from typing import Callable, Optional


def _extract_run_id(args: tuple, kwargs: dict) -> Optional[str]:
    """
    从函数参数中提取 Run ID

    尝试顺序：
    1. kwargs 中的 run_id
    2. args[0] 如果带 run_id 属性（如 RunConfig）
    """
    if "run_id" in kwargs:
        return kwargs["run_id"]
    if args and hasattr(args[0], "run_id"):
        return getattr(args[0], "run_id", None)
    return None


def log_function(
    level: str = "INFO",
    include_duration: bool = True,
) -> Callable:
    """
    同步函数日志装饰器

    Args:
        level: 日志级别（INFO/DEBUG/WARNING）
        include_duration: 是否记录执行时长

    Example:
        @log_function()
        def audit_document_styles(...):
            ...
    """

    def decorator(func: Callable) -> Callable:
        logger = logging.getLogger(func.__module__)
        log_level = getattr(logging, level.upper())

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            run_id = _extract_run_id(args, kwargs)
            prefix = f"[{run_id}] " if run_id else ""

            logger.log(log_level, f"{prefix}{func.__name__} 开始")

            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                duration = time.perf_counter() - start
                logger.error(
                    f"{prefix}{func.__name__} 失败: {type(e).__name__}: {e} ({duration:.2f}s)",
                    exc_info=logger.isEnabledFor(logging.DEBUG),
                )
                raise

            if include_duration:
                duration = time.perf_counter() - start
                logger.log(log_level, f"{prefix}{func.__name__} 完成 ({duration:.2f}s)")
            else:
                logger.log(log_level, f"{prefix}{func.__name__} 完成")
            return result

        return wrapper

    return decorator
