# -*- coding: utf-8 -*-
"""
异常层级

每个异常类携带 CLI 退出码；stage 记录出错的模块，便于诊断输出。
"""

from typing import Optional


class AuditError(Exception):
    """所有审计错误的基类"""

    exit_code = 5

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.stage = stage


class ConfigError(AuditError):
    """配置错误（在任何网络请求之前报告）"""

    exit_code = 2


class CorpusError(AuditError):
    """语料读取/校验错误"""

    exit_code = 3


class EndpointError(AuditError):
    """端点传输错误、响应无法解析、向量不合法"""

    exit_code = 4


class GenerationError(EndpointError):
    """单条改写在重试后仍被拒绝（空输出或过短）"""
