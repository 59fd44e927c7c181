# -*- coding: utf-8 -*-
"""
应用配置

从环境变量读取配置项（支持 .env 文件）
"""

import os
from typing import Optional

from dotenv import load_dotenv

# 加载 .env 文件
load_dotenv()


def _env(name: str, default: str) -> str:
    """读取字符串环境变量"""
    return os.getenv(name, default)


def _int_env(name: str, default: int) -> int:
    """读取整数环境变量"""
    v = os.getenv(name)
    if v is None:
        return default
    try:
        return int(v)
    except Exception:
        return default


def _float_env(name: str, default: float) -> float:
    """读取浮点环境变量"""
    v = os.getenv(name)
    if v is None:
        return default
    try:
        return float(v)
    except Exception:
        return default


def _bool_env(name: str, default: bool) -> bool:
    """读取布尔环境变量"""
    v = os.getenv(name)
    if v is None:
        return default
    return v.strip().lower() in ("1", "true", "yes", "on")


# ========== 端点配置 ==========
API_KEY_ENV = "STYLE_AUDIT_API_KEY"
BASE_URL = _env("STYLE_AUDIT_BASE_URL", "http://localhost:8000")
HTTP_TIMEOUT = _float_env("STYLE_AUDIT_HTTP_TIMEOUT", 60.0)
HTTP_RETRIES = _int_env("STYLE_AUDIT_HTTP_RETRIES", 3)
EMBED_BATCH = _int_env("STYLE_AUDIT_EMBED_BATCH", 64)

# ========== 运行配置 ==========
CACHE_DIR = _env("STYLE_AUDIT_CACHE_DIR", "./.cache/style_audit")
PARALLELISM = _int_env("STYLE_AUDIT_PARALLELISM", 8)
LOG_LEVEL = _env("STYLE_AUDIT_LOG_LEVEL", "INFO")
PROGRESS = _bool_env("STYLE_AUDIT_PROGRESS", True)
# tqdm 的 disable 参数：None 表示非 TTY 时自动关闭
TQDM_DISABLE = None if PROGRESS else True


def api_key() -> Optional[str]:
    """读取 Bearer token（每次调用时读取，不在导入时缓存）"""
    v = os.getenv(API_KEY_ENV, "").strip()
    return v or None
