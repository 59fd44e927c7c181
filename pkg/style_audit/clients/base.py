# -*- coding: utf-8 -*-
"""
OpenAI 兼容端点的基础客户端

重试与退避交给 openai SDK（408/409/429/5xx 与连接错误），
这里只负责构造客户端并把 SDK 异常统一映射为 EndpointError。
"""

import logging
from typing import Any, Callable, Optional, TypeVar

import httpx
from openai import APIConnectionError, APIError, APIStatusError, OpenAI

from style_audit import config
from style_audit.errors import EndpointError

logger = logging.getLogger(__name__)

T = TypeVar("T")

# 本地 OpenAI 兼容服务通常不校验密钥，但 SDK 要求非空
PLACEHOLDER_KEY = "EMPTY"


class OpenAICompatClient:
    """
    openai.OpenAI 的薄封装

    Args:
        base_url: 服务根地址（不含 /v1）
        api_key: 为空时读取 STYLE_AUDIT_API_KEY
        timeout: 单次请求超时（秒）
        max_retries: SDK 内部重试次数
        http_client: 自定义 httpx.Client（测试时注入 MockTransport）
    """

    def __init__(
        self,
        base_url: str,
        api_key: Optional[str] = None,
        timeout: float = config.HTTP_TIMEOUT,
        max_retries: int = config.HTTP_RETRIES,
        http_client: Optional[httpx.Client] = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.max_retries = max_retries
        key = api_key if api_key is not None else config.api_key()
        self._client = OpenAI(
            base_url=f"{self.base_url}/v1",
            api_key=key or PLACEHOLDER_KEY,
            timeout=timeout,
            max_retries=max_retries,
            http_client=http_client,
        )

    def close(self) -> None:
        try:
            self._client.close()
        except Exception:
            pass

    def _call(self, what: str, fn: Callable[..., T], **kwargs: Any) -> T:
        """调用 SDK 方法，异常映射为 EndpointError"""
        try:
            return fn(**kwargs)
        except APIStatusError as e:
            raise EndpointError(f"HTTP {e.status_code} from {self.base_url} {what}: {e.message}") from e
        except APIConnectionError as e:
            logger.warning(f"请求 {self.base_url} {what} 失败: {e}")
            raise EndpointError(
                f"{self.base_url} {what} 在 {self.max_retries + 1} 次尝试后仍失败: {e}"
            ) from e
        except (APIError, ValueError) as e:
            raise EndpointError(f"{self.base_url} {what} 响应无法解析: {e}") from e
