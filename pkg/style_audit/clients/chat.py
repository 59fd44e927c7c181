# -*- coding: utf-8 -*-
"""
对话补全客户端（OpenAI 兼容：POST {base_url}/v1/chat/completions）
"""

from typing import Dict, List, Protocol

from style_audit.clients.base import OpenAICompatClient
from style_audit.errors import EndpointError
from style_audit.utils.logging_decorator import log_function

Message = Dict[str, str]


class ChatEndpoint(Protocol):
    """改写服务需要的最小接口"""

    def complete(self, model: str, messages: List[Message], temperature: float) -> str:
        ...


class ChatClient(OpenAICompatClient):
    """对话补全客户端"""

    @log_function(level="DEBUG")
    def complete(self, model: str, messages: List[Message], temperature: float) -> str:
        """
        发送一次对话请求

        Returns:
            choices[0].message.content
        """
        completion = self._call(
            "chat.completions",
            self._client.chat.completions.create,
            model=model,
            messages=messages,
            temperature=temperature,
        )
        # 非 JSON 响应时 SDK 直接返回文本
        try:
            content = completion.choices[0].message.content
        except (AttributeError, IndexError, TypeError) as e:
            raise EndpointError(f"对话响应缺少 choices[0].message.content: {str(completion)[:300]}") from e
        if not isinstance(content, str):
            raise EndpointError(f"对话响应 content 不是字符串: {type(content).__name__}")
        return content
