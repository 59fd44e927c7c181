# -*- coding: utf-8 -*-
"""
嵌入客户端（OpenAI 兼容：POST {base_url}/v1/embeddings）
"""

from typing import List, Protocol

from style_audit.clients.base import OpenAICompatClient
from style_audit.errors import EndpointError
from style_audit.utils.logging_decorator import log_function


class EmbeddingEndpoint(Protocol):
    """嵌入服务需要的最小接口：一次请求，返回与输入同序的向量"""

    def embed(self, model: str, texts: List[str]) -> List[List[float]]:
        ...


class EmbeddingClient(OpenAICompatClient):
    """嵌入客户端"""

    @log_function(level="DEBUG")
    def embed(self, model: str, texts: List[str]) -> List[List[float]]:
        """
        批量获取嵌入

        显式请求 float 编码（很多兼容服务不支持 base64）；
        响应中的 data[i].index 用于还原输入顺序。
        """
        response = self._call(
            "embeddings",
            self._client.embeddings.create,
            model=model,
            input=texts,
            encoding_format="float",
        )
        try:
            items = sorted(response.data, key=lambda d: d.index)
            vectors = [list(item.embedding) for item in items]
        except (AttributeError, TypeError) as e:
            raise EndpointError(f"嵌入响应格式错误: {str(response)[:300]}") from e
        if len(vectors) != len(texts):
            raise EndpointError(f"嵌入响应条数 {len(vectors)} 与输入 {len(texts)} 不一致")
        return vectors
