# -*- coding: utf-8 -*-
"""
客户端模块
"""

from style_audit.clients.cache import DiskCache, cache_gc, cache_key
from style_audit.clients.chat import ChatClient, ChatEndpoint
from style_audit.clients.embedding import EmbeddingClient, EmbeddingEndpoint

__all__ = [
    "DiskCache",
    "cache_gc",
    "cache_key",
    "ChatClient",
    "ChatEndpoint",
    "EmbeddingClient",
    "EmbeddingEndpoint",
]
