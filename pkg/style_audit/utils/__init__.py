# -*- coding: utf-8 -*-
"""
工具层 - 通用辅助函数
"""

from style_audit.utils.text import tokenize

__all__ = [
    "tokenize",
]
