# -*- coding: utf-8 -*-
"""
共享分词器

BM25 与所有 n-gram 指标使用同一套规则：
- 按 Unicode 空白切分并转小写
- 去掉每个词首尾的标点
- emoji 作为独立的词保留
"""

from functools import lru_cache
from typing import List, Tuple

import regex as re

# emoji 簇：图形字符 + 肤色修饰/变体选择符/ZWJ 连接；国旗为两个区域指示符
EMOJI_RE = re.compile(
    r"(\p{Regional_Indicator}{2}"
    r"|\p{Extended_Pictographic}(?:\p{Emoji_Modifier}|\uFE0F|\u200D\p{Extended_Pictographic})*)"
)
EDGE_PUNCT_RE = re.compile(r"^\p{P}+|\p{P}+$")


def _strip_punct(piece: str) -> str:
    """去除首尾标点"""
    return EDGE_PUNCT_RE.sub("", piece)


@lru_cache(maxsize=65536)
def _tokenize_cached(text: str) -> Tuple[str, ...]:
    tokens: List[str] = []
    for chunk in text.lower().split():
        # split 带捕获组：偶数下标为普通文本，奇数下标为 emoji
        for i, piece in enumerate(EMOJI_RE.split(chunk)):
            if i % 2 == 1:
                tokens.append(piece)
                continue
            word = _strip_punct(piece)
            if word:
                tokens.append(word)
    return tuple(tokens)


def tokenize(text: str) -> List[str]:
    """
    将文本切分为词列表

    Args:
        text: 输入文本

    Returns:
        词列表（可能为空）

    Example:
        >>> tokenize("Hi! 👍 ok")
        ['hi', '👍', 'ok']
    """
    if not text:
        return []
    return list(_tokenize_cached(text))
