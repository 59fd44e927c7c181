# -*- coding: utf-8 -*-
"""
写作风格标识
"""

from enum import Enum
from typing import List


class StyleId(str, Enum):
    """原文 + 9 种改写风格；枚举定义顺序即规范顺序"""

    ORIGINAL = "original"
    STYLE_0 = "style_0"
    STYLE_1 = "style_1"
    STYLE_2 = "style_2"
    STYLE_3 = "style_3"
    STYLE_4 = "style_4"
    STYLE_5 = "style_5"
    STYLE_6 = "style_6"
    STYLE_7 = "style_7"
    STYLE_8 = "style_8"

    @property
    def position(self) -> int:
        """规范顺序中的位置：Original=0, Style0=1, ..., Style8=9"""
        return ALL_STYLES.index(self)

    @property
    def is_generated(self) -> bool:
        return self is not StyleId.ORIGINAL

    @property
    def label(self) -> str:
        """图表标签（Original / Style-0 ...）"""
        if self is StyleId.ORIGINAL:
            return "Original"
        return f"Style-{self.value.rsplit('_', 1)[1]}"

    @classmethod
    def parse(cls, raw: str) -> "StyleId":
        """
        宽松解析：original / style_3 / style-3 / Style3 / 3
        """
        s = raw.strip().lower().replace("-", "_")
        if s.isdigit():
            s = f"style_{s}"
        elif s.startswith("style") and not s.startswith("style_"):
            s = f"style_{s[len('style'):]}"
        return cls(s)

    def __lt__(self, other: "StyleId") -> bool:  # type: ignore[override]
        if not isinstance(other, StyleId):
            return NotImplemented
        return self.position < other.position


ALL_STYLES: List[StyleId] = list(StyleId)
GENERATED_STYLES: List[StyleId] = [s for s in ALL_STYLES if s.is_generated]
N_STYLES = len(ALL_STYLES)
