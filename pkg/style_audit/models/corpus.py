# -*- coding: utf-8 -*-
"""
语料相关数据模型
"""

from typing import Dict, List

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from style_audit.models.style import ALL_STYLES, StyleId


def _clean_variants(v: Dict[StyleId, str]) -> Dict[StyleId, str]:
    """去首尾空白、校验非空、按规范顺序排列"""
    out: Dict[StyleId, str] = {}
    for style in ALL_STYLES:
        if style not in v:
            continue
        text = (v[style] or "").strip()
        if not text:
            raise ValueError(f"{style.value} 文本为空")
        out[style] = text
    if StyleId.ORIGINAL not in out:
        raise ValueError("缺少必需的 original 键")
    return out


class AuditGroup(BaseModel):
    """
    一个语义单元：查询及其风格改写 + 金标文档及其风格改写

    仅做首尾空白裁剪，内部内容（emoji、换行）原样保留。
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    group_id: str = Field(..., min_length=1, description="语料内唯一的组 ID")
    query_variants: Dict[StyleId, str] = Field(..., description="StyleId → 查询文本")
    doc_variants: Dict[StyleId, str] = Field(..., description="StyleId → 文档文本")

    @field_validator("query_variants", "doc_variants")
    @classmethod
    def _check_variants(cls, v: Dict[StyleId, str]) -> Dict[StyleId, str]:
        return _clean_variants(v)

    def missing(self, side: str) -> List[StyleId]:
        """某一侧（document/query）缺失的风格"""
        variants = self.doc_variants if side == "document" else self.query_variants
        return [s for s in ALL_STYLES if s not in variants]

    @property
    def docs_complete(self) -> bool:
        return len(self.doc_variants) == len(ALL_STYLES)

    @property
    def queries_complete(self) -> bool:
        return len(self.query_variants) == len(ALL_STYLES)

    @property
    def is_complete(self) -> bool:
        """两侧都包含全部 10 个风格"""
        return self.docs_complete and self.queries_complete

    def documents(self) -> List[str]:
        """按规范顺序返回文档变体（要求文档侧完整）"""
        return [self.doc_variants[s] for s in ALL_STYLES]


class StylePair(BaseModel):
    """待改写的 (query, document) 原始对"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    group_id: str = Field(..., min_length=1)
    query: str
    document: str

    @field_validator("query", "document")
    @classmethod
    def _strip(cls, v: str) -> str:
        v = v.strip()
        if not v:
            raise ValueError("文本为空")
        return v


class QAAnswer(BaseModel):
    """一个问答系统给出的答案及人工正确性标注"""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    system_id: str = Field(..., alias="system", min_length=1)
    text: str
    human_correct: bool

    @field_validator("text")
    @classmethod
    def _strip(cls, v: str) -> str:
        return v.strip()


class QARecord(BaseModel):
    """问题、标准答案与各系统答案"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    question: str
    gt_answer: str
    answers: List[QAAnswer] = Field(default_factory=list)

    @field_validator("question", "gt_answer")
    @classmethod
    def _strip(cls, v: str) -> str:
        return v.strip()

    @model_validator(mode="after")
    def _check(self):
        if not self.gt_answer:
            raise ValueError("gt_answer 为空")
        seen = set()
        for a in self.answers:
            if a.system_id in seen:
                raise ValueError(f"system_id 重复: {a.system_id}")
            seen.add(a.system_id)
        return self
