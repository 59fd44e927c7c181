# -*- coding: utf-8 -*-
"""
打分器描述模型

SPEC 语法：
- embedding:<model_id>@<base_url>   （省略 @<base_url> 时使用默认端点）
- bm25[:k1=...,b=...]
- mock:<base>[+bump=<style|query>[:<amount>]]
"""

from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from style_audit.errors import ConfigError
from style_audit.models.style import StyleId

ScorerKind = Literal["embedding", "bm25", "mock"]
SCORER_KINDS = ("embedding", "bm25", "mock")


class Bm25Params(BaseModel):
    """BM25 参数"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    k1: float = Field(default=1.5, gt=0.0)
    b: float = Field(default=0.75, ge=0.0, le=1.0)


class MockTableEntry(BaseModel):
    """固定相似度表的一项"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    query: str
    candidate: str
    score: float


class MockSpec(BaseModel):
    """
    确定性离线打分器规格

    base:
    - canonical: 1 / (1 + 候选风格的规范位置)，与文本无关
    - hash: 0.9 × sha256(query, candidate) 导出的 [0,1) 伪随机数；文本相同 → 1.0
    - constant: 恒为 0.5
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    base: Literal["canonical", "hash", "constant"] = "hash"
    bump_style: Optional[StyleId] = None
    bump_query: bool = False
    bump: float = 1.0
    table: List[MockTableEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check(self):
        if self.bump_style is not None and self.bump_query:
            raise ValueError("bump 只能指向一个风格或跟随查询风格，不能同时")
        return self

    def label(self) -> str:
        s = f"mock:{self.base}"
        if self.bump_style is not None:
            s += f"+bump={self.bump_style.value}:{self.bump:g}"
        elif self.bump_query:
            s += f"+bump=query:{self.bump:g}"
        if self.table:
            s += f"+table[{len(self.table)}]"
        return s


class ScorerDescriptor(BaseModel):
    """打分器描述"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ScorerKind
    model_id: Optional[str] = None
    endpoint: Optional[str] = None
    bm25_params: Optional[Bm25Params] = None
    mock_spec: Optional[MockSpec] = None

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data):
        if isinstance(data, dict):
            data = dict(data)
            if data.get("kind") == "bm25" and data.get("bm25_params") is None:
                data["bm25_params"] = Bm25Params()
            if data.get("kind") == "mock" and data.get("mock_spec") is None:
                data["mock_spec"] = MockSpec()
        return data

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "embedding" and not (self.model_id and self.endpoint):
            raise ValueError("embedding 打分器需要 model_id 与 endpoint")
        return self

    def label(self) -> str:
        """报告中使用的打分器摘要（稳定，不含密钥）"""
        if self.kind == "embedding":
            return f"embedding:{self.model_id}@{self.endpoint}"
        if self.kind == "bm25":
            p = self.bm25_params or Bm25Params()
            return f"bm25:k1={p.k1:g},b={p.b:g}"
        return (self.mock_spec or MockSpec()).label()

    # ----- 解析 -----
    @classmethod
    def parse(cls, spec: str, default_endpoint: Optional[str] = None) -> "ScorerDescriptor":
        """解析单个 SPEC 字符串"""
        raw = spec.strip()
        kind, _, rest = raw.partition(":")
        kind = kind.strip().lower()
        try:
            if kind == "embedding":
                return cls._parse_embedding(rest, default_endpoint)
            if kind == "bm25":
                return cls(kind="bm25", bm25_params=_parse_bm25_params(rest))
            if kind == "mock":
                return cls(kind="mock", mock_spec=_parse_mock_spec(rest))
        except (ValidationError, ValueError) as e:
            raise ConfigError(f"无法解析打分器 SPEC '{spec}': {e}", stage="scorers") from e
        raise ConfigError(
            f"未知打分器类型 '{kind}'（可选: {', '.join(SCORER_KINDS)}）", stage="scorers"
        )

    @classmethod
    def _parse_embedding(cls, rest: str, default_endpoint: Optional[str]) -> "ScorerDescriptor":
        model_id, sep, base_url = rest.rpartition("@")
        if not sep:
            model_id, base_url = rest, default_endpoint or ""
        model_id, base_url = model_id.strip(), base_url.strip().rstrip("/")
        if not model_id:
            raise ValueError("缺少 model_id")
        if not base_url:
            raise ValueError("缺少端点地址（使用 model@url 或 --endpoint）")
        return cls(kind="embedding", model_id=model_id, endpoint=base_url)


def _parse_bm25_params(rest: str) -> Bm25Params:
    values = {}
    for part in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, val = part.partition("=")
        if not sep or key.strip() not in ("k1", "b"):
            raise ValueError(f"BM25 参数格式应为 k1=..,b=..，得到 '{part}'")
        values[key.strip()] = float(val)
    return Bm25Params(**values)


def _parse_mock_spec(rest: str) -> MockSpec:
    base, *mods = [p.strip() for p in rest.split("+")]
    fields = {"base": base or "hash"}
    for mod in mods:
        key, sep, val = mod.partition("=")
        if key != "bump" or not sep:
            raise ValueError(f"未知 mock 修饰 '{mod}'")
        target, _, amount = val.partition(":")
        if target.strip().lower() == "query":
            fields["bump_query"] = True
        else:
            fields["bump_style"] = StyleId.parse(target)
        if amount:
            fields["bump"] = float(amount)
    return MockSpec(**fields)


def parse_scorer_list(
    specs: List[str], default_endpoint: Optional[str] = None
) -> List[ScorerDescriptor]:
    """
    解析逗号分隔的 SPEC 列表

    bm25 参数本身含逗号（bm25:k1=1.2,b=0.5），因此不以已知类型开头的片段
    拼回前一个 SPEC。
    """
    merged: List[str] = []
    for item in specs:
        for frag in item.split(","):
            frag = frag.strip()
            if not frag:
                continue
            head = frag.split(":", 1)[0].lower()
            if head in SCORER_KINDS or not merged:
                merged.append(frag)
            else:
                merged[-1] += "," + frag
    return [ScorerDescriptor.parse(s, default_endpoint) for s in merged]
