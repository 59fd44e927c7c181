# -*- coding: utf-8 -*-
"""
审计结果数据模型

JSON 记录格式由各模型的 to_record() 给出，字段顺序固定，保证重复运行字节一致。
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from style_audit.models.style import ALL_STYLES, GENERATED_STYLES, StyleId

RANK_TOL = 1e-9

StdConvention = Literal["population"]
TieRule = Literal["fractional"]


def _canonical(v: Dict[StyleId, float]) -> Dict[StyleId, float]:
    return {s: float(v[s]) for s in ALL_STYLES if s in v}


class RankVector(BaseModel):
    """一组内各风格文档的排名（1 = 最相似，并列取平均名次）"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    ranks: Dict[StyleId, float]

    @field_validator("ranks")
    @classmethod
    def _check(cls, v: Dict[StyleId, float]) -> Dict[StyleId, float]:
        v = _canonical(v)
        m = len(v)
        if m == 0:
            raise ValueError("ranks 不能为空")
        if any(r < 1.0 - RANK_TOL or r > m + RANK_TOL for r in v.values()):
            raise ValueError(f"名次必须位于 [1, {m}]")
        expected = m * (m + 1) / 2.0
        if abs(sum(v.values()) - expected) > RANK_TOL:
            raise ValueError(f"名次之和应为 {expected}，得到 {sum(v.values())}")
        return v

    @property
    def styles(self) -> List[StyleId]:
        return list(self.ranks)

    def values(self) -> List[float]:
        return list(self.ranks.values())


class AvgRankVector(BaseModel):
    """全语料平均名次"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    mean_ranks: Dict[StyleId, float]
    n_groups: int = Field(..., ge=1)

    @field_validator("mean_ranks")
    @classmethod
    def _check(cls, v: Dict[StyleId, float]) -> Dict[StyleId, float]:
        v = _canonical(v)
        m = len(v)
        if m == 0:
            raise ValueError("mean_ranks 不能为空")
        if any(r < 1.0 - RANK_TOL or r > m + RANK_TOL for r in v.values()):
            raise ValueError(f"平均名次必须位于 [1, {m}]")
        mean = sum(v.values()) / m
        if abs(mean - (m + 1) / 2.0) > RANK_TOL:
            raise ValueError(f"平均名次的均值应为 {(m + 1) / 2.0}，得到 {mean}")
        return v

    def values(self) -> List[float]:
        return list(self.mean_ranks.values())

    def best_style(self) -> StyleId:
        """平均名次最小（最受偏好）的风格；并列取规范顺序靠前者"""
        return min(self.mean_ranks, key=lambda s: (self.mean_ranks[s], s.position))

    def worst_style(self) -> StyleId:
        return max(self.mean_ranks, key=lambda s: (self.mean_ranks[s], -s.position))


class UnfairnessReport(BaseModel):
    """单个打分器、单个查询风格下的审计结果"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scorer: str
    query_style: StyleId
    avg_ranks: AvgRankVector
    unfairness: float = Field(..., ge=0.0)
    n_groups: int = Field(..., ge=1)
    std_convention: StdConvention = "population"
    tie_rule: TieRule = "fractional"

    @property
    def best_style(self) -> StyleId:
        return self.avg_ranks.best_style()

    @property
    def worst_style(self) -> StyleId:
        return self.avg_ranks.worst_style()

    @property
    def original_rank(self) -> Optional[float]:
        """原文的平均名次（图中的虚线基准）"""
        return self.avg_ranks.mean_ranks.get(StyleId.ORIGINAL)

    @property
    def generated_mean_rank(self) -> Optional[float]:
        """Style0..Style8 平均名次的均值"""
        vals = [self.avg_ranks.mean_ranks[s] for s in GENERATED_STYLES if s in self.avg_ranks.mean_ranks]
        return sum(vals) / len(vals) if vals else None

    def to_record(self) -> Dict[str, Any]:
        return {
            "scorer": self.scorer,
            "query_style": self.query_style.value,
            "n_groups": self.n_groups,
            "avg_ranks": {s.value: r for s, r in self.avg_ranks.mean_ranks.items()},
            "unfairness": self.unfairness,
            "std_convention": self.std_convention,
            "tie_rule": self.tie_rule,
            "best_style": self.best_style.value,
            "worst_style": self.worst_style.value,
            "original_rank": self.original_rank,
            "generated_mean_rank": self.generated_mean_rank,
        }


class QueryStyleMatrix(BaseModel):
    """查询风格扫描：每个查询风格一行"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scorer: str
    rows: Dict[StyleId, UnfairnessReport]
    avg: float
    std: float = Field(..., ge=0.0)

    @model_validator(mode="after")
    def _check(self):
        for style, rep in self.rows.items():
            if rep.query_style is not style:
                raise ValueError(f"行 {style.value} 的 query_style 为 {rep.query_style.value}")
        return self

    def to_record(self) -> Dict[str, Any]:
        return {
            "scorer": self.scorer,
            "rows": {s.value: self.rows[s].to_record() for s in ALL_STYLES if s in self.rows},
            "avg": self.avg,
            "std": self.std,
            "std_convention": "population",
        }


class StyleStatsRow(BaseModel):
    """某风格相对原文的描述统计"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    style: StyleId
    n: int = Field(..., gt=0)
    mean_token_length: float = Field(..., ge=0.0)
    mean_bleu: float = Field(..., ge=0.0, le=1.0)
    mean_meteor: float = Field(..., ge=0.0, le=1.0)
    mean_rouge_l: float = Field(..., ge=0.0, le=1.0)


class SystemStatsRow(BaseModel):
    """某问答系统答案相对标准答案的描述统计"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    system_id: str
    n: int = Field(..., gt=0)
    mean_token_length: float = Field(..., ge=0.0)
    mean_bleu: float = Field(..., ge=0.0, le=1.0)
    mean_meteor: float = Field(..., ge=0.0, le=1.0)
    mean_rouge_l: float = Field(..., ge=0.0, le=1.0)
    gt_mean_token_length: float = Field(..., ge=0.0)


class SystemCorrectness(BaseModel):
    """某问答系统的平均正确性分数"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    system_id: str
    # 取值范围随打分器而定：嵌入余弦在 [-1, 1]，mock 加上 bump 后可以超过 1
    mean_score: float = Field(..., allow_inf_nan=False)
    n_answers: int = Field(..., gt=0)


class AnswerReport(BaseModel):
    """答案风格审计结果"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    scorer: str
    systems: List[SystemCorrectness]
    unfairness: float = Field(..., ge=0.0)
    correct_only: bool = True

    def to_record(self) -> Dict[str, Any]:
        return {
            "scorer": self.scorer,
            "systems": [
                {"system": r.system_id, "mean_score": r.mean_score, "n": r.n_answers}
                for r in self.systems
            ],
            "unfairness": self.unfairness,
            "std_convention": "population",
            "correct_only": self.correct_only,
        }


class RunManifest(BaseModel):
    """每份报告旁的运行清单"""

    model_config = ConfigDict(extra="forbid")

    run_id: str
    command: str
    scorers: List[str]
    conventions: Dict[str, Any]
    corpus_path: str
    corpus_sha256: str
    n_groups: Optional[int] = None
    version: str
    created_at: str
