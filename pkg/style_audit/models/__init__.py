# -*- coding: utf-8 -*-
"""
数据模型层 - 所有 Pydantic 模型的集中管理
"""

from style_audit.models.corpus import AuditGroup, QAAnswer, QARecord, StylePair
from style_audit.models.generation import GenerationConfig, StylePrompt
from style_audit.models.report import (
    AnswerReport,
    AvgRankVector,
    QueryStyleMatrix,
    RankVector,
    RunManifest,
    StyleStatsRow,
    SystemCorrectness,
    SystemStatsRow,
    UnfairnessReport,
)
from style_audit.models.run import RunConfig
from style_audit.models.scorer import Bm25Params, MockSpec, MockTableEntry, ScorerDescriptor
from style_audit.models.style import ALL_STYLES, GENERATED_STYLES, StyleId

__all__ = [
    # Style
    "StyleId",
    "ALL_STYLES",
    "GENERATED_STYLES",
    # Corpus
    "AuditGroup",
    "StylePair",
    "QAAnswer",
    "QARecord",
    # Generation
    "StylePrompt",
    "GenerationConfig",
    # Scorers
    "ScorerDescriptor",
    "Bm25Params",
    "MockSpec",
    "MockTableEntry",
    # Reports
    "RankVector",
    "AvgRankVector",
    "UnfairnessReport",
    "QueryStyleMatrix",
    "StyleStatsRow",
    "SystemStatsRow",
    "SystemCorrectness",
    "AnswerReport",
    "RunManifest",
    # Run
    "RunConfig",
]
