# -*- coding: utf-8 -*-
"""
服务层模块
"""

from style_audit.services.answereval import (
    answer_style_unfairness,
    audit_answers,
    correctness_score,
    per_system_correctness,
)
from style_audit.services.corpus import load_groups, load_pairs, load_qa, require_complete
from style_audit.services.rankeval import (
    audit_document_styles,
    audit_query_styles,
    average_ranks,
    rank_by_similarity,
    unfairness,
)
from style_audit.services.scorers import build_scorer, score_relevance
from style_audit.services.stylegen import build_groups, rewrite, style_catalog
from style_audit.services.textstats import bleu, meteor, rouge_l, style_stats

# run 串联所有模块，需要手动导入
# 使用时: from style_audit.services.harness import run

__all__ = [
    "load_groups",
    "load_pairs",
    "load_qa",
    "require_complete",
    "style_catalog",
    "rewrite",
    "build_groups",
    "build_scorer",
    "score_relevance",
    "bleu",
    "meteor",
    "rouge_l",
    "style_stats",
    "rank_by_similarity",
    "average_ranks",
    "unfairness",
    "audit_document_styles",
    "audit_query_styles",
    "correctness_score",
    "per_system_correctness",
    "answer_style_unfairness",
    "audit_answers",
]
