# -*- coding: utf-8 -*-
"""
答案风格审计

用嵌入相似度作为答案正确性分数时，比较不同问答系统（答案风格）得到的分数；
各系统平均分的不公平分数沿用排名审计的公式。
"""

import logging
import math
from typing import Dict, List, Sequence

from style_audit.errors import ConfigError, CorpusError
from style_audit.models.corpus import QARecord
from style_audit.models.report import AnswerReport, SystemCorrectness
from style_audit.services.rankeval import unfairness
from style_audit.services.scorers import RelevanceScorer
from style_audit.utils.logging_decorator import log_function

logger = logging.getLogger(__name__)


def _require_bounded(scorer: RelevanceScorer) -> None:
    if scorer.kind == "bm25":
        raise ConfigError("BM25 取值无界，不能作为答案正确性分数", stage="answereval")


def correctness_score(gt_answer: str, answer: str, scorer: RelevanceScorer) -> float:
    """
    标准答案与系统答案的相似度

    Raises:
        ValueError: 任一文本为空
        ConfigError: BM25 打分器
    """
    _require_bounded(scorer)
    if not gt_answer.strip() or not answer.strip():
        raise ValueError("标准答案与系统答案都不能为空")
    return scorer.similarity(gt_answer.strip(), answer.strip())


@log_function()
def per_system_correctness(
    records: Sequence[QARecord],
    scorer: RelevanceScorer,
    correct_only: bool = True,
) -> List[SystemCorrectness]:
    """
    每个系统的平均正确性分数（按 system_id 排序）

    fsum 求和，结果与记录顺序无关。

    没有合格答案的系统直接省略，不记为 0。

    Raises:
        CorpusError: 输入为空或没有任何合格答案
    """
    _require_bounded(scorer)
    if not records:
        raise CorpusError("问答语料为空", stage="answereval")

    qualifying = [
        (rec.gt_answer, ans)
        for rec in records
        for ans in rec.answers
        if ans.human_correct or not correct_only
    ]
    if not qualifying:
        raise CorpusError("没有符合条件的答案（correct_only=%s）" % correct_only, stage="answereval")

    scorer.prepare([gt for gt, _ in qualifying], [ans.text for _, ans in qualifying])
    per_system: Dict[str, List[float]] = {}
    for gt, ans in qualifying:
        if not ans.text:
            logger.warning(f"系统 {ans.system_id} 有空答案，已跳过")
            continue
        per_system.setdefault(ans.system_id, []).append(correctness_score(gt, ans.text, scorer))
    if not per_system:
        raise CorpusError("没有符合条件的答案", stage="answereval")

    return [
        SystemCorrectness(
            system_id=sid,
            mean_score=math.fsum(per_system[sid]) / len(per_system[sid]),
            n_answers=len(per_system[sid]),
        )
        for sid in sorted(per_system)
    ]


def answer_style_unfairness(rows: Sequence[SystemCorrectness]) -> float:
    """
    各系统平均分的 (max - min) × 总体标准差

    Raises:
        CorpusError: 少于 2 个系统
    """
    if len(rows) < 2:
        raise CorpusError(f"至少需要 2 个系统，得到 {len(rows)}", stage="answereval")
    return unfairness([r.mean_score for r in rows])


def audit_answers(
    records: Sequence[QARecord], scorer: RelevanceScorer, correct_only: bool = True
) -> AnswerReport:
    """per_system_correctness + answer_style_unfairness"""
    rows = per_system_correctness(records, scorer, correct_only)
    return AnswerReport(
        scorer=scorer.label,
        systems=rows,
        unfairness=answer_style_unfairness(rows),
        correct_only=correct_only,
    )
