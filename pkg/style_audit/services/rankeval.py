# -*- coding: utf-8 -*-
"""
排名审计核心

1. 每组按相似度给 10 个文档变体排名（最相似为 1，并列取平均名次）
2. 全语料求平均名次
3. 不公平分数 = (max - min) × 总体标准差
4. 查询风格扫描：查询依次替换为 10 个风格，各算一次不公平分数
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Mapping, Sequence, Union

import numpy as np
from scipy.stats import rankdata
from tqdm import tqdm

from style_audit import config
from style_audit.errors import CorpusError
from style_audit.models.corpus import AuditGroup
from style_audit.models.report import AvgRankVector, QueryStyleMatrix, RankVector, UnfairnessReport
from style_audit.models.style import ALL_STYLES, StyleId
from style_audit.services.scorers import RelevanceScorer
from style_audit.utils.logging_decorator import log_function

logger = logging.getLogger(__name__)

RANK_CONVENTIONS = {"tie_rule": "fractional", "std_convention": "population"}


def fractional_ranks(similarities: Sequence[float]) -> np.ndarray:
    """
    相似度 → 名次（降序，1 起），并列取所占名次的平均值

    Raises:
        ValueError: 含非有限值
    """
    values = np.asarray(similarities, dtype=np.float64)
    if values.ndim != 1 or values.size == 0:
        raise ValueError("相似度必须是非空一维序列")
    if not np.all(np.isfinite(values)):
        raise ValueError("相似度含非有限值")
    return rankdata(-values, method="average")


def rank_by_similarity(similarities: Mapping[StyleId, float]) -> RankVector:
    """按风格键给相似度排名"""
    styles = [s for s in ALL_STYLES if s in similarities]
    ranks = fractional_ranks([similarities[s] for s in styles])
    return RankVector(ranks=dict(zip(styles, ranks.tolist())))


def average_ranks(rank_vectors: Sequence[RankVector]) -> AvgRankVector:
    """
    逐项求平均名次（规范顺序固定归约）

    Raises:
        CorpusError: 输入为空
        ValueError: 各向量的风格集合不一致
    """
    if not rank_vectors:
        raise CorpusError("average_ranks 的输入为空", stage="rankeval")
    styles = rank_vectors[0].styles
    for rv in rank_vectors[1:]:
        if rv.styles != styles:
            raise ValueError("名次向量的风格集合不一致")
    matrix = np.asarray([rv.values() for rv in rank_vectors], dtype=np.float64)
    means = matrix.mean(axis=0)
    return AvgRankVector(mean_ranks=dict(zip(styles, means.tolist())), n_groups=len(rank_vectors))


def unfairness(avg: Union[AvgRankVector, Sequence[float]]) -> float:
    """
    不公平分数 = (max - min) × 总体标准差（除以 M）

    只依赖平均名次的多重集，与风格轴的排列无关。
    """
    values = np.asarray(avg.values() if isinstance(avg, AvgRankVector) else list(avg), dtype=np.float64)
    if values.size == 0:
        raise ValueError("unfairness 的输入为空")
    spread = float(values.max() - values.min())
    if spread == 0.0:
        return 0.0
    return spread * float(np.std(values, ddof=0))


def _check_groups(groups: Sequence[AuditGroup], need_query: bool) -> None:
    if not groups:
        raise CorpusError("审计语料为空", stage="rankeval")
    for g in groups:
        if not g.docs_complete or (need_query and not g.queries_complete):
            side = "文档/查询" if need_query else "文档"
            raise CorpusError(f"组 {g.group_id} 的{side}风格不完整", stage="rankeval")


def _prepare(scorer: RelevanceScorer, groups: Sequence[AuditGroup], query_styles: Sequence[StyleId]) -> None:
    documents = [t for g in groups for t in g.documents()]
    queries = [g.query_variants[s] for g in groups for s in query_styles]
    scorer.prepare(documents, queries)


def _rank_groups(
    groups: Sequence[AuditGroup],
    scorer: RelevanceScorer,
    query_style: StyleId,
    parallelism: int,
) -> List[RankVector]:
    def _one(g: AuditGroup) -> RankVector:
        scores = scorer.score(
            g.query_variants[query_style],
            g.documents(),
            query_style=query_style,
            candidate_styles=ALL_STYLES,
        )
        return rank_by_similarity(dict(zip(ALL_STYLES, scores)))

    desc = f"{scorer.label} q={query_style.value}"
    if parallelism <= 1:
        return [_one(g) for g in tqdm(groups, desc=desc, disable=config.TQDM_DISABLE, leave=False)]
    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        # map 保持输入顺序
        return list(
            tqdm(pool.map(_one, groups), total=len(groups), desc=desc, disable=config.TQDM_DISABLE, leave=False)
        )


def _report(scorer: RelevanceScorer, query_style: StyleId, rank_vectors: List[RankVector]) -> UnfairnessReport:
    avg = average_ranks(rank_vectors)
    return UnfairnessReport(
        scorer=scorer.label,
        query_style=query_style,
        avg_ranks=avg,
        unfairness=unfairness(avg),
        n_groups=avg.n_groups,
    )


@log_function()
def audit_document_styles(
    groups: Sequence[AuditGroup],
    scorer: RelevanceScorer,
    query_style: StyleId = StyleId.ORIGINAL,
    parallelism: int = 1,
    prepare: bool = True,
) -> UnfairnessReport:
    """
    文档风格审计

    对每组，用选定风格的查询给 10 个文档变体打分、排名，再求平均名次与不公平分数。

    Args:
        groups: 文档侧完整的组（query_style 非原文时查询侧也需完整）
        scorer: 打分器（嵌入缓存由打分器持有）
        query_style: 使用的查询风格
        parallelism: 组级并发
        prepare: 是否先让打分器看到整次运行的文本池

    Raises:
        CorpusError: 语料为空或不完整
    """
    need_query = query_style is not StyleId.ORIGINAL
    _check_groups(groups, need_query)
    if need_query:
        missing = [g.group_id for g in groups if query_style not in g.query_variants]
        if missing:
            raise CorpusError(f"组 {missing[0]} 缺少查询风格 {query_style.value}", stage="rankeval")
    if prepare:
        _prepare(scorer, groups, [query_style])
    report = _report(scorer, query_style, _rank_groups(groups, scorer, query_style, parallelism))
    logger.info(
        f"{scorer.label} q={query_style.value}: unfairness={report.unfairness:.6f} "
        f"best={report.best_style.value} worst={report.worst_style.value}"
    )
    return report


@log_function()
def audit_query_styles(
    groups: Sequence[AuditGroup],
    scorer: RelevanceScorer,
    parallelism: int = 1,
) -> QueryStyleMatrix:
    """
    查询风格扫描：原文查询 + 9 种改写查询各做一次文档风格审计

    avg / std 为 10 个不公平分数的算术平均与总体标准差。
    """
    _check_groups(groups, need_query=True)
    _prepare(scorer, groups, ALL_STYLES)
    rows: Dict[StyleId, UnfairnessReport] = {}
    for qs in ALL_STYLES:
        rows[qs] = audit_document_styles(groups, scorer, qs, parallelism, prepare=False)
    scores = np.asarray([rows[s].unfairness for s in ALL_STYLES], dtype=np.float64)
    avg = float(scores.mean())
    std = float(scores.std(ddof=0))
    if not math.isfinite(avg):
        raise ValueError("不公平分数出现非有限值")
    return QueryStyleMatrix(scorer=scorer.label, rows=rows, avg=avg, std=std)
