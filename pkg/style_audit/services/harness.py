# -*- coding: utf-8 -*-
"""
运行编排

按命令串联 corpus -> (stylegen) -> scorers -> rankeval/answereval/textstats -> reporting，
所有打分器共享同一个磁盘缓存。
"""

import logging
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Tuple

import click
import pandas as pd

from style_audit import __version__
from style_audit.clients.cache import DiskCache, cache_gc
from style_audit.clients.chat import ChatClient
from style_audit.errors import AuditError, CorpusError
from style_audit.models.generation import GenerationConfig
from style_audit.models.report import RunManifest
from style_audit.models.run import RunConfig
from style_audit.models.style import StyleId
from style_audit.services import reporting
from style_audit.services.answereval import audit_answers
from style_audit.services.corpus import (
    dump_groups,
    first_incomplete,
    load_groups,
    load_pairs,
    load_qa,
    require_complete,
)
from style_audit.services.rankeval import (
    RANK_CONVENTIONS,
    audit_document_styles,
    audit_query_styles,
)
from style_audit.services.scorers import RelevanceScorer, build_scorer
from style_audit.services.stylegen import build_groups
from style_audit.services.textstats import METRIC_CONVENTIONS, answer_stats, style_stats
from style_audit.utils.files import file_sha256
from style_audit.utils.logging_decorator import log_function

logger = logging.getLogger(__name__)

# (JSON 记录, CSV 表, 组数, 绘图用的审计结果)
Outcome = Tuple[List[Any], pd.DataFrame, int, List[Any]]


def diagnostic(exc: BaseException) -> Tuple[int, str]:
    """异常 → (退出码, 一行诊断信息)"""
    if isinstance(exc, AuditError):
        return exc.exit_code, f"error[{exc.stage or 'harness'}]: {exc}"
    return 5, f"error[internal]: {type(exc).__name__}: {exc}"


def conventions(config: RunConfig) -> Dict[str, Any]:
    """报告自描述所需的全部约定"""
    out: Dict[str, Any] = dict(RANK_CONVENTIONS)
    bm25 = {
        d.label(): d.bm25_params.model_dump()
        for d in config.scorers
        if d.kind == "bm25" and d.bm25_params is not None
    }
    if bm25:
        out["bm25"] = bm25
    out["metrics"] = METRIC_CONVENTIONS
    return out


def _scorers(config: RunConfig, cache: DiskCache) -> List[RelevanceScorer]:
    return [build_scorer(d, cache, parallelism=config.parallelism) for d in config.scorers]


def _complete_groups(config: RunConfig, need_query: bool):
    groups = load_groups(config.corpus_path)
    complete = require_complete(groups, need_query_styles=need_query)
    if not complete:
        raise CorpusError(
            f"没有完整的组可供审计，第一个不完整的组: {first_incomplete(groups, need_query)}",
            stage="corpus",
        )
    return complete


def _generate(config: RunConfig, cache: DiskCache) -> Outcome:
    pairs = load_pairs(config.corpus_path)
    gen = GenerationConfig(
        model_id=config.chat_model,
        temperature=config.temperature,
        max_retries=config.max_retries,
        parallelism=config.parallelism,
    )
    client = ChatClient(base_url=config.chat_endpoint)
    try:
        groups = build_groups(pairs, gen, client, cache, rewrite_queries=config.rewrite_queries)
    finally:
        client.close()
    dump_groups(groups, config.out_path)
    incomplete = sum(1 for g in groups if not g.is_complete)
    if incomplete:
        logger.warning(f"{incomplete} 组存在生成失败的变体，审计时将被跳过")
    return [], pd.DataFrame(), len(groups), []


def _stats(config: RunConfig, cache: DiskCache) -> Outcome:
    if config.side == "answer":
        records = load_qa(config.corpus_path)
        rows = answer_stats(records, correct_only=config.correct_only)
        return (
            [r.model_dump(mode="json") for r in rows],
            reporting.system_stats_frame(rows),
            len(records),
            [],
        )
    groups = load_groups(config.corpus_path)
    if config.side == "query":
        kept = [g for g in groups if g.queries_complete]
    else:
        kept = require_complete(groups)
    if not kept:
        raise CorpusError(
            f"{config.side} 侧没有完整的组: {first_incomplete(groups, config.side == 'query')}",
            stage="corpus",
        )
    rows = style_stats(kept, side=config.side)
    return [r.model_dump(mode="json") for r in rows], reporting.style_stats_frame(rows), len(kept), []


def _audit_docs(config: RunConfig, cache: DiskCache) -> Outcome:
    groups = _complete_groups(config, need_query=config.query_style is not StyleId.ORIGINAL)
    reports = [
        audit_document_styles(groups, scorer, config.query_style, config.parallelism)
        for scorer in _scorers(config, cache)
    ]
    return [r.to_record() for r in reports], reporting.reports_frame(reports), len(groups), reports


def _audit_queries(config: RunConfig, cache: DiskCache) -> Outcome:
    groups = _complete_groups(config, need_query=True)
    matrices = [audit_query_styles(groups, scorer, config.parallelism) for scorer in _scorers(config, cache)]
    return [m.to_record() for m in matrices], reporting.matrix_frame(matrices), len(groups), matrices


def _audit_answers(config: RunConfig, cache: DiskCache) -> Outcome:
    records = load_qa(config.corpus_path)
    reports = [audit_answers(records, scorer, config.correct_only) for scorer in _scorers(config, cache)]
    return [r.to_record() for r in reports], reporting.answers_frame(reports), len(records), []


_PIPELINES: Dict[str, Callable[[RunConfig, DiskCache], Outcome]] = {
    "generate-styles": _generate,
    "stats": _stats,
    "audit-docs": _audit_docs,
    "audit-queries": _audit_queries,
    "audit-answers": _audit_answers,
}


@log_function()
def execute(config: RunConfig) -> None:
    """
    执行一次运行并写出产物（失败时抛出 AuditError）

    报告与清单均为原子写入；generate-styles 的输出是组格式 JSONL。
    """
    cache = DiskCache(config.cache_dir)
    records, frame, n_groups, audits = _PIPELINES[config.command](config, cache)

    if config.command != "generate-styles":
        reporting.write_output(config.out_path, config.out_format, records, frame)
    if config.plot_dir is not None and audits:
        reporting.emit_plot_data(audits, config.plot_dir)

    manifest = RunManifest(
        run_id=config.run_id,
        command=config.command,
        scorers=[d.label() for d in config.scorers],
        conventions=conventions(config),
        corpus_path=str(config.corpus_path),
        corpus_sha256=file_sha256(config.corpus_path),
        n_groups=n_groups,
        version=__version__,
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    reporting.write_manifest(manifest, config.out_path)
    logger.info(f"[{config.run_id}] 缓存命中 {cache.hits}，未命中 {cache.misses}；报告: {config.out_path}")

    if config.cache_max_bytes is not None:
        cache_gc(config.cache_dir, config.cache_max_bytes, protected=cache.touched)


def run(config: RunConfig) -> int:
    """
    执行一次运行，返回退出码

    0 成功；失败时在 stderr 输出一行 `error[<模块>]: <信息>`。
    """
    try:
        execute(config)
    except Exception as e:
        code, line = diagnostic(e)
        if code == 5:
            logger.exception(f"[{config.run_id}] 内部错误")
        click.echo(line, err=True)
        return code
    return 0
