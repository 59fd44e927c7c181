# -*- coding: utf-8 -*-
"""
报告输出

JSON 记录、CSV 投影（pandas）、运行清单与绘图数据；所有文件原子写入。
"""

import json
import re
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

import pandas as pd

from style_audit.errors import AuditError
from style_audit.models.report import (
    AnswerReport,
    QueryStyleMatrix,
    RunManifest,
    StyleStatsRow,
    SystemStatsRow,
    UnfairnessReport,
)
from style_audit.models.style import ALL_STYLES
from style_audit.utils.files import atomic_write_text

AuditOutput = Union[UnfairnessReport, QueryStyleMatrix]

_SLUG_RE = re.compile(r"[^A-Za-z0-9._-]+")


def render_json(payload: Any) -> str:
    """稳定的 JSON 文本（字段顺序由 to_record 决定）"""
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def render_csv(frame: pd.DataFrame) -> str:
    return frame.to_csv(index=False, lineterminator="\n")


# ---------- CSV 投影 ----------
def reports_frame(reports: Sequence[UnfairnessReport]) -> pd.DataFrame:
    """文档风格审计：每个打分器一行，每个风格一列平均名次"""
    rows = []
    for r in reports:
        row = {"scorer": r.scorer, "query_style": r.query_style.value, "n_groups": r.n_groups}
        row.update({s.value: r.avg_ranks.mean_ranks.get(s) for s in ALL_STYLES})
        row.update(
            {
                "unfairness": r.unfairness,
                "best_style": r.best_style.value,
                "worst_style": r.worst_style.value,
                "std_convention": r.std_convention,
                "tie_rule": r.tie_rule,
            }
        )
        rows.append(row)
    return pd.DataFrame(rows)


def matrix_frame(matrices: Sequence[QueryStyleMatrix]) -> pd.DataFrame:
    """查询风格扫描：每个打分器一行，每个查询风格一列不公平分数，外加 avg/std"""
    rows = []
    for m in matrices:
        row = {"scorer": m.scorer}
        row.update({s.value: m.rows[s].unfairness for s in ALL_STYLES if s in m.rows})
        row.update({"avg": m.avg, "std": m.std})
        rows.append(row)
    return pd.DataFrame(rows)


def answers_frame(reports: Sequence[AnswerReport]) -> pd.DataFrame:
    """答案审计：每个 (打分器, 系统) 一行"""
    rows = [
        {
            "scorer": rep.scorer,
            "system": s.system_id,
            "mean_score": s.mean_score,
            "n": s.n_answers,
            "unfairness": rep.unfairness,
        }
        for rep in reports
        for s in rep.systems
    ]
    return pd.DataFrame(rows, columns=["scorer", "system", "mean_score", "n", "unfairness"])


def style_stats_frame(rows: Sequence[StyleStatsRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "style": r.style.value,
                "n": r.n,
                "mean_tokens": r.mean_token_length,
                "mean_bleu": r.mean_bleu,
                "mean_meteor": r.mean_meteor,
                "mean_rouge_l": r.mean_rouge_l,
            }
            for r in rows
        ]
    )


def system_stats_frame(rows: Sequence[SystemStatsRow]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "system": r.system_id,
                "n": r.n,
                "mean_tokens": r.mean_token_length,
                "mean_bleu": r.mean_bleu,
                "mean_meteor": r.mean_meteor,
                "mean_rouge_l": r.mean_rouge_l,
                "gt_mean_tokens": r.gt_mean_token_length,
            }
            for r in rows
        ]
    )


# ---------- 写文件 ----------
def write_output(path: Union[str, Path], fmt: str, records: List[Any], frame: pd.DataFrame) -> Path:
    """按格式写出报告（原子写入）"""
    target = Path(path)
    text = render_json(records) if fmt == "json" else render_csv(frame)
    atomic_write_text(target, text)
    return target


def manifest_path(out_path: Union[str, Path]) -> Path:
    p = Path(out_path)
    return p.with_name(p.name + ".manifest.json")


def write_manifest(manifest: RunManifest, out_path: Union[str, Path]) -> Path:
    target = manifest_path(out_path)
    atomic_write_text(target, render_json(manifest.model_dump(mode="json")))
    return target


# ---------- 绘图数据 ----------
def _slug(text: str) -> str:
    return _SLUG_RE.sub("_", text).strip("_") or "scorer"


def _series_frame(report: UnfairnessReport) -> pd.DataFrame:
    baseline = report.original_rank
    return pd.DataFrame(
        [
            {"style": s.value, "label": s.label, "mean_rank": r, "baseline": baseline}
            for s, r in report.avg_ranks.mean_ranks.items()
        ]
    )


def emit_plot_data(reports: Iterable[AuditOutput], out_dir: Union[str, Path]) -> List[Path]:
    """
    写出绘图数据（每条序列一个 CSV：style, label, mean_rank, baseline）

    baseline 为原文的平均名次（虚线）。查询风格矩阵每个查询风格一条序列。

    Returns:
        写出的文件路径
    """
    reports = list(reports)
    if not reports:
        raise AuditError("没有可输出的审计结果", stage="harness")
    out = Path(out_dir)
    written: List[Path] = []
    for item in reports:
        series = list(item.rows.values()) if isinstance(item, QueryStyleMatrix) else [item]
        for rep in series:
            target = out / f"{_slug(rep.scorer)}__q-{rep.query_style.value}.csv"
            atomic_write_text(target, render_csv(_series_frame(rep)))
            written.append(target)
    return written
