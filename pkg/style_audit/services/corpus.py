# -*- coding: utf-8 -*-
"""
语料服务

读取、校验、序列化审计语料：
- 风格组 JSONL：{"group_id", "query": {style: text}, "document": {style: text}}
- 问答 JSONL：{"question", "gt_answer", "answers": [{"system", "text", "human_correct"}]}
- 原始对 JSONL：{"group_id", "query", "document}（generate-styles 的输入）
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterator, List, Sequence, Tuple, Union

from pydantic import ValidationError

from style_audit.errors import CorpusError
from style_audit.models.corpus import AuditGroup, QARecord, StylePair
from style_audit.models.style import StyleId
from style_audit.utils.files import atomic_write_text
from style_audit.utils.logging_decorator import log_function

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
_STYLE_KEYS = {s.value for s in StyleId}


def _iter_json_lines(path: PathLike) -> Iterator[Tuple[int, Dict[str, Any]]]:
    """逐行读取 JSONL；跳过空行；返回 (行号, 对象)"""
    try:
        f = open(path, "rb")
    except OSError as e:
        raise CorpusError(f"无法读取语料 {path}: {e}", stage="corpus") from e
    with f:
        # 逐行解码，编码错误才能报出行号
        for lineno, raw in enumerate(f, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise CorpusError(f"{path}:{lineno}: 不是合法的 UTF-8: {e.reason}", stage="corpus") from e
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"{path}:{lineno}: JSON 格式错误: {e.msg}", stage="corpus") from e
            if not isinstance(obj, dict):
                raise CorpusError(f"{path}:{lineno}: 每行必须是 JSON 对象", stage="corpus")
            yield lineno, obj


def validation_message(e: ValidationError) -> str:
    """把 pydantic 校验错误压成一行"""
    parts = []
    for err in e.errors():
        loc = ".".join(str(x) for x in err.get("loc", ()))
        parts.append(f"{loc}: {err.get('msg')}" if loc else str(err.get("msg")))
    return "; ".join(parts)


def _variant_map(raw: Any, side: str, where: str) -> Dict[str, str]:
    if not isinstance(raw, dict):
        raise CorpusError(f"{where}: '{side}' 必须是 style → text 的对象", stage="corpus")
    unknown = sorted(set(raw) - _STYLE_KEYS)
    if unknown:
        raise CorpusError(f"{where}: '{side}' 含未知风格键 {unknown}", stage="corpus")
    if "original" not in raw:
        raise CorpusError(f"{where}: '{side}' 缺少必需键 'original'", stage="corpus")
    for k, v in raw.items():
        if not isinstance(v, str) or not v.strip():
            raise CorpusError(f"{where}: '{side}.{k}' 文本为空", stage="corpus")
    return raw


def parse_group(obj: Dict[str, Any], where: str = "<record>") -> AuditGroup:
    """将一行 JSON 对象解析为 AuditGroup"""
    gid = obj.get("group_id")
    if not isinstance(gid, str) or not gid:
        raise CorpusError(f"{where}: 缺少 group_id", stage="corpus")
    query = _variant_map(obj.get("query"), "query", where)
    document = _variant_map(obj.get("document"), "document", where)
    extra = sorted(set(obj) - {"group_id", "query", "document"})
    if extra:
        raise CorpusError(f"{where}: 未知字段 {extra}", stage="corpus")
    try:
        return AuditGroup(group_id=gid, query_variants=query, doc_variants=document)
    except ValidationError as e:
        raise CorpusError(f"{where}: {validation_message(e)}", stage="corpus") from e


def group_to_record(group: AuditGroup) -> Dict[str, Any]:
    """AuditGroup → 组 JSONL 行对象"""
    return {
        "group_id": group.group_id,
        "query": {s.value: t for s, t in group.query_variants.items()},
        "document": {s.value: t for s, t in group.doc_variants.items()},
    }


@log_function()
def load_groups(path: PathLike) -> List[AuditGroup]:
    """
    读取风格组语料

    Args:
        path: 组 JSONL 文件

    Returns:
        按文件顺序排列的组（可能不完整，完整性由 require_complete 过滤）

    Raises:
        CorpusError: I/O 失败、格式错误（含行号）、group_id 重复、文本为空
    """
    groups: List[AuditGroup] = []
    seen: Dict[str, int] = {}
    for lineno, obj in _iter_json_lines(path):
        where = f"{path}:{lineno}"
        group = parse_group(obj, where)
        if group.group_id in seen:
            raise CorpusError(
                f"{where}: group_id '{group.group_id}' 与第 {seen[group.group_id]} 行重复",
                stage="corpus",
            )
        seen[group.group_id] = lineno
        groups.append(group)
    n_incomplete = sum(1 for g in groups if not g.is_complete)
    if n_incomplete:
        logger.info(f"{path}: 共 {len(groups)} 组，其中 {n_incomplete} 组不完整")
    return groups


def dump_groups(groups: Sequence[AuditGroup], path: PathLike) -> None:
    """写出组 JSONL（原子写入）"""
    lines = [json.dumps(group_to_record(g), ensure_ascii=False) + "\n" for g in groups]
    atomic_write_text(path, "".join(lines))


@log_function()
def load_qa(path: PathLike) -> List[QARecord]:
    """
    读取问答语料（保留全部标注，包括 human_correct=false）

    Raises:
        CorpusError: I/O 失败、格式错误、同一记录内 system 重复（含记录序号）
    """
    records: List[QARecord] = []
    for index, (lineno, obj) in enumerate(_iter_json_lines(path)):
        where = f"{path}:{lineno} (record {index})"
        answers = obj.get("answers", [])
        if isinstance(answers, list):
            systems = [a.get("system") for a in answers if isinstance(a, dict)]
            dup = sorted({s for s in systems if systems.count(s) > 1 and s is not None})
            if dup:
                raise CorpusError(f"{where}: system 重复 {dup}", stage="corpus")
        try:
            records.append(QARecord.model_validate(obj))
        except ValidationError as e:
            raise CorpusError(f"{where}: {validation_message(e)}", stage="corpus") from e
    return records


@log_function()
def load_pairs(path: PathLike) -> List[StylePair]:
    """读取待改写的 (query, document) 对"""
    pairs: List[StylePair] = []
    seen = set()
    for lineno, obj in _iter_json_lines(path):
        where = f"{path}:{lineno}"
        try:
            pair = StylePair.model_validate(obj)
        except ValidationError as e:
            raise CorpusError(f"{where}: {validation_message(e)}", stage="corpus") from e
        if pair.group_id in seen:
            raise CorpusError(f"{where}: group_id '{pair.group_id}' 重复", stage="corpus")
        seen.add(pair.group_id)
        pairs.append(pair)
    return pairs


def require_complete(
    groups: Sequence[AuditGroup], need_query_styles: bool = False
) -> List[AuditGroup]:
    """
    过滤出完整的组（保持顺序，幂等）

    Args:
        groups: 输入组
        need_query_styles: 是否同时要求查询侧 10 个风格齐全

    Returns:
        完整的组；被拒数量以 WARNING 记录
    """
    kept = [
        g for g in groups if g.docs_complete and (g.queries_complete or not need_query_styles)
    ]
    rejected = len(groups) - len(kept)
    if rejected:
        side = "文档+查询" if need_query_styles else "文档"
        logger.warning(f"{rejected} 组{side}风格不完整，已跳过")
    return kept


def first_incomplete(groups: Sequence[AuditGroup], need_query_styles: bool) -> str:
    """描述第一个不完整的组（用于错误信息）"""
    for g in groups:
        missing = [f"document.{s.value}" for s in g.missing("document")]
        if need_query_styles:
            missing += [f"query.{s.value}" for s in g.missing("query")]
        if missing:
            return f"{g.group_id}（缺少 {', '.join(missing)}）"
    return "<无>"

