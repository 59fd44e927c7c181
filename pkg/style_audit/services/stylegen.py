# -*- coding: utf-8 -*-
"""
风格改写服务

通过对话端点把文本改写为 9 种写作风格：
- Style-0：无 system 消息，user 消息为 "Please rewrite the following text" + 原文
- Style-1..8：风格描述作为 system 消息，user 消息为 "Please rewrite the following text:\n\n" + 原文

生成结果按 (model_id, style, 原文) 缓存，缓存冻结首个通过长度检查的输出。
"""

import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from style_audit.config import TQDM_DISABLE
from style_audit.clients.cache import DiskCache, cache_key
from style_audit.clients.chat import ChatEndpoint, Message
from style_audit.errors import CorpusError, EndpointError, GenerationError
from style_audit.models.corpus import AuditGroup, StylePair
from style_audit.models.generation import GenerationConfig, StylePrompt
from style_audit.models.style import GENERATED_STYLES, StyleId
from style_audit.utils.logging_decorator import log_function

logger = logging.getLogger(__name__)

# 尚无任何成功时失败数达到该值，即视为端点不可用
FAIL_FAST_AFTER = 8

REWRITE_INSTRUCTION = "Please rewrite the following text"

_INSTRUCTIONS: Dict[StyleId, str] = {
    StyleId.STYLE_0: REWRITE_INSTRUCTION,
    StyleId.STYLE_1: "Your writing style is formal, efficient, and concise, using professional language and focusing on facts, figures, and data.",
    StyleId.STYLE_2: "Your writing style is clear and using simple language, often avoiding idioms or complex sentences.",
    StyleId.STYLE_3: "Your writing style is informal, often includes emojis, abbreviations, and internet slang.",
    StyleId.STYLE_4: "Your writing style is polite, respectful, and somewhat formal. You use more traditional language and avoid using slang or abbreviations.",
    StyleId.STYLE_5: "Your writing style is formal, detailed, and precise manner with structured texts. You use technical language and focus on evidence-based arguments.",
    StyleId.STYLE_6: "Your writing style is energetic, motivational, and positive manner.",
    StyleId.STYLE_7: "Your writing style is friendly, casual, and empathetic manner with personal anecdotes",
    StyleId.STYLE_8: "Your writing style is expressive and emotive (passionate, engaging, empathetic). You use metaphors, analogies, and storytelling to convey your points.",
}

_CATALOG: Tuple[StylePrompt, ...] = tuple(
    StylePrompt(style=s, instruction=_INSTRUCTIONS[s]) for s in GENERATED_STYLES
)


def style_catalog() -> List[StylePrompt]:
    """9 个风格指令，按 Style0..Style8 排列（常量）"""
    return list(_CATALOG)


def build_messages(text: str, style: StyleId) -> List[Message]:
    """构造对话消息"""
    if style is StyleId.STYLE_0:
        return [
            {"role": "system", "content": ""},
            {"role": "user", "content": f"{REWRITE_INSTRUCTION}:\n\n{text}"},
        ]
    return [
        {"role": "system", "content": _INSTRUCTIONS[style]},
        {"role": "user", "content": f"{REWRITE_INSTRUCTION}:\n\n{text}"},
    ]


def _passes_length_gate(source: str, output: str, ratio: float) -> bool:
    out = output.strip()
    if not out:
        return False
    return len(out.split()) >= ratio * len(source.split())


def rewrite(
    text: str,
    style: StyleId,
    config: GenerationConfig,
    endpoint: ChatEndpoint,
) -> str:
    """
    将文本改写为指定风格

    Args:
        text: 原文（非空）
        style: Style0..Style8
        config: 生成配置
        endpoint: 对话端点

    Returns:
        改写结果（已去首尾空白）

    Raises:
        ValueError: 原文为空或 style 为 original
        GenerationError: 输出为空/过短，重试耗尽
        EndpointError: 传输失败或响应无法解析（客户端已重试，这里不再重试）
    """
    if not text or not text.strip():
        raise ValueError("rewrite 的原文不能为空")
    if style is StyleId.ORIGINAL:
        raise ValueError("original 不需要改写")

    source = text.strip()
    messages = build_messages(source, style)
    last_err: Optional[GenerationError] = None
    for attempt in range(config.max_retries + 1):
        try:
            output = endpoint.complete(config.model_id, messages, config.temperature)
        except EndpointError as e:
            if e.stage is None:
                e.stage = "stylegen"
            raise
        if _passes_length_gate(source, output, config.min_length_ratio):
            return output.strip()
        last_err = GenerationError(
            f"{style.value} 输出过短或为空（{len(output.split())} 词 / 原文 {len(source.split())} 词）",
            stage="stylegen",
        )
        logger.debug(f"{style.value} 第 {attempt + 1} 次输出被拒: {last_err}")

    assert last_err is not None
    raise last_err


class _Counter:
    """线程安全计数"""

    def __init__(self):
        self._lock = threading.Lock()
        self.ok = 0
        self.failed = 0
        self.cached = 0
        self.skipped = 0

    def add(self, field: str) -> None:
        with self._lock:
            setattr(self, field, getattr(self, field) + 1)

    def nothing_succeeded(self) -> bool:
        with self._lock:
            return not self.ok and not self.cached


def cached_rewrite(
    text: str,
    style: StyleId,
    config: GenerationConfig,
    endpoint: ChatEndpoint,
    cache: DiskCache,
) -> Tuple[str, bool]:
    """
    带缓存的改写

    Returns:
        (改写结果, 是否新生成)
    """
    key = cache_key(config.model_id, style.value, text)

    def _factory() -> dict:
        return {
            "model": config.model_id,
            "style": style.value,
            "output": rewrite(text, style, config, endpoint),
        }

    payload, created = cache.get_or_create("gen", key, _factory)
    return payload["output"], created


@log_function()
def build_groups(
    pairs: Sequence[StylePair],
    config: GenerationConfig,
    endpoint: ChatEndpoint,
    cache: DiskCache,
    rewrite_queries: bool = False,
) -> List[AuditGroup]:
    """
    为每个 (query, document) 对生成风格变体

    单条改写失败只导致该变体缺失（组不完整）；只有全部请求都失败时才中止。
    尚无成功请求而失败数达到 FAIL_FAST_AFTER 时，跳过剩余任务并中止。

    Args:
        pairs: 原始对（非空）
        config: 生成配置
        endpoint: 对话端点
        cache: 生成缓存
        rewrite_queries: 是否同时改写查询

    Returns:
        与输入同序的组
    """
    if not pairs:
        raise CorpusError("build_groups 的输入为空", stage="stylegen")

    sides = ["document", "query"] if rewrite_queries else ["document"]
    jobs = [(i, side, style) for i in range(len(pairs)) for side in sides for style in GENERATED_STYLES]
    counter = _Counter()
    last_error: List[Exception] = []
    stop = threading.Event()

    def _run(job: Tuple[int, str, StyleId]) -> Optional[str]:
        i, side, style = job
        pair = pairs[i]
        if stop.is_set():
            counter.add("skipped")
            return None
        source = pair.document if side == "document" else pair.query
        try:
            output, created = cached_rewrite(source, style, config, endpoint, cache)
        except EndpointError as e:
            counter.add("failed")
            last_error[:] = [e]
            logger.warning(f"[{pair.group_id}] {side}.{style.value} 生成失败: {e}")
            if counter.failed >= FAIL_FAST_AFTER and counter.nothing_succeeded():
                stop.set()
            return None
        counter.add("ok" if created else "cached")
        return output

    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        results = list(
            tqdm(pool.map(_run, jobs), total=len(jobs), desc="rewrite", disable=TQDM_DISABLE, leave=False)
        )

    if stop.is_set() or (counter.failed and not counter.ok and not counter.cached):
        raise EndpointError(
            f"{counter.failed} 个改写请求失败（跳过 {counter.skipped} 个），端点可能不可用: "
            f"{last_error[0] if last_error else ''}",
            stage="stylegen",
        )

    variants: Dict[Tuple[int, str], Dict[StyleId, str]] = {}
    for (i, side, style), output in zip(jobs, results):
        if output is not None:
            variants.setdefault((i, side), {})[style] = output

    groups: List[AuditGroup] = []
    for i, pair in enumerate(pairs):
        docs = {StyleId.ORIGINAL: pair.document, **variants.get((i, "document"), {})}
        queries = {StyleId.ORIGINAL: pair.query, **variants.get((i, "query"), {})}
        groups.append(AuditGroup(group_id=pair.group_id, query_variants=queries, doc_variants=docs))

    logger.info(
        f"改写完成: 新生成 {counter.ok}，缓存命中 {counter.cached}，失败 {counter.failed}"
    )
    return groups
