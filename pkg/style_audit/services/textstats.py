# -*- coding: utf-8 -*-
"""
文本描述统计

原文与风格变体之间的长度与 n-gram 相似度：
- BLEU：n ≤ 4，修正精度几何平均，零精度以 ε = 0.1 / 假设长度 替换，短译惩罚
- ROUGE-L：基于 LCS 的 F1
- METEOR（简化版）：精确匹配 + 词干匹配，α=0.9, β=3, γ=0.5，无同义词
"""

import math
from collections import Counter
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np
from nltk.stem.porter import PorterStemmer

from style_audit.errors import CorpusError
from style_audit.models.corpus import AuditGroup, QARecord
from style_audit.models.report import StyleStatsRow, SystemStatsRow
from style_audit.models.style import ALL_STYLES, StyleId
from style_audit.utils.logging_decorator import log_function
from style_audit.utils.text import tokenize

BLEU_MAX_N = 4
BLEU_EPSILON = 0.1
METEOR_ALPHA = 0.9
METEOR_BETA = 3.0
METEOR_GAMMA = 0.5

METRIC_CONVENTIONS = {
    "tokenizer": "unicode-whitespace, lowercase, strip edge punctuation, emoji as tokens",
    "bleu": {"max_n": BLEU_MAX_N, "smoothing": "zero precision -> 0.1/hyp_len", "no_unigram_match": 0.0},
    "meteor": {"alpha": METEOR_ALPHA, "beta": METEOR_BETA, "gamma": METEOR_GAMMA, "stemmer": "porter", "synonyms": False},
    "rouge_l": {"beta": 1.0},
}

_STEMMER = PorterStemmer()


@lru_cache(maxsize=65536)
def _stem(token: str) -> str:
    return _STEMMER.stem(token)


def token_length(text: str) -> int:
    """共享分词器下的词数"""
    return len(tokenize(text))


# ---------- BLEU ----------
def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu_tokens(ref: Sequence[str], hyp: Sequence[str]) -> float:
    hyp_len, ref_len = len(hyp), len(ref)
    if hyp_len == 0:
        return 0.0
    eps = BLEU_EPSILON / hyp_len
    log_sum = 0.0
    for n in range(1, BLEU_MAX_N + 1):
        h, r = _ngrams(hyp, n), _ngrams(ref, n)
        matches = sum(min(c, r[g]) for g, c in h.items())
        total = sum(h.values())
        if n == 1 and matches == 0:
            return 0.0
        p = matches / total if matches else eps
        log_sum += math.log(p)
    bp = math.exp(1.0 - ref_len / hyp_len) if hyp_len < ref_len else 1.0
    return min(1.0, bp * math.exp(log_sum / BLEU_MAX_N))


def bleu(reference: str, hypothesis: str) -> float:
    """句子级 BLEU，∈ [0, 1]"""
    return bleu_tokens(tokenize(reference), tokenize(hypothesis))


# ---------- ROUGE-L ----------
def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """最长公共子序列长度（精确动态规划，滚动数组）"""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l_tokens(ref: Sequence[str], hyp: Sequence[str]) -> float:
    lcs = lcs_length(ref, hyp)
    if lcs == 0:
        return 0.0
    p, r = lcs / len(hyp), lcs / len(ref)
    return 2.0 * p * r / (p + r)


def rouge_l(reference: str, hypothesis: str) -> float:
    """ROUGE-L F1（β = 1），∈ [0, 1]"""
    return rouge_l_tokens(tokenize(reference), tokenize(hypothesis))


# ---------- METEOR ----------
def meteor_alignment(ref: Sequence[str], hyp: Sequence[str]) -> List[Tuple[int, int]]:
    """
    贪心对齐：先精确匹配，再词干匹配；假设词从左到右，取第一个未用的参考位置

    Returns:
        按假设位置排序的 (hyp_idx, ref_idx) 列表
    """
    used_ref = [False] * len(ref)
    pairs: Dict[int, int] = {}
    for same in (lambda a, b: a == b, lambda a, b: _stem(a) == _stem(b)):
        for i, h in enumerate(hyp):
            if i in pairs:
                continue
            for j, r in enumerate(ref):
                if not used_ref[j] and same(h, r):
                    pairs[i] = j
                    used_ref[j] = True
                    break
    return sorted(pairs.items())


def meteor_tokens(ref: Sequence[str], hyp: Sequence[str]) -> float:
    alignment = meteor_alignment(ref, hyp)
    m = len(alignment)
    if m == 0:
        return 0.0
    p, r = m / len(hyp), m / len(ref)
    fmean = p * r / (METEOR_ALPHA * p + (1.0 - METEOR_ALPHA) * r)
    chunks = 1
    for (h0, r0), (h1, r1) in zip(alignment, alignment[1:]):
        if not (h1 == h0 + 1 and r1 == r0 + 1):
            chunks += 1
    penalty = METEOR_GAMMA * (chunks / m) ** METEOR_BETA
    return fmean * (1.0 - penalty)


def meteor(reference: str, hypothesis: str) -> float:
    """简化 METEOR，∈ [0, 1]"""
    return meteor_tokens(tokenize(reference), tokenize(hypothesis))


# ---------- 汇总 ----------
def _pair_metrics(reference: str, hypothesis: str) -> Tuple[float, float, float, float]:
    ref, hyp = tokenize(reference), tokenize(hypothesis)
    return float(len(hyp)), bleu_tokens(ref, hyp), meteor_tokens(ref, hyp), rouge_l_tokens(ref, hyp)


@log_function()
def style_stats(groups: Sequence[AuditGroup], side: str = "document") -> List[StyleStatsRow]:
    """
    每个风格一行：平均词数，以及相对原文的平均 BLEU / METEOR / ROUGE-L

    原文行的三项指标按定义记为 1.0（自身比较）。

    Raises:
        CorpusError: 输入为空或所选一侧不完整
    """
    if side not in ("document", "query"):
        raise ValueError(f"side 必须是 document 或 query，得到 {side}")
    if not groups:
        raise CorpusError("style_stats 的输入为空", stage="textstats")

    rows: List[StyleStatsRow] = []
    for style in ALL_STYLES:
        values = []
        for g in groups:
            variants = g.doc_variants if side == "document" else g.query_variants
            if style not in variants:
                raise CorpusError(f"组 {g.group_id} 的 {side} 侧缺少 {style.value}", stage="textstats")
            original = variants[StyleId.ORIGINAL]
            if style is StyleId.ORIGINAL:
                values.append((float(token_length(original)), 1.0, 1.0, 1.0))
            else:
                values.append(_pair_metrics(original, variants[style]))
        # 固定顺序归约，结果与并发无关
        means = np.asarray(values, dtype=np.float64).mean(axis=0)
        rows.append(
            StyleStatsRow(
                style=style,
                n=len(values),
                mean_token_length=float(means[0]),
                mean_bleu=float(means[1]),
                mean_meteor=float(means[2]),
                mean_rouge_l=float(means[3]),
            )
        )
    return rows


@log_function()
def answer_stats(records: Sequence[QARecord], correct_only: bool = True) -> List[SystemStatsRow]:
    """
    每个问答系统一行：平均答案词数，以及相对标准答案的平均 BLEU / METEOR / ROUGE-L

    gt_mean_token_length 为这些答案对应标准答案的平均词数（图中的虚线基准）。
    """
    per_system: Dict[str, List[Tuple[float, float, float, float, float]]] = {}
    for rec in records:
        for ans in rec.answers:
            if correct_only and not ans.human_correct:
                continue
            length, b, m, r = _pair_metrics(rec.gt_answer, ans.text)
            per_system.setdefault(ans.system_id, []).append(
                (length, b, m, r, float(token_length(rec.gt_answer)))
            )
    if not per_system:
        raise CorpusError("没有符合条件的答案", stage="textstats")

    rows = []
    for system_id in sorted(per_system):
        means = np.asarray(per_system[system_id], dtype=np.float64).mean(axis=0)
        rows.append(
            SystemStatsRow(
                system_id=system_id,
                n=len(per_system[system_id]),
                mean_token_length=float(means[0]),
                mean_bleu=float(means[1]),
                mean_meteor=float(means[2]),
                mean_rouge_l=float(means[3]),
                gt_mean_token_length=float(means[4]),
            )
        )
    return rows
