# -*- coding: utf-8 -*-
"""
相关性打分器

统一接口 RelevanceScorer，三种实现：
- EmbeddingScorer：远程嵌入端点 + 余弦相似度
- Bm25Scorer：本地 BM25（Lucene 风格 idf，k1=1.5, b=0.75）
- MockScorer：确定性离线打分器（测试与偏好方向校验）
"""

import hashlib
import logging
import math
from abc import ABC, abstractmethod
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from style_audit import config
from style_audit.clients.cache import DiskCache, cache_key
from style_audit.clients.embedding import EmbeddingClient, EmbeddingEndpoint
from style_audit.errors import ConfigError, EndpointError
from style_audit.models.scorer import Bm25Params, MockSpec, ScorerDescriptor
from style_audit.models.style import ALL_STYLES, StyleId
from style_audit.utils.text import tokenize

logger = logging.getLogger(__name__)

EmbeddingVector = np.ndarray


# ---------- 余弦相似度 ----------
def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """
    余弦相似度，结果截断到 [-1, 1]

    Raises:
        ValueError: 维度不一致或存在零向量
    """
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"维度不一致: {a.shape} vs {b.shape}")
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise ValueError("零向量没有余弦相似度")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


# ---------- BM25 ----------
@dataclass(frozen=True)
class Bm25Index:
    """BM25 语料统计（构建后不可变，可并发打分）"""

    term_freqs: Tuple[Mapping[str, int], ...]
    doc_lengths: Tuple[int, ...]
    doc_freq: Mapping[str, int]
    avgdl: float
    n_docs: int
    params: Bm25Params

    def idf(self, term: str) -> float:
        """ln(1 + (N - df + 0.5) / (df + 0.5))，恒非负"""
        df = self.doc_freq.get(term, 0)
        return math.log(1.0 + (self.n_docs - df + 0.5) / (df + 0.5))


def bm25_build(documents: Sequence[str], params: Optional[Bm25Params] = None) -> Bm25Index:
    """
    在给定文档池上构建 BM25 统计（重复文档按多重集计数）

    Raises:
        ValueError: 文档池为空或全部为空文本
    """
    if not documents:
        raise ValueError("BM25 文档池为空")
    params = params or Bm25Params()
    tfs = [Counter(tokenize(d)) for d in documents]
    lengths = [sum(tf.values()) for tf in tfs]
    if not any(lengths):
        raise ValueError("BM25 文档池中所有文档都为空")
    df: Counter = Counter()
    for tf in tfs:
        df.update(tf.keys())
    return Bm25Index(
        term_freqs=tuple(tfs),
        doc_lengths=tuple(lengths),
        doc_freq=dict(df),
        avgdl=sum(lengths) / len(lengths),
        n_docs=len(documents),
        params=params,
    )


def _bm25_tokens(query_tokens: Sequence[str], tf: Mapping[str, int], dl: int, index: Bm25Index) -> float:
    k1, b = index.params.k1, index.params.b
    norm = k1 * (1.0 - b + b * dl / index.avgdl)
    score = 0.0
    # 重复的查询词按出现次数累加
    for t in query_tokens:
        f = tf.get(t, 0)
        if f:
            score += index.idf(t) * f * (k1 + 1.0) / (f + norm)
    return score


def bm25_score(query: str, index: Bm25Index, doc_id: int) -> float:
    """
    查询对索引中第 doc_id 篇文档的 BM25 分数

    Raises:
        IndexError: doc_id 越界
    """
    if not 0 <= doc_id < index.n_docs:
        raise IndexError(f"doc_id {doc_id} 越界（N={index.n_docs}）")
    return _bm25_tokens(tokenize(query), index.term_freqs[doc_id], index.doc_lengths[doc_id], index)


def bm25_score_text(query: str, index: Bm25Index, document: str) -> float:
    """用索引的语料统计给任意文档打分（文档不必在索引中）"""
    tokens = tokenize(document)
    return _bm25_tokens(tokenize(query), Counter(tokens), len(tokens), index)


# ---------- 嵌入 ----------
def _to_vector(raw, model_id: str, where: str) -> EmbeddingVector:
    try:
        vec = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as e:
        raise EndpointError(f"{model_id}: {where} 不是数值向量", stage="scorers") from e
    if vec.ndim != 1 or vec.size == 0:
        raise EndpointError(f"{model_id}: {where} 不是一维非空向量", stage="scorers")
    if not np.all(np.isfinite(vec)):
        raise EndpointError(f"{model_id}: {where} 含非有限值", stage="scorers")
    if not np.any(vec):
        raise EndpointError(f"{model_id}: {where} 是零向量，无法计算余弦相似度", stage="scorers")
    return vec


def embed_batch(
    texts: Sequence[str],
    descriptor: ScorerDescriptor,
    cache: DiskCache,
    client: EmbeddingEndpoint,
    parallelism: int = 1,
    batch_size: int = config.EMBED_BATCH,
) -> List[EmbeddingVector]:
    """
    批量获取嵌入，按 (model_id, 文本) 缓存原始向量

    Returns:
        与输入同序的向量列表（维度一致）

    Raises:
        EndpointError: 传输失败、维度不一致（指明下标）、非有限值
    """
    if not texts:
        raise ValueError("embed_batch 的输入为空")
    if descriptor.kind != "embedding":
        raise ConfigError(f"embed_batch 需要 embedding 打分器，得到 {descriptor.kind}", stage="scorers")
    model_id = descriptor.model_id or ""

    found: Dict[str, EmbeddingVector] = {}
    first_pos: Dict[str, int] = {}
    missing: List[str] = []
    for pos, text in enumerate(texts):
        if text in found or text in first_pos:
            continue
        payload = cache.get("emb", cache_key(model_id, text))
        if payload is not None:
            found[text] = _to_vector(payload.get("vector"), model_id, f"缓存项 texts[{pos}]")
        else:
            first_pos[text] = pos
            missing.append(text)

    chunks = [missing[i : i + batch_size] for i in range(0, len(missing), batch_size)]

    def _fetch(chunk: List[str]) -> List[EmbeddingVector]:
        raw = client.embed(model_id, chunk)
        if len(raw) != len(chunk):
            raise EndpointError(
                f"{model_id}: 返回 {len(raw)} 个向量，期望 {len(chunk)}", stage="scorers"
            )
        vecs = [_to_vector(r, model_id, f"texts[{first_pos[t]}]") for r, t in zip(raw, chunk)]
        dim = vecs[0].size
        for v, t in zip(vecs, chunk):
            if v.size != dim:
                raise EndpointError(
                    f"{model_id}: texts[{first_pos[t]}] 维度 {v.size} 与批内其他向量 {dim} 不一致",
                    stage="scorers",
                )
        return vecs

    if chunks:
        with ThreadPoolExecutor(max_workers=max(1, parallelism)) as pool:
            for chunk, vecs in zip(chunks, pool.map(_fetch, chunks)):
                for text, vec in zip(chunk, vecs):
                    cache.put(
                        "emb",
                        cache_key(model_id, text),
                        {"model": model_id, "dim": int(vec.size), "vector": vec.tolist()},
                    )
                    found[text] = vec

    out = [found[t] for t in texts]
    dim = out[0].size
    for pos, v in enumerate(out):
        if v.size != dim:
            raise EndpointError(
                f"{model_id}: texts[{pos}] 维度 {v.size} 与 texts[0] 的 {dim} 不一致", stage="scorers"
            )
    return out


# ---------- 统一打分接口 ----------
class RelevanceScorer(ABC):
    """相关性打分器"""

    def __init__(self, descriptor: ScorerDescriptor):
        self.descriptor = descriptor

    @property
    def kind(self) -> str:
        return self.descriptor.kind

    @property
    def label(self) -> str:
        return self.descriptor.label()

    def prepare(self, documents: Sequence[str], queries: Sequence[str] = ()) -> None:
        """在打分前看到整次运行的文本池（预取嵌入 / 构建 BM25 统计）"""

    @abstractmethod
    def score(
        self,
        query: str,
        candidates: Sequence[str],
        *,
        query_style: Optional[StyleId] = None,
        candidate_styles: Optional[Sequence[StyleId]] = None,
    ) -> List[float]:
        """每个候选一个分数，与输入同序；风格信息仅供 mock 使用"""

    def similarity(self, a: str, b: str) -> float:
        """两段文本的相似度"""
        return self.score(a, [b])[0]


class EmbeddingScorer(RelevanceScorer):
    """嵌入余弦打分器"""

    def __init__(
        self,
        descriptor: ScorerDescriptor,
        client: EmbeddingEndpoint,
        cache: DiskCache,
        parallelism: int = 1,
    ):
        super().__init__(descriptor)
        self.client = client
        self.cache = cache
        self.parallelism = parallelism
        self.dim: Optional[int] = None
        self._vectors: Dict[str, EmbeddingVector] = {}

    def _ensure(self, texts: Sequence[str]) -> None:
        todo = list(dict.fromkeys(t for t in texts if t not in self._vectors))
        if not todo:
            return
        vecs = embed_batch(todo, self.descriptor, self.cache, self.client, self.parallelism)
        if self.dim is None:
            self.dim = int(vecs[0].size)
        if vecs[0].size != self.dim:
            raise EndpointError(
                f"{self.descriptor.model_id}: 维度 {vecs[0].size} 与本次运行已见的 {self.dim} 不一致",
                stage="scorers",
            )
        self._vectors.update(zip(todo, vecs))

    def prepare(self, documents: Sequence[str], queries: Sequence[str] = ()) -> None:
        self._ensure(list(queries) + list(documents))

    def score(self, query, candidates, *, query_style=None, candidate_styles=None) -> List[float]:
        self._ensure([query, *candidates])
        q = self._vectors[query]
        return [cosine(q, self._vectors[c]) for c in candidates]


class Bm25Scorer(RelevanceScorer):
    """
    BM25 打分器

    语料统计来自 prepare() 传入的整次运行候选文档池；未调用 prepare 时
    以当前候选列表为池。
    """

    def __init__(self, descriptor: ScorerDescriptor):
        super().__init__(descriptor)
        self.index: Optional[Bm25Index] = None

    def prepare(self, documents: Sequence[str], queries: Sequence[str] = ()) -> None:
        self.index = bm25_build(list(documents), self.descriptor.bm25_params)

    def score(self, query, candidates, *, query_style=None, candidate_styles=None) -> List[float]:
        index = self.index or bm25_build(list(candidates), self.descriptor.bm25_params)
        return [bm25_score_text(query, index, c) for c in candidates]


class MockScorer(RelevanceScorer):
    """
    确定性离线打分器

    候选风格未给出时：canonical 或带 bump 的规格按位置推断（第 i 个候选视为
    规范顺序第 i 个风格）；hash / constant 不看风格，候选数不限。
    """

    def __init__(self, descriptor: ScorerDescriptor):
        super().__init__(descriptor)
        self.spec: MockSpec = descriptor.mock_spec or MockSpec()
        self._table = {(e.query, e.candidate): e.score for e in self.spec.table}

    @staticmethod
    def _hash01(query: str, candidate: str) -> float:
        digest = hashlib.sha256(f"{query}\x00{candidate}".encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "big") / float(1 << 64)

    def _base(self, query: str, candidate: str, style: Optional[StyleId]) -> float:
        if (query, candidate) in self._table:
            return self._table[(query, candidate)]
        if self.spec.base == "canonical":
            return 1.0 / (1.0 + style.position)
        if self.spec.base == "constant":
            return 0.5
        if query == candidate:
            return 1.0
        return 0.9 * self._hash01(query, candidate)

    @property
    def uses_styles(self) -> bool:
        return self.spec.base == "canonical" or self.spec.bump_style is not None or self.spec.bump_query

    def score(self, query, candidates, *, query_style=None, candidate_styles=None) -> List[float]:
        if candidate_styles is None:
            if not self.uses_styles:
                candidate_styles = [None] * len(candidates)
            elif len(candidates) > len(ALL_STYLES):
                raise ValueError(f"{self.label} 需要候选风格，最多按位置推断 10 个")
            else:
                candidate_styles = ALL_STYLES[: len(candidates)]
        target = self.spec.bump_style
        if self.spec.bump_query:
            target = query_style
        out = []
        for cand, style in zip(candidates, candidate_styles):
            s = self._base(query, cand, style)
            if target is not None and style is target:
                s += self.spec.bump
            out.append(s)
        return out


def build_scorer(
    descriptor: ScorerDescriptor,
    cache: DiskCache,
    embedding_client: Optional[EmbeddingEndpoint] = None,
    parallelism: int = 1,
) -> RelevanceScorer:
    """
    根据描述创建打分器

    embedding_client 为空时按描述中的端点创建 EmbeddingClient。
    """
    if descriptor.kind == "embedding":
        client = embedding_client or EmbeddingClient(base_url=descriptor.endpoint or "")
        return EmbeddingScorer(descriptor, client, cache, parallelism)
    if descriptor.kind == "bm25":
        return Bm25Scorer(descriptor)
    return MockScorer(descriptor)


def score_relevance(
    descriptor: ScorerDescriptor,
    query: str,
    candidates: Sequence[str],
    cache: DiskCache,
    *,
    embedding_client: Optional[EmbeddingEndpoint] = None,
    pool: Optional[Sequence[str]] = None,
    query_style: Optional[StyleId] = None,
    candidate_styles: Optional[Sequence[StyleId]] = None,
) -> List[float]:
    """
    一次性打分：每个候选一个分数

    Args:
        pool: BM25 统计使用的文档池（默认为候选本身）
    """
    if not candidates:
        raise ValueError("候选列表为空")
    scorer = build_scorer(descriptor, cache, embedding_client)
    scorer.prepare(list(pool) if pool is not None else list(candidates), [query])
    return scorer.score(
        query, candidates, query_style=query_style, candidate_styles=candidate_styles
    )
