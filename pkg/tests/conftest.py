# -*- coding: utf-8 -*-
"""
测试公共夹具：离线对话/嵌入桩、组语料与问答语料
"""

import hashlib
import json
import threading
from pathlib import Path
from typing import Dict, List, Optional, Set

import numpy as np
import pytest

from style_audit.clients.cache import DiskCache
from style_audit.errors import EndpointError
from style_audit.models.corpus import AuditGroup
from style_audit.models.style import ALL_STYLES, StyleId
from style_audit.services.corpus import group_to_record
from style_audit.services.stylegen import style_catalog


class StubChat:
    """
    离线对话端点

    mode="echo" 原样返回原文；mode="tag" 在原文前加上风格名。
    fail_on 中的风格触发 EndpointError；short_on 中的风格返回空串。
    """

    def __init__(self, mode: str = "echo", fail_on: Set[StyleId] = frozenset(), short_on: Set[StyleId] = frozenset()):
        self.mode = mode
        self.fail_on = set(fail_on)
        self.short_on = set(short_on)
        self.calls: List[dict] = []
        self._lock = threading.Lock()
        self._by_system = {p.instruction: p.style for p in style_catalog()}
        self._by_system[""] = StyleId.STYLE_0

    def complete(self, model: str, messages: List[Dict[str, str]], temperature: float) -> str:
        with self._lock:
            self.calls.append({"model": model, "messages": messages, "temperature": temperature})
        style = self._by_system[messages[0]["content"]]
        text = messages[1]["content"].split(":\n\n", 1)[1]
        if style in self.fail_on:
            raise EndpointError("stub failure")
        if style in self.short_on:
            return ""
        if self.mode == "tag":
            return f"{style.value} {text}"
        return text

    def close(self) -> None:
        pass


class StubEmbedding:
    """
    离线嵌入端点：向量由文本的 sha256 决定

    bad_index 处的向量多一维；含 zero_if 子串的文本返回零向量。
    """

    def __init__(self, dim: int = 8, bad_index: Optional[int] = None, zero_if: Optional[str] = None):
        self.dim = dim
        self.bad_index = bad_index
        self.zero_if = zero_if
        self.requests = 0
        self.texts_seen: List[str] = []
        self._lock = threading.Lock()

    def vector(self, text: str) -> List[float]:
        seed = int.from_bytes(hashlib.sha256(text.encode("utf-8")).digest()[:8], "big")
        return np.random.default_rng(seed).normal(size=self.dim).tolist()

    def embed(self, model: str, texts: List[str]) -> List[List[float]]:
        with self._lock:
            self.requests += 1
            self.texts_seen.extend(texts)
        out = [[0.0] * self.dim if self.zero_if and self.zero_if in t else self.vector(t) for t in texts]
        if self.bad_index is not None and self.bad_index < len(out):
            out[self.bad_index] = out[self.bad_index] + [0.0]
        return out


def make_group(gid: str, queries: bool = True) -> AuditGroup:
    """10 个风格各不相同的完整组"""
    docs = {s: f"document {gid} written in {s.value} manner" for s in ALL_STYLES}
    qs = {s: f"query {gid} asked in {s.value} manner" for s in ALL_STYLES} if queries else {
        StyleId.ORIGINAL: f"query {gid}"
    }
    return AuditGroup(group_id=gid, query_variants=qs, doc_variants=docs)


def write_jsonl(path: Path, rows: List[dict]) -> Path:
    path.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows), encoding="utf-8")
    return path


@pytest.fixture
def groups() -> List[AuditGroup]:
    return [make_group(f"g{i}") for i in range(3)]


@pytest.fixture
def groups_path(tmp_path, groups) -> Path:
    return write_jsonl(tmp_path / "groups.jsonl", [group_to_record(g) for g in groups])


@pytest.fixture
def echo_groups_path(tmp_path) -> Path:
    """所有变体都等于原文的语料"""
    rows = []
    for i in range(2):
        doc = f"the quick brown fox number {i} jumps over the lazy dog"
        query = f"where does fox {i} jump"
        rows.append(
            {
                "group_id": f"e{i}",
                "query": {s.value: query for s in ALL_STYLES},
                "document": {s.value: doc for s in ALL_STYLES},
            }
        )
    return write_jsonl(tmp_path / "echo.jsonl", rows)


@pytest.fixture
def qa_rows() -> List[dict]:
    return [
        {
            "question": "What is the capital of France?",
            "gt_answer": "Paris is the capital of France.",
            "answers": [
                {"system": "alpha", "text": "Paris is the capital of France.", "human_correct": True},
                {"system": "beta", "text": "The capital city is Paris.", "human_correct": True},
                {"system": "gamma", "text": "Lyon.", "human_correct": False},
            ],
        },
        {
            "question": "How many legs does a spider have?",
            "gt_answer": "A spider has eight legs.",
            "answers": [
                {"system": "alpha", "text": "Eight legs.", "human_correct": True},
                {"system": "beta", "text": "Spiders have 8 legs 🕷️", "human_correct": True},
                {"system": "gamma", "text": "A spider has eight legs.", "human_correct": True},
            ],
        },
    ]


@pytest.fixture
def qa_path(tmp_path, qa_rows) -> Path:
    return write_jsonl(tmp_path / "qa.jsonl", qa_rows)


@pytest.fixture
def memory_cache() -> DiskCache:
    return DiskCache(None)


@pytest.fixture
def stub_chat() -> StubChat:
    return StubChat()


@pytest.fixture
def stub_embedding() -> StubEmbedding:
    return StubEmbedding()
