# -*- coding: utf-8 -*-
"""
BM25 与逐项公式暴力计算的一致性
"""

import itertools
import math
import random

import pytest

from style_audit.models.scorer import Bm25Params
from style_audit.services.scorers import bm25_build, bm25_score, bm25_score_text

VOCAB = ["ant", "bee", "cat", "dog", "eel", "fox"]


def oracle(query, docs, doc_id, k1=1.5, b=0.75):
    n = len(docs)
    avgdl = sum(len(d) for d in docs) / n
    doc = docs[doc_id]
    total = 0.0
    for term in query:
        df = sum(1 for d in docs if term in d)
        idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
        tf = doc.count(term)
        total += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(doc) / avgdl))
    return total


def _check(corpus, queries, params=None):
    index = bm25_build([" ".join(d) for d in corpus], params)
    k1, b = (params.k1, params.b) if params else (1.5, 0.75)
    for q in queries:
        for i in range(len(corpus)):
            got = bm25_score(" ".join(q), index, i)
            assert got == pytest.approx(oracle(q, corpus, i, k1, b), abs=1e-9)


def test_exhaustive_small_corpora():
    """4 个词、文档长度 ≤ 2、至多 3 篇文档的全部语料；更大的空间由下面的随机语料覆盖"""
    vocab = VOCAB[:4]
    docs = [()] + [d for n in (1, 2) for d in itertools.product(vocab, repeat=n)]
    queries = [(t,) for t in vocab] + [("ant", "bee"), ("cat", "cat"), ("eel",)]
    for size in (1, 2, 3):
        for corpus in itertools.combinations_with_replacement(docs, size):
            if not any(corpus):
                continue
            _check([list(d) for d in corpus], queries)


def test_random_corpora_up_to_five_documents():
    rng = random.Random(20240601)
    for _ in range(5000):
        corpus = [[rng.choice(VOCAB) for _ in range(rng.randint(0, 4))] for _ in range(rng.randint(1, 5))]
        if not any(corpus):
            continue
        queries = [[rng.choice(VOCAB) for _ in range(rng.randint(1, 3))] for _ in range(3)]
        _check(corpus, queries)


def test_score_non_decreasing_in_query_term_frequency():
    # 用非查询词占位，替换后文档长度与索引统计都不变
    rng = random.Random(99)
    for _ in range(300):
        pool = [" ".join(rng.choice(VOCAB) for _ in range(rng.randint(1, 4))) for _ in range(rng.randint(1, 5))]
        index = bm25_build(pool)
        term = rng.choice(VOCAB)
        query = " ".join([term] + [rng.choice(VOCAB) for _ in range(rng.randint(0, 2))])
        tokens = ["zzz"] * rng.randint(1, 6)
        previous = bm25_score_text(query, index, " ".join(tokens))
        for i in range(len(tokens)):
            tokens[i] = term
            current = bm25_score_text(query, index, " ".join(tokens))
            assert current >= previous - 1e-12
            previous = current


def test_custom_parameters():
    rng = random.Random(7)
    params = Bm25Params(k1=1.2, b=0.3)
    for _ in range(200):
        corpus = [[rng.choice(VOCAB) for _ in range(rng.randint(1, 4))] for _ in range(rng.randint(1, 5))]
        _check(corpus, [[rng.choice(VOCAB)]], params)


def test_ln2_hand_case():
    index = bm25_build(["cat", "dog"])
    assert bm25_score("cat", index, 0) == pytest.approx(math.log(2.0), abs=1e-12)


def test_idf_never_negative():
    index = bm25_build(["cat"] * 5)
    assert bm25_score("cat", index, 0) > 0.0


def test_out_of_range_doc_id():
    index = bm25_build(["cat"])
    with pytest.raises(IndexError):
        bm25_score("cat", index, 1)


def test_empty_pool_rejected():
    with pytest.raises(ValueError):
        bm25_build([])
