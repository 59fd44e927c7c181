# -*- coding: utf-8 -*-
"""
打分器：SPEC 解析、余弦、嵌入缓存、mock 与 BM25 池
"""

import math

import numpy as np
import pytest

from style_audit.clients.cache import DiskCache, cache_key
from style_audit.errors import ConfigError, EndpointError
from style_audit.models.scorer import ScorerDescriptor, parse_scorer_list
from style_audit.models.style import ALL_STYLES, StyleId
from style_audit.services.scorers import (
    EmbeddingScorer,
    MockScorer,
    bm25_build,
    bm25_score_text,
    build_scorer,
    cosine,
    embed_batch,
    score_relevance,
)
from tests.conftest import StubEmbedding


class TestDescriptorParsing:
    def test_embedding_with_url(self):
        d = ScorerDescriptor.parse("embedding:text-embed-small@http://host:9000/")
        assert (d.kind, d.model_id, d.endpoint) == ("embedding", "text-embed-small", "http://host:9000")
        assert d.label() == "embedding:text-embed-small@http://host:9000"

    def test_embedding_falls_back_to_default_endpoint(self):
        d = ScorerDescriptor.parse("embedding:m1", default_endpoint="http://e")
        assert d.endpoint == "http://e"

    def test_bm25_defaults_and_params(self):
        assert ScorerDescriptor.parse("bm25").label() == "bm25:k1=1.5,b=0.75"
        d = ScorerDescriptor.parse("bm25:k1=1.2,b=0.5")
        assert (d.bm25_params.k1, d.bm25_params.b) == (1.2, 0.5)

    def test_mock_spec(self):
        d = ScorerDescriptor.parse("mock:canonical+bump=style-3:2")
        assert d.mock_spec.base == "canonical"
        assert d.mock_spec.bump_style is StyleId.STYLE_3
        assert d.mock_spec.bump == 2.0
        assert ScorerDescriptor.parse("mock:hash+bump=query").mock_spec.bump_query

    def test_comma_list_keeps_bm25_params_together(self):
        ds = parse_scorer_list(["bm25:k1=1.2,b=0.5,mock:canonical", "embedding:m@http://x"])
        assert [d.kind for d in ds] == ["bm25", "mock", "embedding"]
        assert ds[0].bm25_params.b == 0.5

    @pytest.mark.parametrize(
        "spec",
        ["word2vec:m", "embedding:@http://x", "embedding:m", "bm25:k1=0", "bm25:b=2", "bm25:x=1", "mock:random", "mock:hash+bump=style_12"],
    )
    def test_bad_specs_are_config_errors(self, spec):
        with pytest.raises(ConfigError):
            ScorerDescriptor.parse(spec)


class TestCosine:
    def test_parallel_and_opposite(self):
        assert cosine([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
        assert cosine([1, 0], [-1, 0]) == pytest.approx(-1.0)
        assert cosine([1, 0], [0, 1]) == pytest.approx(0.0)

    def test_clipped_to_unit_interval(self):
        v = [0.1] * 1000
        assert -1.0 <= cosine(v, v) <= 1.0

    def test_errors(self):
        with pytest.raises(ValueError):
            cosine([1, 2], [1, 2, 3])
        with pytest.raises(ValueError):
            cosine([0, 0], [1, 2])

    def test_symmetric_and_scale_invariant(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            u, v = rng.normal(size=(2, 16))
            alpha = float(rng.uniform(1e-3, 1e3))
            assert cosine(u, v) == pytest.approx(cosine(v, u), abs=1e-12)
            assert cosine(alpha * u, v) == pytest.approx(cosine(u, v), abs=1e-12)
            assert cosine(u, alpha * u) == pytest.approx(1.0, abs=1e-12)


class TestEmbedding:
    descriptor = ScorerDescriptor.parse("embedding:stub@http://stub")

    def test_dedup_and_cache(self, tmp_path):
        client = StubEmbedding()
        cache = DiskCache(tmp_path)
        vecs = embed_batch(["a", "b", "a"], self.descriptor, cache, client)
        assert client.texts_seen == ["a", "b"]
        np.testing.assert_allclose(vecs[0], vecs[2])

        warm = StubEmbedding()
        again = embed_batch(["b", "a"], self.descriptor, DiskCache(tmp_path), warm)
        assert warm.requests == 0
        np.testing.assert_allclose(again[1], vecs[0])

    def test_batches_respect_size(self, memory_cache):
        client = StubEmbedding()
        embed_batch([f"t{i}" for i in range(10)], self.descriptor, memory_cache, client, batch_size=4)
        assert client.requests == 3

    def test_dimension_mismatch_names_text(self, memory_cache):
        client = StubEmbedding(bad_index=1)
        with pytest.raises(EndpointError, match=r"texts\[1\]"):
            embed_batch(["x", "y", "z"], self.descriptor, memory_cache, client)

    def test_zero_vector_is_endpoint_error(self, memory_cache):
        client = StubEmbedding(zero_if="broken")
        with pytest.raises(EndpointError, match=r"texts\[1\]") as info:
            embed_batch(["fine", "broken reply"], self.descriptor, memory_cache, client)
        assert info.value.stage == "scorers"
        # 零向量不进缓存
        assert memory_cache.get("emb", cache_key("stub", "broken reply")) is None

    def test_scorer_uses_cosine(self, memory_cache):
        client = StubEmbedding()
        scorer = EmbeddingScorer(self.descriptor, client, memory_cache)
        scores = scorer.score("q", ["q", "other"])
        assert scores[0] == pytest.approx(1.0)
        assert scores[1] == pytest.approx(cosine(client.vector("q"), client.vector("other")))

    def test_prepare_prefetches_once(self, memory_cache):
        client = StubEmbedding()
        scorer = build_scorer(self.descriptor, memory_cache, embedding_client=client)
        scorer.prepare(["d1", "d2"], ["q"])
        requests = client.requests
        scorer.score("q", ["d1", "d2"])
        assert client.requests == requests


class TestMock:
    def test_canonical_is_decreasing_in_position(self):
        scorer = MockScorer(ScorerDescriptor.parse("mock:canonical"))
        scores = scorer.score("q", [f"d{i}" for i in range(10)])
        assert scores == [1.0 / (1 + i) for i in range(10)]

    def test_hash_identical_texts_score_one(self):
        scorer = MockScorer(ScorerDescriptor.parse("mock:hash"))
        assert scorer.similarity("same", "same") == 1.0
        s = scorer.similarity("same", "different")
        assert 0.0 <= s < 0.9
        assert scorer.similarity("same", "different") == s

    def test_bump_follows_query_style(self):
        scorer = MockScorer(ScorerDescriptor.parse("mock:canonical+bump=query"))
        scores = scorer.score("q", ["x"] * 10, query_style=StyleId.STYLE_5, candidate_styles=ALL_STYLES)
        assert int(np.argmax(scores)) == ALL_STYLES.index(StyleId.STYLE_5)

    @pytest.mark.parametrize("spec", ["mock:hash", "mock:constant"])
    def test_style_free_bases_take_any_number_of_candidates(self, memory_cache, spec):
        candidates = [f"doc {i}" for i in range(25)]
        scores = score_relevance(ScorerDescriptor.parse(spec), "q", candidates, memory_cache)
        assert len(scores) == 25
        assert scores == MockScorer(ScorerDescriptor.parse(spec)).score("q", candidates)

    def test_style_dependent_specs_need_styles_beyond_ten(self):
        for spec in ["mock:canonical", "mock:hash+bump=style_3"]:
            with pytest.raises(ValueError):
                MockScorer(ScorerDescriptor.parse(spec)).score("q", ["x"] * 11)

    def test_table_overrides(self):
        d = ScorerDescriptor(
            kind="mock",
            mock_spec={"base": "constant", "table": [{"query": "gt", "candidate": "a", "score": 0.8}]},
        )
        scorer = MockScorer(d)
        assert scorer.similarity("gt", "a") == 0.8
        assert scorer.similarity("gt", "b") == 0.5


class TestBm25Scorer:
    def test_pool_statistics_used(self, memory_cache):
        d = ScorerDescriptor.parse("bm25")
        pool = ["red apple", "green apple", "blue sky", "apple pie"]
        direct = score_relevance(d, "apple", ["red apple"], memory_cache, pool=pool)
        index = bm25_build(pool)
        assert direct[0] == pytest.approx(bm25_score_text("apple", index, "red apple"))

    def test_ln2_case(self, memory_cache):
        # N=2, df=1 → idf = ln(2)；tf=1, dl=avgdl → 分数 = idf
        d = ScorerDescriptor.parse("bm25")
        scores = score_relevance(d, "cat", ["cat", "dog"], memory_cache)
        assert scores[0] == pytest.approx(math.log(2.0), abs=1e-12)
        assert scores[1] == 0.0
