# -*- coding: utf-8 -*-
"""
答案正确性分数与系统间不公平分数
"""

import pytest

from style_audit.errors import ConfigError, CorpusError
from style_audit.models.corpus import QARecord
from style_audit.models.report import SystemCorrectness
from style_audit.models.scorer import ScorerDescriptor
from style_audit.services.answereval import (
    answer_style_unfairness,
    audit_answers,
    correctness_score,
    per_system_correctness,
)
from style_audit.services.scorers import Bm25Scorer, EmbeddingScorer, MockScorer
from tests.conftest import StubEmbedding


def _records(rows):
    return [QARecord.model_validate(r) for r in rows]


def _table_scorer(entries):
    return MockScorer(
        ScorerDescriptor(
            kind="mock",
            mock_spec={
                "base": "constant",
                "table": [{"query": q, "candidate": c, "score": s} for q, c, s in entries],
            },
        )
    )


def test_identical_answer_scores_one(memory_cache):
    scorer = EmbeddingScorer(ScorerDescriptor.parse("embedding:m@http://stub"), StubEmbedding(), memory_cache)
    assert correctness_score("Paris.", "Paris.", scorer) == pytest.approx(1.0)
    assert correctness_score("Paris.", "Paris.", MockScorer(ScorerDescriptor.parse("mock:hash"))) == 1.0


def test_bm25_rejected():
    scorer = Bm25Scorer(ScorerDescriptor.parse("bm25"))
    with pytest.raises(ConfigError):
        correctness_score("a", "b", scorer)
    with pytest.raises(ConfigError):
        per_system_correctness(_records([{"question": "q", "gt_answer": "a", "answers": []}]), scorer)


def test_table_value_returned():
    scorer = _table_scorer([("gt", "ans", 0.42)])
    assert correctness_score("gt", "ans", scorer) == 0.42


def test_exact_answer_mean(qa_rows):
    rows = per_system_correctness(_records(qa_rows[:1]), MockScorer(ScorerDescriptor.parse("mock:hash")))
    alpha = rows[0]
    assert (alpha.system_id, alpha.mean_score, alpha.n_answers) == ("alpha", 1.0, 1)


def test_incorrect_answers_filtered(qa_rows):
    scorer = MockScorer(ScorerDescriptor.parse("mock:hash"))
    rows = {r.system_id: r for r in per_system_correctness(_records(qa_rows), scorer)}
    assert rows["gamma"].n_answers == 1
    assert rows["gamma"].mean_score == 1.0
    everything = {r.system_id: r for r in per_system_correctness(_records(qa_rows), scorer, correct_only=False)}
    assert everything["gamma"].n_answers == 2


def test_hand_mean():
    rows = [
        {"question": "q1", "gt_answer": "g1", "answers": [{"system": "B", "text": "b1", "human_correct": True}]},
        {"question": "q2", "gt_answer": "g2", "answers": [{"system": "B", "text": "b2", "human_correct": True}]},
    ]
    scorer = _table_scorer([("g1", "b1", 0.8), ("g2", "b2", 0.6)])
    (b,) = per_system_correctness(_records(rows), scorer)
    assert b.mean_score == pytest.approx(0.7, abs=1e-12)
    assert b.n_answers == 2


def test_system_without_qualifying_answers_omitted():
    rows = [
        {
            "question": "q",
            "gt_answer": "g",
            "answers": [
                {"system": "A", "text": "a", "human_correct": True},
                {"system": "Z", "text": "z", "human_correct": False},
            ],
        }
    ]
    result = per_system_correctness(_records(rows), MockScorer(ScorerDescriptor.parse("mock:hash")))
    assert [r.system_id for r in result] == ["A"]


def test_nothing_qualifies():
    rows = [{"question": "q", "gt_answer": "g", "answers": [{"system": "A", "text": "a", "human_correct": False}]}]
    with pytest.raises(CorpusError):
        per_system_correctness(_records(rows), MockScorer(ScorerDescriptor.parse("mock:hash")))


def test_unfairness_hand_case():
    rows = [
        SystemCorrectness(system_id="a", mean_score=0.8, n_answers=1),
        SystemCorrectness(system_id="b", mean_score=0.6, n_answers=1),
    ]
    # (0.8 - 0.6) × 0.1
    assert answer_style_unfairness(rows) == pytest.approx(0.02, abs=1e-12)


def test_unfairness_needs_two_systems():
    with pytest.raises(CorpusError):
        answer_style_unfairness([SystemCorrectness(system_id="a", mean_score=0.8, n_answers=1)])


def test_audit_answers_record(qa_rows):
    report = audit_answers(_records(qa_rows), MockScorer(ScorerDescriptor.parse("mock:hash")))
    record = report.to_record()
    assert [s["system"] for s in record["systems"]] == ["alpha", "beta", "gamma"]
    assert record["unfairness"] >= 0.0
    assert record["correct_only"] is True


def test_bumped_mock_scores_above_one(qa_rows):
    # bump 加在位置 0（original）上，完全相同的答案得 1 + 1
    scorer = MockScorer(ScorerDescriptor.parse("mock:hash+bump=original"))
    report = audit_answers(_records(qa_rows), scorer)
    gamma = {r.system_id: r for r in report.systems}["gamma"]
    assert gamma.mean_score == 2.0
    assert all(r.mean_score > 1.0 for r in report.systems)
