# -*- coding: utf-8 -*-
"""
真实嵌入端点冒烟测试

需要设置 STYLE_AUDIT_LIVE_BASE_URL 与 STYLE_AUDIT_LIVE_MODEL，否则跳过。
"""

import os
import time

import pytest

from style_audit.clients.cache import DiskCache
from style_audit.models.scorer import ScorerDescriptor
from style_audit.services.rankeval import audit_query_styles
from style_audit.services.reporting import matrix_frame, render_csv
from style_audit.services.scorers import build_scorer
from tests.conftest import make_group

BASE_URL = os.getenv("STYLE_AUDIT_LIVE_BASE_URL")
MODEL = os.getenv("STYLE_AUDIT_LIVE_MODEL")

pytestmark = pytest.mark.skipif(
    not (BASE_URL and MODEL), reason="未配置 STYLE_AUDIT_LIVE_BASE_URL / STYLE_AUDIT_LIVE_MODEL"
)


def _sweep(cache_dir):
    descriptor = ScorerDescriptor.parse(f"embedding:{MODEL}@{BASE_URL}")
    scorer = build_scorer(descriptor, DiskCache(cache_dir), parallelism=4)
    groups = [make_group(f"live{i}") for i in range(50)]
    return render_csv(matrix_frame([audit_query_styles(groups, scorer, parallelism=4)]))


def test_query_sweep_cold_then_warm(tmp_path):
    start = time.perf_counter()
    cold = _sweep(tmp_path)
    assert time.perf_counter() - start < 300

    start = time.perf_counter()
    warm = _sweep(tmp_path)
    assert time.perf_counter() - start < 10
    assert warm == cold
