# -*- coding: utf-8 -*-
"""
HTTP 客户端：请求格式、重试与错误映射（httpx.MockTransport，不发真实请求）
"""

import json

import httpx
import pytest

from style_audit.clients.chat import ChatClient
from style_audit.clients.embedding import EmbeddingClient
from style_audit.errors import EndpointError

# 让 SDK 的重试几乎不等待
FAST_RETRY = {"retry-after-ms": "1"}


class Recorder:
    """按顺序返回预置响应，记录请求"""

    def __init__(self, responses):
        self.responses = list(responses)
        self.requests = []

    def __call__(self, request: httpx.Request) -> httpx.Response:
        self.requests.append(request)
        item = self.responses.pop(0)
        if isinstance(item, Exception):
            raise item
        return item

    def http_client(self) -> httpx.Client:
        return httpx.Client(transport=httpx.MockTransport(self))


def _reply(content):
    return httpx.Response(200, json={"choices": [{"index": 0, "message": {"role": "assistant", "content": content}}]})


def _chat(responses, max_retries=0):
    recorder = Recorder(responses)
    client = ChatClient("http://chat/", api_key="secret", max_retries=max_retries, http_client=recorder.http_client())
    return client, recorder


def test_chat_wire_shape():
    client, recorder = _chat([_reply("rewritten")])
    out = client.complete("gpt", [{"role": "user", "content": "hi"}], 0.5)
    assert out == "rewritten"
    req = recorder.requests[0]
    assert str(req.url) == "http://chat/v1/chat/completions"
    assert json.loads(req.content) == {
        "model": "gpt",
        "temperature": 0.5,
        "messages": [{"role": "user", "content": "hi"}],
    }
    assert req.headers["authorization"] == "Bearer secret"


def test_retry_on_transient_status():
    responses = [
        httpx.Response(503, text="busy", headers=FAST_RETRY),
        httpx.Response(429, text="slow down", headers=FAST_RETRY),
        _reply("done"),
    ]
    client, recorder = _chat(responses, max_retries=3)
    assert client.complete("gpt", [], 0.5) == "done"
    assert len(recorder.requests) == 3


def test_connection_error_retried():
    client, recorder = _chat([httpx.ConnectError("reset"), _reply("done")], max_retries=1)
    assert client.complete("gpt", [], 0.5) == "done"
    assert len(recorder.requests) == 2


def test_retries_exhausted():
    client, recorder = _chat([httpx.Response(429, text="slow down", headers=FAST_RETRY) for _ in range(3)], max_retries=2)
    with pytest.raises(EndpointError, match="429"):
        client.complete("gpt", [], 0.5)
    assert len(recorder.requests) == 3


def test_client_error_not_retried():
    client, recorder = _chat([httpx.Response(401, json={"error": {"message": "bad key"}})], max_retries=3)
    with pytest.raises(EndpointError, match="401"):
        client.complete("gpt", [], 0.5)
    assert len(recorder.requests) == 1


@pytest.mark.parametrize(
    "response",
    [
        httpx.Response(200, json={"choices": []}),
        _reply(None),
        httpx.Response(200, text="<html>"),
        httpx.Response(200, content=b"<html>", headers={"content-type": "application/json"}),
    ],
)
def test_unparsable_reply(response):
    client, _ = _chat([response])
    with pytest.raises(EndpointError):
        client.complete("gpt", [], 0.5)


def test_embedding_reorders_by_index():
    payload = {
        "object": "list",
        "model": "m",
        "data": [
            {"object": "embedding", "index": 1, "embedding": [0.0, 1.0]},
            {"object": "embedding", "index": 0, "embedding": [1.0, 0.0]},
        ],
    }
    recorder = Recorder([httpx.Response(200, json=payload)])
    client = EmbeddingClient("http://emb", api_key="", max_retries=0, http_client=recorder.http_client())
    assert client.embed("m", ["a", "b"]) == [[1.0, 0.0], [0.0, 1.0]]
    body = json.loads(recorder.requests[0].content)
    assert str(recorder.requests[0].url) == "http://emb/v1/embeddings"
    assert body == {"model": "m", "input": ["a", "b"], "encoding_format": "float"}


def test_embedding_count_mismatch():
    payload = {"data": [{"object": "embedding", "index": 0, "embedding": [1.0]}]}
    recorder = Recorder([httpx.Response(200, json=payload)])
    client = EmbeddingClient("http://emb", max_retries=0, http_client=recorder.http_client())
    with pytest.raises(EndpointError):
        client.embed("m", ["a", "b"])
