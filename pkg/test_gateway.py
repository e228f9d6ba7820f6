#!/usr/bin/env python3
"""
Gateway tests against a stub Anthropic upstream
"""

import json

import pytest
import pytest_asyncio
from aiohttp import web
from aiohttp.test_utils import TestClient, TestServer

from rosetta import sse
from rosetta.config.defaults import WARNINGS_HEADER
from rosetta.converters.context import StreamContext
from rosetta.converters.registry import default_registry
from rosetta.corpus import entry, traces
from rosetta.gateway import create_app
from rosetta.gateway.config import config_from_dict
from rosetta.ir.events import reassembled_text
from rosetta.ir.types import ProviderFormat

CLAUDE = "claude-sonnet-4-20250514"


def anthropic_trace(name):
    [trace] = [t for t in traces(ProviderFormat.ANTHROPIC) if t.name == name]
    return trace


class StubUpstream:
    """Anthropic Messages endpoint that records what it was sent"""

    def __init__(self):
        self.requests = []
        self.status = 200
        self.json_body = entry("anthropic/full/text_response").load()
        self.stream_body = anthropic_trace("simple_text").body()
        self.base_url = ""

    async def messages(self, request):
        body = await request.json()
        self.requests.append((request.headers.copy(), body))
        if self.status >= 400:
            error = {"type": "error", "error": {"type": "overloaded_error", "message": "Overloaded"}}
            return web.json_response(error, status=self.status)
        if body.get("stream"):
            return web.Response(body=self.stream_body, content_type="text/event-stream")
        return web.json_response(self.json_body)

    def app(self):
        app = web.Application()
        app.router.add_post("/v1/messages", self.messages)
        return app

    @property
    def last(self):
        return self.requests[-1]


@pytest_asyncio.fixture
async def stub():
    upstream = StubUpstream()
    server = TestServer(upstream.app())
    await server.start_server()
    upstream.base_url = f"http://{server.host}:{server.port}"
    yield upstream
    await server.close()


@pytest_asyncio.fixture
async def make_client(stub, monkeypatch):
    monkeypatch.setenv("ROSETTA_TEST_ANTHROPIC_KEY", "secret")
    clients = []

    async def make(**settings):
        route = {"upstream_format": "anthropic", "upstream_base_url": stub.base_url,
                 "api_key_env": "ROSETTA_TEST_ANTHROPIC_KEY"}
        data = {
            "routes": [
                {**route, "client_format": "openai_chat", "model_aliases": {"gpt-4o": CLAUDE}},
                {**route, "client_format": "google", "model_aliases": {"gemini-2.0-flash": CLAUDE}},
                {**route, "client_format": "auto", "path_prefix": "/any"},
            ],
            **settings,
        }
        client = TestClient(TestServer(create_app(config_from_dict(data, environ={}))))
        await client.start_server()
        clients.append(client)
        return client

    yield make
    for client in clients:
        await client.close()


def decode(fmt, raw):
    ctx = StreamContext(source_format=ProviderFormat(fmt))
    converter = default_registry().get(fmt)
    return list(converter.stream_response_from_provider(sse.payloads(sse.parse_bytes(raw)), ctx))


@pytest.mark.asyncio
async def test_health(make_client):
    client = await make_client()
    response = await client.get("/health")
    assert response.status == 200
    body = await response.json()
    assert body["ok"] is True
    assert body["routes"] == ["/v1/chat/completions", "/v1beta/models", "/any"]


@pytest.mark.asyncio
async def test_chat_client_to_anthropic(make_client, stub):
    client = await make_client()
    response = await client.post("/v1/chat/completions", json=entry("openai_chat/content/text_string").load())
    assert response.status == 200
    body = await response.json()
    assert body["choices"][0]["message"]["content"] == "Hello! How can I help?"
    assert body["choices"][0]["finish_reason"] == "stop"
    assert int(response.headers[WARNINGS_HEADER]) >= 1

    headers, sent = stub.last
    assert sent["model"] == CLAUDE
    assert sent["messages"] == [{"role": "user", "content": "Hello!"}]
    assert "stream" not in sent
    assert headers["x-api-key"] == "secret"
    assert headers["anthropic-version"] == "2023-06-01"


@pytest.mark.asyncio
async def test_google_client_takes_model_from_path(make_client, stub):
    client = await make_client()
    response = await client.post("/v1beta/models/gemini-2.0-flash:generateContent",
                                 json=entry("google/content/text").load())
    assert response.status == 200
    body = await response.json()
    assert body["candidates"][0]["content"]["parts"] == [{"text": "Hello! How can I help?"}]
    assert stub.last[1]["model"] == CLAUDE


@pytest.mark.asyncio
async def test_auto_route_detects_format(make_client, stub):
    client = await make_client()
    response = await client.post("/any", json=entry("openai_responses/content/input_string").load())
    assert response.status == 200
    body = await response.json()
    assert body["object"] == "response"
    assert stub.last[1]["messages"][0]["role"] == "user"


@pytest.mark.asyncio
async def test_invalid_json(make_client):
    client = await make_client()
    response = await client.post("/v1/chat/completions", data=b"{not json",
                                 headers={"Content-Type": "application/json"})
    assert response.status == 400
    assert (await response.json())["error"] == "malformed_input"


@pytest.mark.asyncio
async def test_conversion_error_carries_path(make_client):
    client = await make_client()
    response = await client.post("/any", json={"contents": [{"role": "user", "parts": [{"text": "hi"}]}]})
    assert response.status == 400
    body = await response.json()
    assert body["error"] == "malformed_input"
    assert body["json_path"] == "$.model"


@pytest.mark.asyncio
async def test_undetectable_body(make_client):
    client = await make_client()
    response = await client.post("/any", json={"prompt": "hi"})
    assert response.status == 422
    assert (await response.json())["error"] == "unknown_format"


@pytest.mark.asyncio
async def test_body_too_large(make_client):
    client = await make_client(max_request_bytes=64)
    payload = {"model": "gpt-4o", "messages": [{"role": "user", "content": "x" * 200}]}
    response = await client.post("/v1/chat/completions", json=payload)
    assert response.status == 413
    assert (await response.json())["error"] == "request_too_large"


@pytest.mark.asyncio
async def test_upstream_error_status(make_client, stub):
    stub.status = 529
    client = await make_client()
    response = await client.post("/v1/chat/completions", json=entry("openai_chat/content/text_string").load())
    assert response.status == 502
    body = await response.json()
    assert body["upstream_status"] == 529
    assert body["upstream_body"]["error"]["type"] == "overloaded_error"


@pytest.mark.asyncio
async def test_untranslatable_upstream_answer(make_client, stub):
    stub.json_body = {"unexpected": True}
    client = await make_client()
    response = await client.post("/v1/chat/completions", json=entry("openai_chat/content/text_string").load())
    assert response.status == 502
    assert "could not be translated" in (await response.json())["message"]


class TestStreaming:
    @pytest.mark.asyncio
    async def test_chat_stream_relay(self, make_client, stub):
        client = await make_client()
        body = {**entry("openai_chat/content/text_string").load(), "stream": True}
        response = await client.post("/v1/chat/completions", json=body)
        assert response.status == 200
        assert response.headers["Content-Type"].startswith("text/event-stream")
        raw = await response.read()
        assert raw.endswith(b"data: [DONE]\n\n")
        assert reassembled_text(decode("openai_chat", raw)) == "Hello!"
        assert stub.last[1]["stream"] is True

    @pytest.mark.asyncio
    async def test_google_stream_relay(self, make_client, stub):
        client = await make_client()
        response = await client.post("/v1beta/models/gemini-2.0-flash:streamGenerateContent?alt=sse",
                                     json=entry("google/content/text").load())
        assert response.status == 200
        raw = await response.read()
        assert reassembled_text(decode("google", raw)) == "Hello!"
        assert stub.last[1]["stream"] is True

    @pytest.mark.asyncio
    async def test_tool_stream_relay(self, make_client, stub):
        stub.stream_body = anthropic_trace("tool_use").body()
        client = await make_client()
        body = {**entry("openai_chat/content/text_string").load(), "stream": True}
        response = await client.post("/v1/chat/completions", json=body)
        items = list(sse.payloads(sse.parse_bytes(await response.read())))
        calls = [item["choices"][0]["delta"]["tool_calls"][0] for item in items[:-1]
                 if item.get("choices") and "tool_calls" in item["choices"][0]["delta"]]
        assert calls[0]["function"]["name"] == "get_weather"
        assert json.loads("".join(call["function"]["arguments"] for call in calls)) == {"city": "Paris"}

    @pytest.mark.asyncio
    async def test_broken_upstream_stream_ends_cleanly(self, make_client, stub):
        start = sse.encode_payload(anthropic_trace("simple_text").payloads[0], "anthropic")
        broken = sse.encode_payload({"type": "content_block_delta", "index": 5,
                                     "delta": {"type": "text_delta", "text": "x"}}, "anthropic")
        stub.stream_body = start + broken
        client = await make_client()
        body = {**entry("openai_chat/content/text_string").load(), "stream": True}
        response = await client.post("/v1/chat/completions", json=body)
        assert response.status == 200
        items = list(sse.payloads(sse.parse_bytes(await response.read())))
        assert items[-1] == sse.DONE
        assert "never started" in items[-2]["error"]["message"]

    @pytest.mark.asyncio
    async def test_upstream_error_before_stream(self, make_client, stub):
        stub.status = 500
        client = await make_client()
        body = {**entry("openai_chat/content/text_string").load(), "stream": True}
        response = await client.post("/v1/chat/completions", json=body)
        assert response.status == 502
        assert (await response.json())["upstream_status"] == 500
