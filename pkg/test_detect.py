#!/usr/bin/env python3
"""
Request format detection
"""

import pytest

from rosetta.corpus import corpus
from rosetta.detect import UNKNOWN, detect_format
from rosetta.ir.types import ProviderFormat

USER = {"role": "user", "content": "hi"}


@pytest.mark.parametrize(
    "body, expected, confidence",
    [
        ({"contents": [{"role": "user", "parts": [{"text": "hi"}]}]}, ProviderFormat.GOOGLE, "exact"),
        ({"model": "gpt-4o", "input": "hi"}, ProviderFormat.OPENAI_RESPONSES, "heuristic"),
        ({"input": [{"type": "message", "role": "user", "content": "hi"}]}, ProviderFormat.OPENAI_RESPONSES, "exact"),
        ({"input": [USER]}, ProviderFormat.OPENAI_RESPONSES, "heuristic"),
        ({"system": "be brief", "messages": [USER]}, ProviderFormat.ANTHROPIC, "exact"),
        ({"anthropic_version": "vertex-2023-10-16", "messages": [USER]}, ProviderFormat.ANTHROPIC, "exact"),
        (
            {"messages": [{"role": "user", "content": [{"type": "tool_result", "tool_use_id": "t", "content": "1"}]}]},
            ProviderFormat.ANTHROPIC,
            "exact",
        ),
        ({"model": "gpt-4o", "messages": [USER]}, ProviderFormat.OPENAI_CHAT, "heuristic"),
    ],
)
def test_rules(body, expected, confidence):
    result = detect_format(body)
    assert result.format == expected
    assert result.confidence == confidence
    assert result.known
    assert result.to_dict()["format"] == expected.value


def test_google_wins_over_messages():
    body = {"contents": [{"parts": [{"text": "hi"}]}], "messages": [USER]}
    assert detect_format(body).format == ProviderFormat.GOOGLE


def test_image_url_stays_chat():
    content = [{"type": "image_url", "image_url": {"url": "https://example.com/a.png"}}]
    assert detect_format({"messages": [{"role": "user", "content": content}]}).format == ProviderFormat.OPENAI_CHAT


@pytest.mark.parametrize("body", [None, [], "messages", 3, {}, {"contents": []}, {"prompt": "hi"}])
def test_unknown_never_raises(body):
    result = detect_format(body)
    assert result is UNKNOWN
    assert result.name == "unknown"
    assert not result.known


@pytest.mark.parametrize("fmt", [ProviderFormat.GOOGLE, ProviderFormat.OPENAI_RESPONSES])
def test_corpus_requests_detected(fmt):
    for item in corpus(fmt, kind="request"):
        assert detect_format(item.load()).format == fmt, item.key
