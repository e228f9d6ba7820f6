#!/usr/bin/env python3
"""
SSE framing: parsing across arbitrary chunk boundaries and dialect serialization
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rosetta import sse
from rosetta.converters.errors import EncodingError, MalformedInput, MissingEventName
from rosetta.sse import DONE, SseFrame, SseParser

CHAT_STREAM = (
    b'data: {"id":"c1","choices":[{"index":0,"delta":{"content":"h\xc3\xa9llo "}}]}\n\n'
    b": keep-alive\n\n"
    b'data: {"id":"c1","choices":[{"index":0,"delta":{"content":"\xe2\x9c\x93"}}]}\n\n'
    b"data: [DONE]\n\n"
)
NAMED_STREAM = (
    b"event: message_start\n"
    b'data: {"type":"message_start"}\n\n'
    b"event: ping\n"
    b'data: {"type":"ping"}\n\n'
)


def split(raw, cuts):
    points = sorted({0, len(raw), *cuts})
    return [raw[a:b] for a, b in zip(points, points[1:])]


def test_chat_stream():
    frames = sse.parse_bytes(CHAT_STREAM)
    assert len(frames) == 3
    items = list(sse.payloads(frames))
    assert items[0]["choices"][0]["delta"]["content"] == "héllo "
    assert items[1]["choices"][0]["delta"]["content"] == "✓"
    assert items[-1] == DONE


def test_named_events():
    frames = sse.parse_bytes(NAMED_STREAM)
    assert [frame.event_name for frame in frames] == ["message_start", "ping"]
    assert frames[0].data == '{"type":"message_start"}'


def test_comments_and_unknown_fields():
    parser = SseParser()
    frames = parser.feed(b": hello\nid: 7\nretry: 100\ndata: {}\n\n")
    frames += parser.close()
    assert frames == [SseFrame("{}")]
    assert parser.comments == 1
    assert parser.ignored == 2


@pytest.mark.parametrize("newline", [b"\r\n", b"\r"])
def test_other_line_endings(newline):
    raw = NAMED_STREAM.replace(b"\n", newline)
    assert sse.parse_bytes(raw) == sse.parse_bytes(NAMED_STREAM)


def test_bom_is_stripped():
    assert sse.parse_bytes(b"\xef\xbb\xbf" + NAMED_STREAM) == sse.parse_bytes(NAMED_STREAM)


def test_multi_line_data_is_joined():
    assert sse.parse_bytes(b"data: a\ndata: b\n\n") == [SseFrame("a\nb")]


def test_space_after_colon_is_optional():
    assert sse.parse_bytes(b"data:{}\n\n") == [SseFrame("{}")]


def test_unterminated_frame_flushed_on_close():
    assert sse.parse_bytes(b'data: {"a":1}') == [SseFrame('{"a":1}')]


def test_event_without_data_is_dropped():
    assert sse.parse_bytes(b"event: ping\n\n") == []


@given(st.lists(st.integers(min_value=0, max_value=len(CHAT_STREAM)), max_size=20))
def test_chunking_does_not_matter(cuts):
    assert list(sse.parse(split(CHAT_STREAM, cuts))) == sse.parse_bytes(CHAT_STREAM)


@given(st.lists(st.integers(min_value=0, max_value=len(NAMED_STREAM) * 2), max_size=20))
def test_crlf_chunking_does_not_matter(cuts):
    raw = NAMED_STREAM.replace(b"\n", b"\r\n")
    assert list(sse.parse(split(raw, cuts))) == sse.parse_bytes(NAMED_STREAM)


def test_invalid_utf8():
    with pytest.raises(EncodingError):
        sse.parse_bytes(b"data: \xff\n\n")


def test_truncated_utf8_at_end():
    parser = SseParser()
    parser.feed(b"data: \xe2\x9c")
    with pytest.raises(EncodingError):
        parser.close()


def test_invalid_json_reports_frame():
    frames = [SseFrame("{}"), SseFrame("{nope")]
    with pytest.raises(MalformedInput) as e:
        list(sse.payloads(frames))
    assert e.value.json_path == "$[1]"


class TestSerialize:
    def test_openai(self):
        assert sse.serialize(SseFrame("{}"), "openai") == b"data: {}\n\n"

    def test_named_event(self):
        assert sse.serialize(SseFrame("{}", "ping"), "anthropic") == b"event: ping\ndata: {}\n\n"

    def test_named_event_requires_name(self):
        with pytest.raises(MissingEventName):
            sse.serialize(SseFrame("{}"), "anthropic")

    def test_unknown_dialect(self):
        with pytest.raises(ValueError):
            sse.serialize(SseFrame("{}"), "websocket")

    def test_multi_line_data_parses_back(self):
        frame = SseFrame("line one\nline two", "note")
        assert sse.parse_bytes(sse.serialize(frame, "anthropic")) == [frame]

    def test_closing_bytes(self):
        assert sse.close("openai") == b"data: [DONE]\n\n"
        assert sse.close("anthropic") == b""
        assert sse.close("google") == b""

    def test_payload_names_come_from_type(self):
        raw = sse.encode_payload({"type": "content_block_stop", "index": 0}, "anthropic")
        assert raw == b'event: content_block_stop\ndata: {"type":"content_block_stop","index":0}\n\n'

    def test_google_payloads_are_unnamed(self):
        assert sse.encode_payload({"type": "x"}, "google") == b'data: {"type":"x"}\n\n'

    def test_sentinel_written_verbatim(self):
        assert sse.encode_payload(DONE, "openai") == b"data: [DONE]\n\n"

    def test_non_ascii_kept(self):
        raw = sse.encode_stream([{"text": "мир"}], "google")
        assert list(sse.payloads(sse.parse_bytes(raw))) == [{"text": "мир"}]
