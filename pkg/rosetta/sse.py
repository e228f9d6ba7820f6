"""Server-Sent Events framing for the three provider dialects.

* ``openai``: ``data: <json>`` frames closed by ``data: [DONE]``.
* ``anthropic``: ``event: <name>`` + ``data: <json>`` frames, no sentinel.
  OpenAI Responses streams use the same named-event framing.
* ``google``: ``data: <json>`` frames, no sentinel.

The parser accepts LF, CRLF and CR line endings, strips a leading BOM and
is insensitive to how the byte stream is chunked. The serializer always
writes LF.
"""

from __future__ import annotations

import codecs
import json
from dataclasses import dataclass
from typing import Any, Iterable, Iterator, List, Literal, Optional

from rosetta.converters.errors import EncodingError, MalformedInput, MissingEventName


Dialect = Literal["openai", "anthropic", "google"]
DIALECTS = ("openai", "anthropic", "google")
DONE = "[DONE]"


@dataclass(frozen=True)
class SseFrame:
    data: str
    event_name: Optional[str] = None


class SseParser:
    """Incremental parser; ``feed`` returns the frames completed by a chunk."""

    def __init__(self):
        self._decoder = codecs.getincrementaldecoder("utf-8")("strict")
        self._buffer = ""
        self._started = False
        self._event: Optional[str] = None
        self._data: List[str] = []
        self.comments = 0
        self.ignored = 0

    def feed(self, chunk: bytes) -> List[SseFrame]:
        try:
            text = self._decoder.decode(chunk)
        except UnicodeDecodeError as e:
            raise EncodingError(f"invalid UTF-8 in event stream: {e.reason}") from None
        return self._consume(text)

    def close(self) -> List[SseFrame]:
        """Flush at end of stream; a frame missing its blank line is still dispatched."""
        try:
            text = self._decoder.decode(b"", final=True)
        except UnicodeDecodeError as e:
            raise EncodingError(f"truncated UTF-8 at end of event stream: {e.reason}") from None
        frames = self._consume(text)
        if self._buffer:
            self._line(self._buffer.rstrip("\r"), frames)
            self._buffer = ""
        self._dispatch(frames)
        return frames

    def _consume(self, text: str) -> List[SseFrame]:
        if not self._started and text:
            self._started = True
            text = text.lstrip("\ufeff")
        self._buffer += text
        frames: List[SseFrame] = []
        start = 0
        buffer = self._buffer
        while True:
            cr, lf = buffer.find("\r", start), buffer.find("\n", start)
            if cr < 0 and lf < 0:
                break
            end = lf if cr < 0 or (0 <= lf < cr) else cr
            if buffer[end] == "\r":
                if end + 1 == len(buffer):
                    # a CR at the end may be the first half of CRLF
                    break
                step = 2 if buffer[end + 1] == "\n" else 1
            else:
                step = 1
            self._line(buffer[start:end], frames)
            start = end + step
        self._buffer = buffer[start:]
        return frames

    def _line(self, line: str, frames: List[SseFrame]) -> None:
        if line == "":
            self._dispatch(frames)
            return
        if line.startswith(":"):
            self.comments += 1
            return
        name, _, value = line.partition(":")
        if value.startswith(" "):
            value = value[1:]
        if name == "data":
            self._data.append(value)
        elif name == "event":
            self._event = value
        else:
            self.ignored += 1

    def _dispatch(self, frames: List[SseFrame]) -> None:
        if self._data:
            frames.append(SseFrame("\n".join(self._data), self._event))
        self._event, self._data = None, []


def parse(chunks: Iterable[bytes]) -> Iterator[SseFrame]:
    parser = SseParser()
    for chunk in chunks:
        yield from parser.feed(chunk)
    yield from parser.close()


def parse_bytes(raw: bytes) -> List[SseFrame]:
    return list(parse([raw]))


def serialize(frame: SseFrame, dialect: Dialect) -> bytes:
    if dialect not in DIALECTS:
        raise ValueError(f"unknown SSE dialect {dialect!r}")
    lines = []
    if dialect == "anthropic":
        if not frame.event_name:
            raise MissingEventName("named-event frames need an event name")
        lines.append(f"event: {frame.event_name}")
    lines.extend(f"data: {line}" for line in frame.data.split("\n"))
    return ("\n".join(lines) + "\n\n").encode("utf-8")


def close(dialect: Dialect) -> bytes:
    """Bytes that terminate a stream in ``dialect``."""
    return serialize(SseFrame(DONE), "openai") if dialect == "openai" else b""


def encode_payload(payload: Any, dialect: Dialect) -> bytes:
    """One payload as a frame; named-event frames take the name from ``type``.

    The ``[DONE]`` sentinel is written verbatim.
    """
    if payload == DONE:
        return serialize(SseFrame(DONE), "openai")
    name = payload.get("type") if dialect == "anthropic" and isinstance(payload, dict) else None
    data = json.dumps(payload, ensure_ascii=False, separators=(",", ":"))
    return serialize(SseFrame(data, name), dialect)


def frame_payload(frame: SseFrame, ordinal: Optional[int] = None) -> Any:
    """JSON payload of a frame; the ``[DONE]`` sentinel comes back as the string itself."""
    if frame.data.strip() == DONE:
        return DONE
    try:
        return json.loads(frame.data)
    except ValueError:
        path = f"$[{ordinal}]" if ordinal is not None else "$"
        raise MalformedInput("event data is not valid JSON", path) from None


def payloads(frames: Iterable[SseFrame]) -> Iterator[Any]:
    for ordinal, frame in enumerate(frames):
        yield frame_payload(frame, ordinal)


def encode_stream(items: Iterable[Any], dialect: Dialect) -> bytes:
    """Frames for converter output; Chat output already ends with its sentinel."""
    return b"".join(encode_payload(item, dialect) for item in items)


__all__ = [
    "DIALECTS",
    "DONE",
    "SseFrame",
    "SseParser",
    "close",
    "encode_payload",
    "encode_stream",
    "frame_payload",
    "parse",
    "parse_bytes",
    "payloads",
    "serialize",
]
