"""Base classes for provider converters.

A converter is assembled from four Ops objects (content, message, tool,
config). Converters and their Ops hold no per-conversion state; everything
mutable lives in the ConversionContext/StreamContext passed in.
"""

from __future__ import annotations

import contextlib
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, Iterator, List, Optional, Type, Union

from pydantic import ValidationError

from rosetta.converters.context import ConversionContext, StreamContext
from rosetta.converters.errors import MalformedInput
from rosetta.converters.metadata import expect_list, expect_object
from rosetta.ir.types import IRRequest, IRResponse, ProviderFormat

# A stream payload is a parsed SSE data object, or the literal "[DONE]" sentinel.
StreamPayload = Union[Dict[str, Any], str]


@contextlib.contextmanager
def malformed_guard(path: str = "$"):
    """Turn IR construction failures caused by bad provider values into MalformedInput."""
    try:
        yield
    except ValidationError as exc:
        first = exc.errors()[0]
        location = ".".join(str(item) for item in first["loc"])
        raise MalformedInput(f"invalid value: {first['msg']} ({location})", path) from exc


class ContentOps(ABC):
    """Content part codecs"""

    def __init__(self, converter: "BaseConverter"):
        self.converter = converter

    @abstractmethod
    def part_to_provider(self, part: Any, ctx: ConversionContext, path: str) -> Optional[Any]:
        """Encode one IR part; None when the target has no place for it"""
        pass

    @abstractmethod
    def part_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> List[Any]:
        """Decode one provider part into zero or more IR parts"""
        pass


class MessageOps(ABC):
    """Message list codecs"""

    def __init__(self, converter: "BaseConverter"):
        self.converter = converter

    @abstractmethod
    def messages_to_provider(self, messages: List[Any], ctx: ConversionContext) -> List[Any]:
        """Encode IR messages as the provider's message array"""
        pass

    @abstractmethod
    def messages_from_provider(self, raw: List[Any], ctx: ConversionContext, path: str) -> List[Any]:
        """Decode the provider's message array"""
        pass


class ToolOps(ABC):
    """Tool definitions, tool choice and tool-call codecs"""

    def __init__(self, converter: "BaseConverter"):
        self.converter = converter

    @abstractmethod
    def tools_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        """Write tools, tool_choice and parallel-call settings into ``out``"""
        pass

    @abstractmethod
    def tools_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> Dict[str, Any]:
        """IRRequest keyword arguments for tools, tool_choice and tool_call_config"""
        pass


class ConfigOps(ABC):
    """Generation, reasoning, response-format and stream settings"""

    def __init__(self, converter: "BaseConverter"):
        self.converter = converter

    @abstractmethod
    def config_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        """Write generation settings into ``out``"""
        pass

    @abstractmethod
    def config_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> Dict[str, Any]:
        """IRRequest keyword arguments for generation, reasoning, response_format and stream"""
        pass


class BaseConverter(ABC):
    """Six entry points plus message-level conveniences for one wire format."""

    format: ProviderFormat
    sse_dialect: str = "openai"
    content_ops_class: Type[ContentOps]
    message_ops_class: Type[MessageOps]
    tool_ops_class: Type[ToolOps]
    config_ops_class: Type[ConfigOps]

    def __init__(self):
        self.content_ops = self.content_ops_class(self)
        self.message_ops = self.message_ops_class(self)
        self.tool_ops = self.tool_ops_class(self)
        self.config_ops = self.config_ops_class(self)

    @property
    def name(self) -> str:
        return self.format.value

    # -- requests / responses -------------------------------------------------

    def request_to_provider(self, request: IRRequest, ctx: ConversionContext) -> Dict[str, Any]:
        return self._request_to_provider(request, ctx)

    def request_from_provider(self, body: Any, ctx: ConversionContext) -> IRRequest:
        body = expect_object(body, "$")
        with malformed_guard():
            return self._request_from_provider(dict(body), ctx)

    def response_to_provider(self, response: IRResponse, ctx: ConversionContext) -> Dict[str, Any]:
        return self._response_to_provider(response, ctx)

    def response_from_provider(self, body: Any, ctx: ConversionContext) -> IRResponse:
        body = expect_object(body, "$")
        with malformed_guard():
            return self._response_from_provider(dict(body), ctx)

    def messages_to_provider(self, messages: List[Any], ctx: ConversionContext) -> List[Any]:
        if not messages:
            raise MalformedInput("at least one message is required", "$")
        return self.message_ops.messages_to_provider(messages, ctx)

    def messages_from_provider(self, raw: Any, ctx: ConversionContext) -> List[Any]:
        raw = expect_list(raw, "$")
        if not raw:
            raise MalformedInput("at least one message is required", "$")
        with malformed_guard():
            return self.message_ops.messages_from_provider(raw, ctx, "$")

    @abstractmethod
    def _request_to_provider(self, request: IRRequest, ctx: ConversionContext) -> Dict[str, Any]:
        pass

    @abstractmethod
    def _request_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRRequest:
        pass

    @abstractmethod
    def _response_to_provider(self, response: IRResponse, ctx: ConversionContext) -> Dict[str, Any]:
        pass

    @abstractmethod
    def _response_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRResponse:
        pass

    # -- streaming --------------------------------------------------------------

    def stream_chunk_from_provider(self, chunk: StreamPayload, ctx: StreamContext) -> List[Any]:
        """Translate one provider payload; returns the IR events it completes."""
        ctx.frame_ordinal += 1
        with malformed_guard(f"$[{ctx.frame_ordinal}]"):
            self._stream_chunk_from_provider(chunk, ctx)
        return ctx.take()

    def stream_close_from_provider(self, ctx: StreamContext) -> List[Any]:
        """Upstream closed the stream; flush whatever is still pending."""
        if not ctx.ended:
            ctx.end_stream()
        return ctx.take()

    def stream_response_from_provider(self, chunks: Iterable[StreamPayload], ctx: StreamContext) -> Iterator[Any]:
        for chunk in chunks:
            yield from self.stream_chunk_from_provider(chunk, ctx)
        yield from self.stream_close_from_provider(ctx)

    def stream_response_to_provider(self, events: Iterable[Any], ctx: StreamContext) -> Iterator[StreamPayload]:
        for event in events:
            yield from self.stream_event_to_provider(event, ctx)

    @abstractmethod
    def _stream_chunk_from_provider(self, chunk: StreamPayload, ctx: StreamContext) -> None:
        pass

    @abstractmethod
    def stream_event_to_provider(self, event: Any, ctx: StreamContext) -> List[StreamPayload]:
        """Encode one IR event as zero or more provider payloads"""
        pass

    @abstractmethod
    def stream_error_to_provider(self, message: str, ctx: StreamContext) -> List[StreamPayload]:
        """Payloads that end a broken stream in this dialect"""
        pass


__all__ = [
    "BaseConverter",
    "ConfigOps",
    "ContentOps",
    "MessageOps",
    "StreamPayload",
    "ToolOps",
    "malformed_guard",
]
