"""Converter registry: composes two converters into a provider-to-provider pipeline."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Optional, Union

from rosetta.converters.base import BaseConverter, StreamPayload
from rosetta.converters.context import ConversionContext, ConversionWarning, MetadataMode, StreamContext
from rosetta.converters.errors import UnknownFormat
from rosetta.ir.types import ProviderFormat

logger = logging.getLogger(__name__)


def as_format(value: Union[str, ProviderFormat]) -> ProviderFormat:
    if isinstance(value, ProviderFormat):
        return value
    try:
        return ProviderFormat(value)
    except ValueError:
        raise UnknownFormat(value) from None


def as_mode(value: Union[str, MetadataMode]) -> MetadataMode:
    return value if isinstance(value, MetadataMode) else MetadataMode(value)


@dataclass(frozen=True)
class Translation:
    body: Any
    warnings: List[ConversionWarning]
    ir: Any = None


class ConverterRegistry:
    def __init__(self, converters: Iterable[BaseConverter] = ()):
        self._converters: Dict[ProviderFormat, BaseConverter] = {}
        for converter in converters:
            self.register(converter)

    def register(self, converter: BaseConverter) -> None:
        self._converters[converter.format] = converter

    def get(self, fmt: Union[str, ProviderFormat]) -> BaseConverter:
        fmt = as_format(fmt)
        if fmt not in self._converters:
            raise UnknownFormat(fmt.value)
        return self._converters[fmt]

    def formats(self) -> List[ProviderFormat]:
        return list(self._converters)

    def context(self, source, target, mode="strip", model_hint: Optional[str] = None) -> ConversionContext:
        return ConversionContext(
            mode=as_mode(mode),
            source_format=as_format(source),
            target_format=as_format(target),
            model_hint=model_hint,
        )

    def to_ir(self, body: Any, source, kind: str = "request", mode="strip",
              model_hint: Optional[str] = None) -> Translation:
        converter = self.get(source)
        ctx = ConversionContext(mode=as_mode(mode), source_format=converter.format, model_hint=model_hint)
        if kind == "request":
            ir = converter.request_from_provider(body, ctx)
        else:
            ir = converter.response_from_provider(body, ctx)
        return Translation(ir, ctx.warnings, ir)

    def from_ir(self, ir: Any, target, kind: str = "request", mode="strip", source=None) -> Translation:
        """IR -> target format. ``source`` names where the IR came from, when known."""
        converter = self.get(target)
        ctx = ConversionContext(
            mode=as_mode(mode),
            source_format=as_format(source) if source is not None else None,
            target_format=converter.format,
        )
        if kind == "request":
            body = converter.request_to_provider(ir, ctx)
        else:
            body = converter.response_to_provider(ir, ctx)
        return Translation(body, ctx.warnings, ir)

    def translate(
        self,
        body: Any,
        source,
        target,
        kind: str = "request",
        mode="strip",
        model_hint: Optional[str] = None,
    ) -> Translation:
        """source format -> IR -> target format; warnings of both legs, in order."""
        source_converter, target_converter = self.get(source), self.get(target)
        ctx = self.context(source, target, mode, model_hint)
        if kind == "request":
            ir = source_converter.request_from_provider(body, ctx)
            out = target_converter.request_to_provider(ir, ctx)
        elif kind == "response":
            ir = source_converter.response_from_provider(body, ctx)
            out = target_converter.response_to_provider(ir, ctx)
        else:
            raise ValueError(f"kind must be request or response, not {kind!r}")
        logger.debug(
            "translated %s %s -> %s with %d warning(s)",
            kind, ctx.source_format.value, ctx.target_format.value, len(ctx.warnings),
        )
        return Translation(out, ctx.warnings, ir)

    def stream_translator(self, source, target, mode="strip", model_hint: Optional[str] = None,
                          **cursor: Any) -> "StreamTranslator":
        return StreamTranslator(self.get(source), self.get(target), as_mode(mode), model_hint, cursor)


@dataclass
class StreamTranslator:
    """Chunk-at-a-time stream relay between two dialects.

    ``feed`` returns the target payloads completed by one source payload, so
    nothing beyond the per-block state in the two contexts is buffered.
    """

    source: BaseConverter
    target: BaseConverter
    mode: MetadataMode = MetadataMode.STRIP
    model_hint: Optional[str] = None
    cursor: Dict[str, Any] = field(default_factory=dict)
    inbound: StreamContext = field(init=False)
    outbound: StreamContext = field(init=False)
    events: int = 0

    def __post_init__(self):
        self.inbound = StreamContext(
            mode=self.mode, source_format=self.source.format, target_format=self.target.format,
            model_hint=self.model_hint, provider_cursor=dict(self.cursor),
        )
        self.outbound = StreamContext(
            mode=self.mode, source_format=self.source.format, target_format=self.target.format,
            model_hint=self.model_hint, provider_cursor=dict(self.cursor),
        )

    @property
    def warnings(self) -> List[ConversionWarning]:
        return self.inbound.warnings + self.outbound.warnings

    @property
    def finished(self) -> bool:
        return self.inbound.ended

    def _relay(self, events: List[Any]) -> List[StreamPayload]:
        self.events += len(events)
        out: List[StreamPayload] = []
        for event in events:
            out.extend(self.target.stream_event_to_provider(event, self.outbound))
        return out

    def feed(self, payload: StreamPayload) -> List[StreamPayload]:
        return self._relay(self.source.stream_chunk_from_provider(payload, self.inbound))

    def close(self) -> List[StreamPayload]:
        return self._relay(self.source.stream_close_from_provider(self.inbound))

    def fail(self, message: str) -> List[StreamPayload]:
        """End the client stream after an upstream failure."""
        return self.target.stream_error_to_provider(message, self.outbound)

    def run(self, payloads: Iterable[StreamPayload]) -> Iterator[StreamPayload]:
        for payload in payloads:
            yield from self.feed(payload)
            if self.finished:
                break
        yield from self.close()


def default_registry() -> ConverterRegistry:
    from rosetta.providers import all_converters

    return ConverterRegistry(all_converters())


__all__ = [
    "ConverterRegistry",
    "StreamTranslator",
    "Translation",
    "as_format",
    "as_mode",
    "default_registry",
]
