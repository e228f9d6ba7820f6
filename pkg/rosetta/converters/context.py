"""Per-conversion state: metadata mode, warnings, and streaming block bookkeeping."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

from rosetta.converters.errors import ProtocolViolation
from rosetta.ir.types import (
    ContentBlockEndEvent,
    ContentBlockStartEvent,
    FinishEvent,
    ProviderFormat,
    ReasoningDeltaEvent,
    StreamEndEvent,
    StreamStartEvent,
    TextDeltaEvent,
    ToolCallDeltaEvent,
    ToolCallStartEvent,
    UsageEvent,
    UsageInfo,
)

logger = logging.getLogger(__name__)


class MetadataMode(str, Enum):
    STRIP = "strip"
    PRESERVE = "preserve"


class WarningCode(str, Enum):
    DROPPED_PROVIDER_FEATURE = "DROPPED_PROVIDER_FEATURE"
    UNMAPPED_PARAMETER = "UNMAPPED_PARAMETER"
    UNMAPPED_PARAMETER_DEFAULTED = "UNMAPPED_PARAMETER_DEFAULTED"
    DEFERRED_REORDER = "DEFERRED_REORDER"
    FOREIGN_METADATA_IGNORED = "FOREIGN_METADATA_IGNORED"


@dataclass(frozen=True)
class ConversionWarning:
    code: WarningCode
    message: str
    json_path: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        body: Dict[str, Any] = {"code": self.code.value, "message": self.message}
        if self.json_path is not None:
            body["json_path"] = self.json_path
        return body


@dataclass
class ConversionContext:
    """State for exactly one conversion leg. Not shared between conversions."""

    mode: MetadataMode = MetadataMode.STRIP
    source_format: Optional[ProviderFormat] = None
    target_format: Optional[ProviderFormat] = None
    # Google bodies carry the model in the URL; the caller supplies it here.
    model_hint: Optional[str] = None
    warnings: List[ConversionWarning] = field(default_factory=list)
    tool_call_ordinal: int = 0
    _foreign_noted: bool = False

    @property
    def preserve(self) -> bool:
        return self.mode == MetadataMode.PRESERVE

    def warn(self, code: WarningCode, message: str, json_path: Optional[str] = None) -> None:
        warning = ConversionWarning(code, message, json_path)
        self.warnings.append(warning)
        logger.debug("conversion warning %s: %s (%s)", code.value, message, json_path)

    def note_foreign_metadata(self, namespaces: List[str]) -> None:
        if self._foreign_noted:
            return
        self._foreign_noted = True
        self.warn(
            WarningCode.FOREIGN_METADATA_IGNORED,
            f"metadata from {', '.join(sorted(namespaces))} ignored",
        )

    def next_call_id(self) -> str:
        self.tool_call_ordinal += 1
        return f"call_{self.tool_call_ordinal}"


@dataclass
class StreamContext(ConversionContext):
    """Streaming state for one stream direction.

    Lifecycle methods queue events on an outbox; ``take`` hands them over.
    ``close_block`` and ``drain_deferred`` also return the events they queued.
    """

    current_block_index: int = -1
    open_blocks: Dict[int, str] = field(default_factory=dict)
    tool_call_names: Dict[str, str] = field(default_factory=dict)
    block_tool_ids: Dict[int, str] = field(default_factory=dict)
    tool_arg_buffers: Dict[int, str] = field(default_factory=dict)
    deferred_usage: Optional[UsageInfo] = None
    deferred_finish: Optional[str] = None
    deferred_finish_metadata: Optional[Dict[str, Any]] = None
    provider_cursor: Dict[str, Any] = field(default_factory=dict)
    frame_ordinal: int = 0
    response_id: str = ""
    model: str = ""
    started: bool = False
    ended: bool = False
    _drained: bool = False
    _outbox: List[Any] = field(default_factory=list)

    def _violation(self, message: str) -> ProtocolViolation:
        return ProtocolViolation(message, frame_ordinal=self.frame_ordinal)

    def _emit(self, event: Any) -> Any:
        if self.ended:
            raise self._violation(f"{event.type} after stream end")
        self._outbox.append(event)
        return event

    def take(self) -> List[Any]:
        events, self._outbox = self._outbox, []
        return events

    def start_stream(
        self, response_id: str, model: str, created: int = 0, provider_metadata: Optional[Dict[str, Any]] = None
    ) -> None:
        if self.started:
            return
        self.started = True
        self.response_id, self.model = response_id, model
        self._emit(StreamStartEvent(
            response_id=response_id, model=model, created=created, provider_metadata=provider_metadata,
        ))

    def ensure_started(self) -> None:
        if not self.started:
            self.start_stream(self.response_id, self.model or self.model_hint or "")

    def open_block(
        self,
        kind: str,
        tool_call_id: Optional[str] = None,
        tool_name: Optional[str] = None,
        provider_metadata: Optional[Dict[str, Any]] = None,
    ) -> int:
        self.ensure_started()
        self.current_block_index += 1
        index = self.current_block_index
        self.open_blocks[index] = kind
        self._emit(ContentBlockStartEvent(block_index=index, block_kind=kind, provider_metadata=provider_metadata))
        if kind == "tool_call":
            self.tool_arg_buffers[index] = ""
            self.block_tool_ids[index] = tool_call_id or ""
            self.tool_call_names[tool_call_id or ""] = tool_name or ""
            self._emit(ToolCallStartEvent(
                block_index=index, tool_call_id=tool_call_id or "", tool_name=tool_name or "",
            ))
        return index

    def _require_open(self, index: int, kind: str) -> None:
        if index not in self.open_blocks:
            raise self._violation(f"delta for block {index}, which is not open")
        if self.open_blocks[index] != kind:
            raise self._violation(f"{kind} delta for {self.open_blocks[index]} block {index}")

    def emit_text(self, index: int, text: str) -> None:
        self._require_open(index, "text")
        self._emit(TextDeltaEvent(block_index=index, text=text))

    def emit_reasoning(self, index: int, text: str) -> None:
        self._require_open(index, "reasoning")
        self._emit(ReasoningDeltaEvent(block_index=index, text=text))

    def append_tool_args(self, index: int, fragment: str) -> None:
        self._require_open(index, "tool_call")
        self.tool_arg_buffers[index] += fragment
        self._emit(ToolCallDeltaEvent(block_index=index, arguments_fragment=fragment))

    def close_block(self, index: int, provider_metadata: Optional[Dict[str, Any]] = None) -> List[Any]:
        if index not in self.open_blocks:
            raise self._violation(f"close of block {index}, which is not open")
        kind = self.open_blocks.pop(index)
        if kind == "tool_call":
            buffer = self.tool_arg_buffers.pop(index)
            if buffer:
                try:
                    parsed = json.loads(buffer)
                except ValueError:
                    parsed = None
                if not isinstance(parsed, dict):
                    raise self._violation(f"tool arguments of block {index} are not a JSON object")
        event = ContentBlockEndEvent(block_index=index, provider_metadata=provider_metadata)
        self._emit(event)
        return [event]

    def close_all(self) -> List[Any]:
        """Close every open block without checking argument buffers."""
        closed = []
        for index in sorted(self.open_blocks):
            self.open_blocks.pop(index)
            self.tool_arg_buffers.pop(index, None)
            closed.append(self._emit(ContentBlockEndEvent(block_index=index)))
        return closed

    def defer_usage(self, usage: UsageInfo) -> None:
        self.deferred_usage = usage

    def defer_finish(
        self, reason: str, provider_metadata: Optional[Dict[str, Any]] = None, *, warn_if_open: bool = True
    ) -> None:
        if self.open_blocks and warn_if_open:
            self.warn(
                WarningCode.DEFERRED_REORDER,
                f"finish reason {reason!r} arrived while block(s) {sorted(self.open_blocks)} were open",
            )
        self.deferred_finish = reason
        self.deferred_finish_metadata = provider_metadata

    def drain_deferred(self) -> List[Any]:
        """Emit the deferred finish, then usage, at most once per stream."""
        if self._drained or self.open_blocks:
            return []
        emitted = []
        if self.deferred_finish is not None:
            emitted.append(self._emit(FinishEvent(
                finish_reason=self.deferred_finish, provider_metadata=self.deferred_finish_metadata,
            )))
        if self.deferred_usage is not None:
            emitted.append(self._emit(UsageEvent(usage=self.deferred_usage)))
        if emitted:
            self._drained = True
        return emitted

    def end_stream(self) -> None:
        if self.ended:
            return
        self.ensure_started()
        if self.open_blocks:
            for index in sorted(self.open_blocks):
                self.close_block(index)
        self.drain_deferred()
        self._emit(StreamEndEvent())
        self.ended = True


__all__ = [
    "ConversionContext",
    "ConversionWarning",
    "MetadataMode",
    "StreamContext",
    "WarningCode",
]
