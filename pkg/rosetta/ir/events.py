"""Stream event grammar checker and stream reassembly.

A well-formed stream starts with ``stream_start`` and ends with
``stream_end``. Blocks open and close in pairs, deltas sit inside their own
block and match its kind, block indices never go backwards, and ``finish`` is
never reported while a block is open. A tool_call block begins with its
``tool_call_start`` and its argument fragments join into a JSON object. An
empty sequence is not a stream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional

from rosetta.ir.types import (
    AssistantMessage,
    ChoiceInfo,
    ContentBlockEndEvent,
    ContentBlockStartEvent,
    FinishEvent,
    IRResponse,
    ReasoningDeltaEvent,
    ReasoningPart,
    StreamEndEvent,
    StreamStartEvent,
    TextDeltaEvent,
    TextPart,
    ToolCallDeltaEvent,
    ToolCallPart,
    ToolCallStartEvent,
    UsageEvent,
)


class GrammarError(str, Enum):
    MISSING_START = "missing_start"
    DUPLICATE_START = "duplicate_start"
    EVENT_AFTER_END = "event_after_end"
    MISSING_END = "missing_end"
    BLOCK_REOPENED = "block_reopened"
    BLOCK_NOT_OPEN = "block_not_open"
    BLOCK_UNCLOSED = "block_unclosed"
    DELTA_OUTSIDE_BLOCK = "delta_outside_block"
    DELTA_KIND_MISMATCH = "delta_kind_mismatch"
    INDEX_DECREASED = "index_decreased"
    FINISH_INSIDE_BLOCK = "finish_inside_block"
    DUPLICATE_FINISH = "duplicate_finish"
    INVALID_TOOL_ARGUMENTS = "invalid_tool_arguments"
    MISSING_TOOL_CALL_START = "missing_tool_call_start"


@dataclass(frozen=True)
class GrammarViolation:
    code: GrammarError
    position: int
    message: str


_DELTA_KINDS = {
    "text_delta": "text",
    "reasoning_delta": "reasoning",
    "tool_call_start": "tool_call",
    "tool_call_delta": "tool_call",
}


def _arguments_ok(buffer: str) -> bool:
    if buffer == "":
        return True
    try:
        return isinstance(json.loads(buffer), dict)
    except ValueError:
        return False


def check_event_grammar(events: Iterable) -> List[GrammarViolation]:
    """Return every grammar violation found in ``events`` (empty when valid)."""
    found: List[GrammarViolation] = []
    started = ended = finished = False
    open_blocks: Dict[int, str] = {}
    seen_blocks: set = set()
    buffers: Dict[int, str] = {}
    tool_started: set = set()
    last_index = -1
    position = -1

    def flag(code: GrammarError, message: str) -> None:
        found.append(GrammarViolation(code, position, message))

    for position, event in enumerate(events):
        kind = event.type
        if ended:
            flag(GrammarError.EVENT_AFTER_END, f"{kind} after stream_end")
        if kind == "stream_start":
            if started:
                flag(GrammarError.DUPLICATE_START, "stream_start repeated")
            elif position != 0:
                flag(GrammarError.MISSING_START, "stream_start is not the first event")
            started = True
            continue
        if not started and position == 0:
            flag(GrammarError.MISSING_START, f"stream begins with {kind}")
            started = True

        index = getattr(event, "block_index", None)
        if index is not None:
            if index < last_index:
                flag(GrammarError.INDEX_DECREASED, f"block index {index} after {last_index}")
            last_index = max(last_index, index)

        if kind == "content_block_start":
            if index in seen_blocks:
                flag(GrammarError.BLOCK_REOPENED, f"block {index} opened twice")
            seen_blocks.add(index)
            open_blocks[index] = event.block_kind
            buffers[index] = ""
        elif kind == "content_block_end":
            if index not in open_blocks:
                flag(GrammarError.BLOCK_NOT_OPEN, f"block {index} closed but not open")
                continue
            if open_blocks[index] == "tool_call" and index not in tool_started:
                flag(GrammarError.MISSING_TOOL_CALL_START, f"tool_call block {index} closed without tool_call_start")
            if open_blocks.pop(index) == "tool_call" and not _arguments_ok(buffers.get(index, "")):
                flag(GrammarError.INVALID_TOOL_ARGUMENTS, f"block {index} arguments do not parse as an object")
        elif kind in _DELTA_KINDS:
            if index not in open_blocks:
                flag(GrammarError.DELTA_OUTSIDE_BLOCK, f"{kind} for block {index} outside its block")
                continue
            if open_blocks[index] != _DELTA_KINDS[kind]:
                flag(GrammarError.DELTA_KIND_MISMATCH, f"{kind} inside a {open_blocks[index]} block")
            elif kind == "tool_call_start":
                tool_started.add(index)
            elif kind == "tool_call_delta" and index not in tool_started:
                flag(GrammarError.MISSING_TOOL_CALL_START, f"tool_call_delta for block {index} before tool_call_start")
                tool_started.add(index)
            if kind == "tool_call_delta":
                buffers[index] = buffers.get(index, "") + event.arguments_fragment
        elif kind == "finish":
            if finished:
                flag(GrammarError.DUPLICATE_FINISH, "finish reported twice")
            if open_blocks:
                flag(GrammarError.FINISH_INSIDE_BLOCK, f"finish while blocks {sorted(open_blocks)} are open")
            finished = True
        elif kind == "stream_end":
            if open_blocks:
                flag(GrammarError.BLOCK_UNCLOSED, f"blocks {sorted(open_blocks)} still open at stream_end")
            ended = True

    if position < 0:
        position = 0
        flag(GrammarError.MISSING_START, "no events")
        flag(GrammarError.MISSING_END, "no events")
    elif not ended:
        position += 1
        flag(GrammarError.MISSING_END, "stream has no stream_end")
    return found


def is_grammar_valid(events: Iterable) -> bool:
    return not check_event_grammar(events)


# ═══════════════════════════════════════════════════════════════════════════
# REASSEMBLY
# ═══════════════════════════════════════════════════════════════════════════

def reassemble(events: Iterable) -> IRResponse:
    """Fold a grammar-valid event sequence into the response it describes."""
    response_id, model, created = "", "", 0
    parts: List[object] = []
    blocks: Dict[int, Dict[str, object]] = {}
    order: List[int] = []
    finish_reason: Optional[str] = None
    usage = None

    for event in events:
        if isinstance(event, StreamStartEvent):
            response_id, model, created = event.response_id, event.model, event.created
        elif isinstance(event, ContentBlockStartEvent):
            blocks[event.block_index] = {"kind": event.block_kind, "text": "", "args": ""}
            order.append(event.block_index)
        elif isinstance(event, ToolCallStartEvent):
            blocks[event.block_index].update(id=event.tool_call_id, name=event.tool_name)
        elif isinstance(event, (TextDeltaEvent, ReasoningDeltaEvent)):
            blocks[event.block_index]["text"] += event.text
        elif isinstance(event, ToolCallDeltaEvent):
            blocks[event.block_index]["args"] += event.arguments_fragment
        elif isinstance(event, ContentBlockEndEvent):
            pass
        elif isinstance(event, FinishEvent):
            finish_reason = event.finish_reason
        elif isinstance(event, UsageEvent):
            usage = event.usage
        elif isinstance(event, StreamEndEvent):
            break

    for index in order:
        block = blocks[index]
        if block["kind"] == "text":
            parts.append(TextPart(text=block["text"]))
        elif block["kind"] == "reasoning":
            parts.append(ReasoningPart(text=block["text"]))
        else:
            parts.append(ToolCallPart(
                tool_call_id=block.get("id", ""),
                tool_name=block.get("name", ""),
                tool_input=json.loads(block["args"]) if block["args"] else {},
            ))

    return IRResponse(
        id=response_id,
        created=created,
        model=model,
        choices=[ChoiceInfo(
            index=0,
            message=AssistantMessage(content=parts),
            finish_reason=finish_reason or "other",
        )],
        usage=usage,
    )


def reassembled_text(events: Iterable) -> str:
    """Concatenated text of all text deltas; the cross-dialect comparison key."""
    return "".join(event.text for event in events if isinstance(event, TextDeltaEvent))


__all__ = [
    "GrammarError",
    "GrammarViolation",
    "check_event_grammar",
    "is_grammar_valid",
    "reassemble",
    "reassembled_text",
]
