"""Google streamGenerateContent chunks.

Two chunk models are handled, chosen per stream with the
``google_stream_mode`` cursor option:

* ``accumulated`` (default): every chunk repeats the candidate's full parts
  so far. Text is differenced per part position against what was already
  emitted; a chunk that does not extend the previous text is a protocol
  violation.
* ``incremental``: every chunk carries only new parts; a text part continues
  the open block when its kind matches.

functionCall parts arrive whole and become a start, one delta and an end.
A finishReason is deferred and the active block stays open until upstream
closes, so text that trails the finish still lands in that block.
"""

from __future__ import annotations

import copy
import json
from typing import Any, Dict, List, Optional, Tuple

from rosetta.converters.base import StreamPayload
from rosetta.converters.context import StreamContext, WarningCode
from rosetta.converters.errors import ProtocolViolation, UnsupportedConstruct
from rosetta.converters.metadata import expect_object, namespace, pack
from rosetta.providers.common import dump_arguments
from rosetta.providers.google.ops import (
    NS,
    finish_from_provider,
    finish_to_provider,
    timestamp_from_provider,
    usage_from_provider,
    usage_to_provider,
)

ACCUMULATED = "accumulated"
INCREMENTAL = "incremental"


def _mode(ctx: StreamContext) -> str:
    return ctx.provider_cursor.get("google_stream_mode", ACCUMULATED)


def _classify(part: Dict[str, Any]) -> Tuple[Optional[str], Any]:
    if "functionCall" in part:
        return "tool_call", part["functionCall"]
    if "text" in part:
        return ("reasoning" if part.get("thought") else "text"), part["text"]
    return None, None


# ═══════════════════════════════════════════════════════════════════════════
# PROVIDER CHUNKS -> IR EVENTS
# ═══════════════════════════════════════════════════════════════════════════

def _violation(ctx: StreamContext, message: str) -> ProtocolViolation:
    return ProtocolViolation(message, frame_ordinal=ctx.frame_ordinal)


def _close(ctx: StreamContext, index: int) -> None:
    signature = ctx.provider_cursor.setdefault("signatures", {}).pop(index, None)
    metadata = None
    if signature:
        if ctx.preserve:
            metadata = {NS: {"thoughtSignature": signature}}
        else:
            ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, "thought signature dropped", f"$[{ctx.frame_ordinal}]")
    ctx.close_block(index, provider_metadata=metadata)


def _close_active(ctx: StreamContext) -> None:
    active = ctx.provider_cursor.pop("active", None)
    if active is not None and active in ctx.open_blocks:
        _close(ctx, active)


def _open(ctx: StreamContext, kind: str) -> int:
    _close_active(ctx)
    index = ctx.open_block(kind)
    ctx.provider_cursor["active"] = index
    return index


def _emit(ctx: StreamContext, kind: str, index: int, text: str) -> None:
    if text:
        (ctx.emit_text if kind == "text" else ctx.emit_reasoning)(index, text)


def _function_call(ctx: StreamContext, call: Any) -> None:
    call = expect_object(call, f"$[{ctx.frame_ordinal}].functionCall")
    _close_active(ctx)
    ctx.provider_cursor["saw_calls"] = True
    index = ctx.open_block("tool_call", tool_call_id=call.get("id") or ctx.next_call_id(), tool_name=call.get("name"))
    if call.get("args"):
        ctx.append_tool_args(index, dump_arguments(call["args"]))
    _close(ctx, index)


def _skip(ctx: StreamContext, part: Dict[str, Any]) -> None:
    if not ctx.provider_cursor.get("warned_parts"):
        ctx.provider_cursor["warned_parts"] = True
        ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE,
                 f"streamed part with keys {sorted(part)} has no IR mapping", f"$[{ctx.frame_ordinal}]")


def _accumulated(ctx: StreamContext, parts: List[Any]) -> None:
    state: List[Dict[str, Any]] = ctx.provider_cursor.setdefault("parts", [])
    if len(parts) < len(state):
        raise _violation(ctx, f"accumulated chunk has {len(parts)} parts after {len(state)}")
    for position, part in enumerate(parts):
        part = expect_object(part, f"$[{ctx.frame_ordinal}].parts[{position}]")
        kind, value = _classify(part)
        if position < len(state):
            entry = state[position]
            if entry["kind"] != kind:
                raise _violation(ctx, f"part {position} changed from {entry['kind']} to {kind}")
            if kind in ("text", "reasoning"):
                if not value.startswith(entry["text"]):
                    raise _violation(ctx, f"part {position} text does not extend the previous chunk")
                suffix = value[len(entry["text"]):]
                if suffix:
                    if entry["block"] not in ctx.open_blocks:
                        raise _violation(ctx, f"part {position} grew after a later part started")
                    _emit(ctx, kind, entry["block"], suffix)
                    entry["text"] = value
                if part.get("thoughtSignature"):
                    ctx.provider_cursor.setdefault("signatures", {})[entry["block"]] = part["thoughtSignature"]
            continue
        entry = {"kind": kind, "text": "", "block": None}
        state.append(entry)
        if kind is None:
            _skip(ctx, part)
        elif kind == "tool_call":
            _function_call(ctx, value)
        else:
            entry["block"] = _open(ctx, kind)
            entry["text"] = value
            _emit(ctx, kind, entry["block"], value)
            if part.get("thoughtSignature"):
                ctx.provider_cursor.setdefault("signatures", {})[entry["block"]] = part["thoughtSignature"]


def _incremental(ctx: StreamContext, parts: List[Any]) -> None:
    cursor = ctx.provider_cursor
    for position, part in enumerate(parts):
        part = expect_object(part, f"$[{ctx.frame_ordinal}].parts[{position}]")
        kind, value = _classify(part)
        if kind is None:
            _skip(ctx, part)
        elif kind == "tool_call":
            _function_call(ctx, value)
        else:
            active = cursor.get("active")
            if active is None or ctx.open_blocks.get(active) != kind:
                active = _open(ctx, kind)
            _emit(ctx, kind, active, value)
            if part.get("thoughtSignature"):
                cursor.setdefault("signatures", {})[active] = part["thoughtSignature"]


def chunk_from_provider(chunk: StreamPayload, ctx: StreamContext) -> None:
    payload = expect_object(chunk, f"$[{ctx.frame_ordinal}]")
    if "error" in payload:
        error = payload["error"] if isinstance(payload["error"], dict) else {"message": payload["error"]}
        raise _violation(ctx, f"upstream error: {error.get('message')}")
    if not ctx.started:
        ctx.start_stream(
            payload.get("responseId") or "",
            payload.get("modelVersion") or ctx.model_hint or "",
            timestamp_from_provider(payload.get("createTime")),
        )
    candidates = payload.get("candidates") or []
    if len(candidates) > 1 or any(candidate.get("index", 0) != 0 for candidate in candidates):
        raise UnsupportedConstruct("streams with more than one candidate are not supported", "$.candidates")
    cursor = ctx.provider_cursor
    for candidate in candidates:
        parts = (candidate.get("content") or {}).get("parts") or []
        if parts and cursor.get("finish_seen") and not cursor.get("reorder_warned"):
            cursor["reorder_warned"] = True
            ctx.warn(WarningCode.DEFERRED_REORDER,
                     "content arrived after the finish reason", f"$[{ctx.frame_ordinal}].candidates[0].content")
        if _mode(ctx) == INCREMENTAL:
            _incremental(ctx, parts)
        else:
            _accumulated(ctx, parts)
        # The active block stays open: later chunks may still extend it.
        if candidate.get("finishReason") is not None:
            cursor["finish_seen"] = True
            reason, hint = finish_from_provider(candidate["finishReason"], cursor.get("saw_calls", False))
            ctx.defer_finish(reason, pack(ctx, NS, None, hint), warn_if_open=False)
    if payload.get("usageMetadata"):
        ctx.defer_usage(usage_from_provider(payload["usageMetadata"], ctx, "$.usageMetadata"))


def close_from_provider(ctx: StreamContext) -> None:
    """Upstream ended: close the block still receiving text, keeping its signature."""
    _close_active(ctx)


# ═══════════════════════════════════════════════════════════════════════════
# IR EVENTS -> PROVIDER CHUNKS
# ═══════════════════════════════════════════════════════════════════════════

def _chunk(ctx: StreamContext, parts: List[Any], final: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    cursor = ctx.provider_cursor
    candidate: Dict[str, Any] = {"content": {"role": "model", "parts": copy.deepcopy(parts)}, "index": 0}
    out: Dict[str, Any] = {"candidates": [candidate]}
    if final:
        if final.get("finishReason") is not None:
            candidate["finishReason"] = final["finishReason"]
        if final.get("usageMetadata") is not None:
            out["usageMetadata"] = final["usageMetadata"]
    if cursor.get("model"):
        out["modelVersion"] = cursor["model"]
    if cursor.get("id"):
        out["responseId"] = cursor["id"]
    return out


def _part_for(ctx: StreamContext, index: int, kind: str) -> Dict[str, Any]:
    """The accumulated part of a text/reasoning block, created on its first delta."""
    cursor = ctx.provider_cursor
    positions = cursor.setdefault("positions", {})
    parts = cursor.setdefault("parts", [])
    if index not in positions:
        positions[index] = len(parts)
        parts.append({"text": "", "thought": True} if kind == "reasoning" else {"text": ""})
    return parts[positions[index]]


def event_to_provider(event: Any, ctx: StreamContext) -> List[StreamPayload]:
    cursor = ctx.provider_cursor
    accumulated = _mode(ctx) != INCREMENTAL
    kind = event.type
    if kind == "stream_start":
        cursor.update(id=event.response_id, model=event.model)
        return []
    if kind == "content_block_start":
        cursor.setdefault("kinds", {})[event.block_index] = event.block_kind
        return []
    if kind == "tool_call_start":
        cursor.setdefault("calls", {})[event.block_index] = {"name": event.tool_name, "args": ""}
        return []
    if kind == "tool_call_delta":
        cursor["calls"][event.block_index]["args"] += event.arguments_fragment
        return []
    if kind in ("text_delta", "reasoning_delta"):
        block_kind = "text" if kind == "text_delta" else "reasoning"
        part = _part_for(ctx, event.block_index, block_kind)
        part["text"] += event.text
        if accumulated:
            return [_chunk(ctx, cursor["parts"])]
        delta = {"text": event.text, "thought": True} if block_kind == "reasoning" else {"text": event.text}
        return [_chunk(ctx, [delta])]
    if kind == "content_block_end":
        call = cursor.get("calls", {}).pop(event.block_index, None)
        signature = namespace(None, event.provider_metadata, NS).get("thoughtSignature")
        if signature and event.block_index in cursor.get("positions", {}):
            cursor["parts"][cursor["positions"][event.block_index]]["thoughtSignature"] = signature
        if call is None:
            return []
        args = json.loads(call["args"]) if call["args"] else {}
        part = {"functionCall": {"name": call["name"], "args": args}}
        parts = cursor.setdefault("parts", [])
        if accumulated:
            parts.append(part)
            return [_chunk(ctx, parts)]
        return [_chunk(ctx, [part])]
    if kind == "finish":
        cursor["finishReason"] = finish_to_provider(ctx, event.finish_reason, event.provider_metadata)
        return []
    if kind == "usage":
        cursor["usageMetadata"] = usage_to_provider(event.usage, ctx)
        return []
    if kind == "stream_end":
        final = {"finishReason": cursor.get("finishReason"), "usageMetadata": cursor.get("usageMetadata")}
        parts = cursor.get("parts", []) if accumulated else []
        return [_chunk(ctx, parts, final)]
    return []


def error_to_provider(message: str, ctx: StreamContext) -> List[StreamPayload]:
    return [{"error": {"code": 500, "message": message, "status": "INTERNAL"}}]


__all__ = ["ACCUMULATED", "INCREMENTAL", "chunk_from_provider", "error_to_provider", "event_to_provider"]
