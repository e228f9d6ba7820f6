"""Anthropic typed-event streaming.

Anthropic announces every block explicitly, so the mapping is one-to-one.
Provider block indices are mapped to IR block indices because skipped block
types (server tool results, redacted thinking) do not open IR blocks.
"""

from __future__ import annotations

from typing import Any, Dict, List

from rosetta.converters.base import StreamPayload
from rosetta.converters.context import StreamContext, WarningCode
from rosetta.converters.errors import ProtocolViolation
from rosetta.converters.metadata import collect_extras, expect_object, namespace, pack, restore, shape
from rosetta.providers.anthropic.ops import FINISH_INVERSE, FINISH_REASONS, NS, usage_from_provider
from rosetta.providers.common import dump_arguments, map_reason

_BLOCK_KINDS = {"text": "text", "tool_use": "tool_call", "thinking": "reasoning"}
_MESSAGE_KEYS = {"id", "type", "role", "model", "content", "stop_reason", "stop_sequence", "usage"}


# ═══════════════════════════════════════════════════════════════════════════
# PROVIDER EVENTS -> IR EVENTS
# ═══════════════════════════════════════════════════════════════════════════

def _block(ctx: StreamContext, payload: Dict[str, Any]) -> Any:
    """IR index for a provider block index; None for skipped blocks."""
    position = payload.get("index")
    blocks = ctx.provider_cursor.setdefault("blocks", {})
    if position not in blocks:
        raise ProtocolViolation(f"event for block {position}, which was never started", frame_ordinal=ctx.frame_ordinal)
    return blocks[position]


def _usage(ctx: StreamContext, raw: Any) -> None:
    if not isinstance(raw, dict):
        return
    aggregated = ctx.provider_cursor.setdefault("usage", {})
    aggregated.update({key: value for key, value in raw.items() if value is not None})


def _block_start(payload: Dict[str, Any], ctx: StreamContext) -> None:
    position = payload.get("index")
    blocks = ctx.provider_cursor.setdefault("blocks", {})
    if position in blocks:
        raise ProtocolViolation(f"block {position} started twice", frame_ordinal=ctx.frame_ordinal)
    block = expect_object(payload.get("content_block"), f"$[{ctx.frame_ordinal}].content_block")
    kind = _BLOCK_KINDS.get(block.get("type"))
    if kind is None:
        blocks[position] = None
        ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE,
                 f"streamed {block.get('type')!r} block has no IR mapping", f"$[{ctx.frame_ordinal}]")
        return
    known = {"type", "text", "thinking", "signature", "id", "name", "input", "citations"}
    metadata = pack(ctx, NS, collect_extras(ctx, block, known, f"$[{ctx.frame_ordinal}].content_block"))
    if kind == "tool_call":
        index = ctx.open_block(kind, tool_call_id=block.get("id"), tool_name=block.get("name"),
                               provider_metadata=metadata)
        if block.get("input"):
            ctx.append_tool_args(index, dump_arguments(block["input"]))
    else:
        index = ctx.open_block(kind, provider_metadata=metadata)
        initial = block.get("text") if kind == "text" else block.get("thinking")
        if initial:
            (ctx.emit_text if kind == "text" else ctx.emit_reasoning)(index, initial)
    blocks[position] = index


def _block_delta(payload: Dict[str, Any], ctx: StreamContext) -> None:
    index = _block(ctx, payload)
    if index is None:
        return
    delta = expect_object(payload.get("delta"), f"$[{ctx.frame_ordinal}].delta")
    kind = delta.get("type")
    if kind == "text_delta":
        ctx.emit_text(index, delta.get("text", ""))
    elif kind == "input_json_delta":
        if delta.get("partial_json"):
            ctx.append_tool_args(index, delta["partial_json"])
        elif index not in ctx.open_blocks:
            raise ProtocolViolation(f"delta for block {index}, which is not open", frame_ordinal=ctx.frame_ordinal)
    elif kind == "thinking_delta":
        ctx.emit_reasoning(index, delta.get("thinking", ""))
    elif kind == "signature_delta":
        if index not in ctx.open_blocks:
            raise ProtocolViolation(f"delta for block {index}, which is not open", frame_ordinal=ctx.frame_ordinal)
        ctx.provider_cursor.setdefault("signatures", {})[index] = delta.get("signature", "")
    elif not ctx.provider_cursor.get(f"warned:{kind}"):
        ctx.provider_cursor[f"warned:{kind}"] = True
        ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, f"{kind!r} deltas have no IR mapping", f"$[{ctx.frame_ordinal}]")


def _block_stop(payload: Dict[str, Any], ctx: StreamContext) -> None:
    index = _block(ctx, payload)
    if index is None:
        return
    signature = ctx.provider_cursor.get("signatures", {}).pop(index, None)
    metadata = None
    if signature:
        if ctx.preserve:
            metadata = {NS: {"signature": signature}}
        else:
            ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, "thinking signature dropped", f"$[{ctx.frame_ordinal}]")
    ctx.close_block(index, provider_metadata=metadata)


def chunk_from_provider(chunk: StreamPayload, ctx: StreamContext) -> None:
    payload = expect_object(chunk, f"$[{ctx.frame_ordinal}]")
    kind = payload.get("type")
    if kind == "message_start":
        message = expect_object(payload.get("message"), f"$[{ctx.frame_ordinal}].message")
        _usage(ctx, message.get("usage"))
        extras = collect_extras(ctx, message, _MESSAGE_KEYS, "$.message")
        ctx.start_stream(message.get("id") or "", message.get("model") or ctx.model_hint or "",
                         provider_metadata=pack(ctx, NS, extras))
    elif kind == "content_block_start":
        _block_start(payload, ctx)
    elif kind == "content_block_delta":
        _block_delta(payload, ctx)
    elif kind == "content_block_stop":
        _block_stop(payload, ctx)
    elif kind == "message_delta":
        delta = payload.get("delta") or {}
        _usage(ctx, payload.get("usage"))
        if delta.get("stop_reason") is not None:
            reason, hint = map_reason(delta["stop_reason"], FINISH_REASONS, FINISH_INVERSE)
            extras = {"stop_sequence": delta["stop_sequence"]} if delta.get("stop_sequence") else None
            ctx.defer_finish(reason, pack(ctx, NS, extras, hint))
        if ctx.provider_cursor.get("usage"):
            ctx.defer_usage(usage_from_provider(ctx.provider_cursor["usage"], ctx, "$.usage"))
    elif kind == "message_stop":
        ctx.end_stream()
    elif kind == "error":
        error = payload.get("error") or {}
        raise ProtocolViolation(f"upstream error: {error.get('message')}", frame_ordinal=ctx.frame_ordinal)


# ═══════════════════════════════════════════════════════════════════════════
# IR EVENTS -> PROVIDER EVENTS
# ═══════════════════════════════════════════════════════════════════════════

def _message_delta(ctx: StreamContext, usage: Any = None) -> Dict[str, Any]:
    cursor = ctx.provider_cursor
    cursor["delta_sent"] = True
    body: Dict[str, Any] = {"output_tokens": 0}
    if usage is not None:
        body = {"input_tokens": usage.prompt_tokens, "output_tokens": usage.completion_tokens}
        if usage.cached_tokens is not None:
            body["cache_read_input_tokens"] = usage.cached_tokens
        restore(ctx, body, usage.provider_metadata, NS)
    return {
        "type": "message_delta",
        "delta": {"stop_reason": cursor.get("stop_reason"), "stop_sequence": cursor.get("stop_sequence")},
        "usage": body,
    }


def event_to_provider(event: Any, ctx: StreamContext) -> List[StreamPayload]:
    cursor = ctx.provider_cursor
    kind = event.type
    if kind == "stream_start":
        message = {
            "id": event.response_id,
            "type": "message",
            "role": "assistant",
            "model": event.model,
            "content": [],
            "stop_reason": None,
            "stop_sequence": None,
            "usage": {"input_tokens": 0, "output_tokens": 0},
        }
        return [{"type": "message_start", "message": restore(ctx, message, event.provider_metadata, NS)}]
    if kind == "content_block_start":
        cursor["next"] = cursor.get("next", -1) + 1
        cursor.setdefault("indices", {})[event.block_index] = cursor["next"]
        if event.block_kind == "tool_call":
            cursor["pending_metadata"] = event.provider_metadata
            return []
        block = {"type": "text", "text": ""} if event.block_kind == "text" else {"type": "thinking", "thinking": ""}
        return [{"type": "content_block_start", "index": cursor["next"],
                 "content_block": restore(ctx, block, event.provider_metadata, NS)}]
    position = cursor.get("indices", {}).get(getattr(event, "block_index", None))
    if kind == "tool_call_start":
        block = {"type": "tool_use", "id": event.tool_call_id, "name": event.tool_name, "input": {}}
        restore(ctx, block, cursor.pop("pending_metadata", None), NS)
        return [{"type": "content_block_start", "index": position, "content_block": block}]
    if kind == "text_delta":
        return [{"type": "content_block_delta", "index": position, "delta": {"type": "text_delta", "text": event.text}}]
    if kind == "reasoning_delta":
        delta = {"type": "thinking_delta", "thinking": event.text}
        return [{"type": "content_block_delta", "index": position, "delta": delta}]
    if kind == "tool_call_delta":
        delta = {"type": "input_json_delta", "partial_json": event.arguments_fragment}
        return [{"type": "content_block_delta", "index": position, "delta": delta}]
    if kind == "content_block_end":
        out: List[StreamPayload] = []
        signature = namespace(None, event.provider_metadata, NS).get("signature")
        if signature:
            out.append({"type": "content_block_delta", "index": position,
                        "delta": {"type": "signature_delta", "signature": signature}})
        out.append({"type": "content_block_stop", "index": position})
        cursor.setdefault("closed", set()).add(position)
        return out
    if kind == "finish":
        hints = shape(ctx, event.provider_metadata, NS)
        cursor["stop_reason"] = hints.get("finish_reason", FINISH_INVERSE[event.finish_reason])
        cursor["stop_sequence"] = namespace(ctx, event.provider_metadata, NS).get("stop_sequence")
        return []
    if kind == "usage":
        return [_message_delta(ctx, event.usage)]
    if kind == "stream_end":
        out = [] if cursor.get("delta_sent") else [_message_delta(ctx)]
        out.append({"type": "message_stop"})
        return out
    return []


def error_to_provider(message: str, ctx: StreamContext) -> List[StreamPayload]:
    cursor = ctx.provider_cursor
    closed = cursor.get("closed", set())
    out: List[StreamPayload] = [
        {"type": "content_block_stop", "index": position}
        for position in sorted(cursor.get("indices", {}).values())
        if position not in closed
    ]
    out.append({"type": "error", "error": {"type": "api_error", "message": message}})
    return out


__all__ = ["chunk_from_provider", "error_to_provider", "event_to_provider"]
