"""OpenAI Responses item-level streaming.

Every output item is announced with ``response.output_item.added`` and
finished with ``response.output_item.done``. Text blocks map to the
content parts of a message item, reasoning blocks to reasoning items with
one summary part, and tool-call blocks to function_call items. Deltas name
their item by ``item_id``; a delta for an item that was never added is a
protocol violation.
"""

from __future__ import annotations

import copy
from typing import Any, Dict, List, Optional

from rosetta.converters.base import StreamPayload
from rosetta.converters.context import StreamContext, WarningCode
from rosetta.converters.errors import ProtocolViolation
from rosetta.converters.metadata import expect_object, namespace, pack
from rosetta.providers.openai_responses.ops import (
    NS,
    finish_from_provider,
    finish_to_provider,
    item_id,
    usage_from_provider,
    usage_to_provider,
)

TERMINAL_EVENTS = {"completed": "response.completed", "incomplete": "response.incomplete", "failed": "response.failed"}


# ═══════════════════════════════════════════════════════════════════════════
# PROVIDER EVENTS -> IR EVENTS
# ═══════════════════════════════════════════════════════════════════════════

def _violation(ctx: StreamContext, message: str) -> ProtocolViolation:
    return ProtocolViolation(message, frame_ordinal=ctx.frame_ordinal)


def _warn_once(ctx: StreamContext, key: str, message: str) -> None:
    warned = ctx.provider_cursor.setdefault("warned", set())
    if key not in warned:
        warned.add(key)
        ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, message, f"$[{ctx.frame_ordinal}]")


def _item(ctx: StreamContext, payload: Dict[str, Any]) -> Dict[str, Any]:
    items = ctx.provider_cursor.setdefault("items", {})
    key = payload.get("item_id")
    if key is None:
        key = ctx.provider_cursor.setdefault("by_index", {}).get(payload.get("output_index"))
    if key not in items:
        raise _violation(ctx, f"event for item {payload.get('item_id', payload.get('output_index'))!r}, which was never added")
    return items[key]


def _close(ctx: StreamContext, block: Optional[int], metadata: Optional[Dict[str, Any]] = None) -> None:
    if block is not None and block in ctx.open_blocks:
        ctx.close_block(block, provider_metadata=metadata)


def _item_added(payload: Dict[str, Any], ctx: StreamContext) -> None:
    raw = expect_object(payload.get("item"), f"$[{ctx.frame_ordinal}].item")
    key = raw.get("id") or f"output_{payload.get('output_index')}"
    kind = raw.get("type")
    entry: Dict[str, Any] = {"kind": kind, "block": None, "parts": {}}
    cursor = ctx.provider_cursor
    cursor.setdefault("items", {})[key] = entry
    cursor.setdefault("by_index", {})[payload.get("output_index")] = key
    if kind == "function_call":
        cursor["saw_calls"] = True
        entry["block"] = ctx.open_block("tool_call", tool_call_id=raw.get("call_id"), tool_name=raw.get("name"))
        if raw.get("arguments"):
            ctx.append_tool_args(entry["block"], raw["arguments"])
    elif kind not in ("message", "reasoning"):
        entry["kind"] = None
        _warn_once(ctx, f"item:{kind}", f"streamed {kind!r} items have no IR mapping")


def _part_added(payload: Dict[str, Any], ctx: StreamContext) -> None:
    entry = _item(ctx, payload)
    part = payload.get("part") or {}
    if part.get("type") != "output_text":
        entry["parts"][payload.get("content_index")] = None
        _warn_once(ctx, f"part:{part.get('type')}", f"streamed {part.get('type')!r} parts have no IR mapping")
        return
    block = ctx.open_block("text")
    entry["parts"][payload.get("content_index")] = block
    if part.get("text"):
        ctx.emit_text(block, part["text"])


def _text_delta(payload: Dict[str, Any], ctx: StreamContext) -> None:
    entry = _item(ctx, payload)
    index = payload.get("content_index")
    if index not in entry["parts"]:
        raise _violation(ctx, f"text delta for content part {index}, which was never added")
    if entry["parts"][index] is not None:
        ctx.emit_text(entry["parts"][index], payload.get("delta", ""))


def _reasoning_part(payload: Dict[str, Any], ctx: StreamContext) -> None:
    entry = _item(ctx, payload)
    _close(ctx, entry["block"])
    entry["block"] = ctx.open_block("reasoning")


def _reasoning_delta(payload: Dict[str, Any], ctx: StreamContext) -> None:
    entry = _item(ctx, payload)
    if entry["block"] is None or entry["block"] not in ctx.open_blocks:
        entry["block"] = ctx.open_block("reasoning")
    ctx.emit_reasoning(entry["block"], payload.get("delta", ""))


def _arguments(payload: Dict[str, Any], ctx: StreamContext, final: bool) -> None:
    entry = _item(ctx, payload)
    if entry["kind"] != "function_call":
        raise _violation(ctx, f"argument delta for a {entry['kind']!r} item")
    block = entry["block"]
    if not final:
        ctx.append_tool_args(block, payload.get("delta", ""))
    elif block in ctx.open_blocks and not ctx.tool_arg_buffers.get(block) and payload.get("arguments"):
        ctx.append_tool_args(block, payload["arguments"])


def _item_done(payload: Dict[str, Any], ctx: StreamContext) -> None:
    entry = _item(ctx, payload)
    raw = payload.get("item") or {}
    kind = entry["kind"]
    if kind == "function_call":
        _arguments({**payload, "arguments": raw.get("arguments")}, ctx, final=True)
        _close(ctx, entry["block"])
    elif kind == "reasoning":
        if entry["block"] is None:
            for summary in raw.get("summary") or []:
                if summary.get("text"):
                    _reasoning_delta({**payload, "delta": summary["text"]}, ctx)
        metadata = None
        if raw.get("encrypted_content"):
            if ctx.preserve:
                metadata = {NS: {"encrypted_content": raw["encrypted_content"]}}
            else:
                ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, "encrypted reasoning dropped", f"$[{ctx.frame_ordinal}]")
        _close(ctx, entry["block"], metadata)
    elif kind == "message":
        if not entry["parts"]:
            for part in raw.get("content") or []:
                if part.get("type") == "output_text":
                    block = ctx.open_block("text")
                    if part.get("text"):
                        ctx.emit_text(block, part["text"])
                    ctx.close_block(block)
        for block in entry["parts"].values():
            _close(ctx, block)


def _terminal(payload: Dict[str, Any], ctx: StreamContext) -> None:
    response = expect_object(payload.get("response"), f"$[{ctx.frame_ordinal}].response")
    ctx.ensure_started()
    reason, hints = finish_from_provider(
        response.get("status"), response.get("incomplete_details"), ctx.provider_cursor.get("saw_calls", False),
    )
    ctx.defer_finish(reason, pack(ctx, NS, None, hints))
    if response.get("usage"):
        ctx.defer_usage(usage_from_provider(response["usage"], ctx, f"$[{ctx.frame_ordinal}].response.usage"))
    ctx.end_stream()


def chunk_from_provider(chunk: StreamPayload, ctx: StreamContext) -> None:
    payload = expect_object(chunk, f"$[{ctx.frame_ordinal}]")
    kind = payload.get("type")
    if kind in ("response.created", "response.in_progress", "response.queued"):
        response = payload.get("response") or {}
        ctx.start_stream(response.get("id") or "", response.get("model") or ctx.model_hint or "",
                         response.get("created_at") or 0)
    elif kind == "response.output_item.added":
        _item_added(payload, ctx)
    elif kind == "response.content_part.added":
        _part_added(payload, ctx)
    elif kind == "response.output_text.delta":
        _text_delta(payload, ctx)
    elif kind == "response.content_part.done":
        entry = _item(ctx, payload)
        _close(ctx, entry["parts"].get(payload.get("content_index")))
    elif kind == "response.reasoning_summary_part.added":
        _reasoning_part(payload, ctx)
    elif kind in ("response.reasoning_summary_text.delta", "response.reasoning_text.delta"):
        _reasoning_delta(payload, ctx)
    elif kind == "response.function_call_arguments.delta":
        _arguments(payload, ctx, final=False)
    elif kind == "response.function_call_arguments.done":
        _arguments(payload, ctx, final=True)
    elif kind == "response.output_item.done":
        _item_done(payload, ctx)
    elif kind in TERMINAL_EVENTS.values():
        _terminal(payload, ctx)
    elif kind == "response.output_text.annotation.added":
        _warn_once(ctx, "annotations", "streamed annotations have no IR mapping")
    elif kind == "error":
        raise _violation(ctx, f"upstream error: {payload.get('message')}")


# ═══════════════════════════════════════════════════════════════════════════
# IR EVENTS -> PROVIDER EVENTS
# ═══════════════════════════════════════════════════════════════════════════

def _event(ctx: StreamContext, kind: str, **fields: Any) -> Dict[str, Any]:
    cursor = ctx.provider_cursor
    cursor["sequence"] = cursor.get("sequence", -1) + 1
    return {"type": kind, "sequence_number": cursor["sequence"], **copy.deepcopy(fields)}


def _response(ctx: StreamContext, status: str, **fields: Any) -> Dict[str, Any]:
    cursor = ctx.provider_cursor
    return {
        "id": cursor.get("id", ""),
        "object": "response",
        "created_at": cursor.get("created", 0),
        "status": status,
        "model": cursor.get("model", ""),
        "output": cursor.get("output", []),
        **fields,
    }


def _add_item(ctx: StreamContext, kind: str, item: Dict[str, Any]) -> Dict[str, Any]:
    output = ctx.provider_cursor.setdefault("output", [])
    record = {"id": item_id(kind, len(output)), **item}
    output.append(record)
    return record


def _open_message(ctx: StreamContext, out: List[StreamPayload]) -> Dict[str, Any]:
    cursor = ctx.provider_cursor
    if cursor.get("message") is None:
        message = _add_item(ctx, "message", {"type": "message", "status": "in_progress", "role": "assistant", "content": []})
        cursor["message"] = message
        out.append(_event(ctx, "response.output_item.added", output_index=len(cursor["output"]) - 1, item=message))
    return cursor["message"]


def _close_message(ctx: StreamContext, out: List[StreamPayload]) -> None:
    cursor = ctx.provider_cursor
    message = cursor.pop("message", None)
    if message is None:
        return
    message["status"] = "completed"
    out.append(_event(ctx, "response.output_item.done", output_index=cursor["output"].index(message), item=message))


def _block_start(event: Any, ctx: StreamContext) -> List[StreamPayload]:
    cursor = ctx.provider_cursor
    out: List[StreamPayload] = []
    blocks = cursor.setdefault("blocks", {})
    if event.block_kind == "text":
        message = _open_message(ctx, out)
        part = {"type": "output_text", "text": "", "annotations": []}
        message["content"].append(part)
        state = {"item": message, "index": cursor["output"].index(message), "content_index": len(message["content"]) - 1}
        blocks[event.block_index] = state
        out.append(_event(ctx, "response.content_part.added", item_id=message["id"], output_index=state["index"],
                          content_index=state["content_index"], part=part))
        return out
    _close_message(ctx, out)
    if event.block_kind == "reasoning":
        item = _add_item(ctx, "reasoning", {"type": "reasoning", "summary": []})
        index = len(cursor["output"]) - 1
        blocks[event.block_index] = {"item": item, "index": index, "text": ""}
        out.append(_event(ctx, "response.output_item.added", output_index=index, item=item))
        out.append(_event(ctx, "response.reasoning_summary_part.added", item_id=item["id"], output_index=index,
                          summary_index=0, part={"type": "summary_text", "text": ""}))
    return out


def _block_end(event: Any, ctx: StreamContext) -> List[StreamPayload]:
    state = ctx.provider_cursor.get("blocks", {}).pop(event.block_index, None)
    if state is None:
        return []
    item = state["item"]
    common = {"item_id": item["id"], "output_index": state["index"]}
    if item["type"] == "message":
        part = item["content"][state["content_index"]]
        return [
            _event(ctx, "response.output_text.done", content_index=state["content_index"], text=part["text"], **common),
            _event(ctx, "response.content_part.done", content_index=state["content_index"], part=part, **common),
        ]
    if item["type"] == "reasoning":
        summary = {"type": "summary_text", "text": state["text"]}
        item["summary"].append(summary)
        signature = namespace(None, event.provider_metadata, NS).get("encrypted_content")
        if signature:
            item["encrypted_content"] = signature
        return [
            _event(ctx, "response.reasoning_summary_text.done", summary_index=0, text=state["text"], **common),
            _event(ctx, "response.reasoning_summary_part.done", summary_index=0, part=summary, **common),
            _event(ctx, "response.output_item.done", output_index=state["index"], item=item),
        ]
    item["status"] = "completed"
    return [
        _event(ctx, "response.function_call_arguments.done", arguments=item["arguments"], **common),
        _event(ctx, "response.output_item.done", output_index=state["index"], item=item),
    ]


def _terminal_event(ctx: StreamContext) -> List[StreamPayload]:
    cursor = ctx.provider_cursor
    out: List[StreamPayload] = []
    _close_message(ctx, out)
    fields = finish_to_provider(ctx, cursor.get("finish", "stop"), cursor.get("finish_metadata"))
    status = fields.pop("status")
    if status == "failed":
        fields["error"] = {"code": "server_error", "message": "generation failed"}
    if cursor.get("usage") is not None:
        fields["usage"] = cursor["usage"]
    name = TERMINAL_EVENTS.get(status, "response.completed")
    out.append(_event(ctx, name, response=_response(ctx, status, **fields)))
    return out


def event_to_provider(event: Any, ctx: StreamContext) -> List[StreamPayload]:
    cursor = ctx.provider_cursor
    kind = event.type
    if kind == "stream_start":
        cursor.update(id=event.response_id, model=event.model, created=event.created)
        return [
            _event(ctx, "response.created", response=_response(ctx, "in_progress")),
            _event(ctx, "response.in_progress", response=_response(ctx, "in_progress")),
        ]
    if kind == "content_block_start":
        return _block_start(event, ctx)
    if kind == "tool_call_start":
        item = _add_item(ctx, "function_call", {
            "type": "function_call", "status": "in_progress", "call_id": event.tool_call_id,
            "name": event.tool_name, "arguments": "",
        })
        index = len(cursor["output"]) - 1
        cursor.setdefault("blocks", {})[event.block_index] = {"item": item, "index": index}
        return [_event(ctx, "response.output_item.added", output_index=index, item=item)]
    state = cursor.get("blocks", {}).get(getattr(event, "block_index", None))
    if kind == "text_delta" and state is not None:
        state["item"]["content"][state["content_index"]]["text"] += event.text
        return [_event(ctx, "response.output_text.delta", item_id=state["item"]["id"], output_index=state["index"],
                       content_index=state["content_index"], delta=event.text)]
    if kind == "reasoning_delta" and state is not None:
        state["text"] += event.text
        return [_event(ctx, "response.reasoning_summary_text.delta", item_id=state["item"]["id"],
                       output_index=state["index"], summary_index=0, delta=event.text)]
    if kind == "tool_call_delta" and state is not None:
        state["item"]["arguments"] += event.arguments_fragment
        return [_event(ctx, "response.function_call_arguments.delta", item_id=state["item"]["id"],
                       output_index=state["index"], delta=event.arguments_fragment)]
    if kind == "content_block_end":
        return _block_end(event, ctx)
    if kind == "finish":
        cursor["finish"], cursor["finish_metadata"] = event.finish_reason, event.provider_metadata
        return []
    if kind == "usage":
        cursor["usage"] = usage_to_provider(event.usage, ctx)
        return []
    if kind == "stream_end":
        return _terminal_event(ctx)
    return []


def error_to_provider(message: str, ctx: StreamContext) -> List[StreamPayload]:
    error = {"code": "server_error", "message": message}
    return [
        _event(ctx, "error", code="server_error", message=message, param=None),
        _event(ctx, "response.failed", response=_response(ctx, "failed", error=error, incomplete_details=None)),
    ]


__all__ = ["chunk_from_provider", "error_to_provider", "event_to_provider"]
