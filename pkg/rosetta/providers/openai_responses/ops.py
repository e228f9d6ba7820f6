"""Ops for the OpenAI Responses format.

Responses flattens a conversation into typed sibling items. On input,
consecutive assistant-origin items (assistant messages, function calls,
reasoning) are regrouped into one AssistantMessage and consecutive
function_call_output items into one ToolMessage. In preserve mode the first
IR part of every item carries an ``item`` shape hint holding the item-level
keys (id, status, unknown keys), which also marks where the next item starts.

Item ids are written only for responses. Items without a stored ``item``
hint get ``<prefix>_<output index>`` ids so repeated conversions agree.
"""

from __future__ import annotations

import copy
from typing import Any, Dict, List, Optional, Tuple

from rosetta.config.defaults import budget_to_effort
from rosetta.converters.base import ConfigOps, ContentOps, MessageOps, ToolOps
from rosetta.converters.context import ConversionContext, WarningCode
from rosetta.converters.errors import MalformedInput
from rosetta.converters.metadata import (
    HOSTED_TOOLS_KEY,
    SHAPE_KEY,
    collect_extras,
    deep_merge,
    expect_list,
    expect_object,
    hosted_tools,
    insert_hosted,
    pack,
    require,
    restore,
    shape,
)
from rosetta.ir.types import (
    AssistantMessage,
    AudioPart,
    CitationPart,
    CitationSpan,
    FilePart,
    GenerationConfig,
    ImagePart,
    IRRequest,
    LogprobsConfig,
    MessageMetadata,
    ProviderFormat,
    ReasoningConfig,
    ReasoningPart,
    RefusalPart,
    ResponseFormatConfig,
    StreamConfig,
    SystemMessage,
    TextPart,
    ToolCallConfig,
    ToolCallPart,
    ToolChoice,
    ToolDefinition,
    ToolMessage,
    ToolResultPart,
    UsageInfo,
    UserMessage,
)
from rosetta.providers.common import (
    arguments_shape,
    content_form_shape,
    drop_part,
    dump_arguments,
    load_arguments,
    openai_file_data,
    openai_file_from_fields,
    openai_image_from_url,
    openai_image_url,
    wants_string,
    warn_unmapped,
)

NS = ProviderFormat.OPENAI_RESPONSES.value
TARGET = "OpenAI Responses"

ITEM_PREFIXES = {"message": "msg", "function_call": "fc", "reasoning": "rs"}
ASSISTANT_ITEMS = {"function_call", "reasoning"}
OPAQUE_ITEMS = "opaque_items"

TOOL_CHOICE_MODES = {"none": "none", "auto": "auto", "required": "any"}
TOOL_CHOICE_INVERSE = {"none": "none", "auto": "auto", "any": "required"}
EFFORTS = ("low", "medium", "high")

_INCOMPLETE_REASONS = {"max_output_tokens": "length", "content_filter": "content_filter"}


def _custom(message) -> Optional[Dict[str, Any]]:
    return message.metadata.custom


def item_id(kind: str, position: int) -> str:
    return f"{ITEM_PREFIXES.get(kind, 'item')}_{position}"


# ═══════════════════════════════════════════════════════════════════════════
# FINISH STATE
# ═══════════════════════════════════════════════════════════════════════════

def finish_fields(reason: str) -> Tuple[str, Optional[Dict[str, Any]]]:
    """IR finish reason -> (status, incomplete_details)"""
    if reason in ("stop", "tool_calls"):
        return "completed", None
    if reason == "length":
        return "incomplete", {"reason": "max_output_tokens"}
    if reason == "content_filter":
        return "incomplete", {"reason": "content_filter"}
    if reason == "error":
        return "failed", None
    return "incomplete", None


def finish_from_provider(status: Any, details: Any, has_calls: bool) -> Tuple[str, Dict[str, Any]]:
    if status == "completed":
        reason = "tool_calls" if has_calls else "stop"
    elif status == "incomplete":
        code = details.get("reason") if isinstance(details, dict) else None
        reason = _INCOMPLETE_REASONS.get(code, "other")
    elif status == "failed":
        reason = "error"
    else:
        reason = "other"
    canonical_status, canonical_details = finish_fields(reason)
    hints: Dict[str, Any] = {}
    if status != canonical_status:
        hints["status"] = status
    if details != canonical_details:
        hints["incomplete_details"] = copy.deepcopy(details)
    return reason, hints


def finish_to_provider(ctx: ConversionContext, reason: str, meta: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    hints = shape(ctx, meta, NS)
    status, details = finish_fields(reason)
    return {
        "status": hints.get("status", status),
        "incomplete_details": copy.deepcopy(hints.get("incomplete_details", details)),
    }


# ═══════════════════════════════════════════════════════════════════════════
# CONTENT
# ═══════════════════════════════════════════════════════════════════════════

_TEXT_TYPES = {"user": "input_text", "system": "input_text", "developer": "input_text", "assistant": "output_text"}


class ResponsesContentOps(ContentOps):
    """input_* and output_* content parts of message items"""

    def part_to_provider(self, part: Any, ctx: ConversionContext, path: str, role: str = "user") -> Optional[Dict[str, Any]]:
        meta = part.provider_metadata
        hints = shape(ctx, meta, NS)
        if isinstance(part, TextPart):
            out: Dict[str, Any] = {"type": hints.get("type", _TEXT_TYPES.get(role, "input_text")), "text": part.text}
            if out["type"] == "output_text" and not hints.get("annotations_absent"):
                out["annotations"] = []
        elif isinstance(part, ImagePart):
            out = {"type": "input_image"}
            if hints.get("ref") == "file_id":
                out["file_id"] = part.url
            else:
                out["image_url"] = openai_image_url(part)
            if part.detail is not None:
                out["detail"] = part.detail
        elif isinstance(part, FilePart):
            out = {"type": "input_file"}
            if part.data is not None:
                out["file_data"] = openai_file_data(part)
            elif hints.get("ref") == "file_id" or (part.url is not None and not part.url.startswith("http")):
                out["file_id"] = part.url
            else:
                out["file_url"] = part.url
            if part.filename is not None:
                out["filename"] = part.filename
        elif isinstance(part, AudioPart):
            out = {"type": "input_audio", "input_audio": {"data": part.data, "format": part.media_type.split("/")[-1]}}
        elif isinstance(part, RefusalPart):
            out = {"type": "refusal", "refusal": part.reason}
        else:
            drop_part(ctx, part.type, f"{TARGET} message content", path)
            return None
        return restore(ctx, out, meta, NS)

    def part_from_provider(self, raw: Any, ctx: ConversionContext, path: str, role: str = "user") -> List[Any]:
        raw = expect_object(raw, path)
        kind = raw.get("type")
        if kind in ("input_text", "output_text"):
            hints: Dict[str, Any] = {}
            if kind != _TEXT_TYPES.get(role, "input_text"):
                hints["type"] = kind
            if kind == "output_text" and "annotations" not in raw:
                hints["annotations_absent"] = True
            extras = collect_extras(ctx, raw, {"type", "text", "annotations"}, path, designated={"logprobs"})
            parts: List[Any] = [TextPart(text=require(raw, "text", path, str), provider_metadata=pack(ctx, NS, extras, hints))]
            for index, annotation in enumerate(expect_list(raw.get("annotations") or [], f"{path}.annotations")):
                parts.append(self.citation_from_provider(annotation, ctx, f"{path}.annotations[{index}]"))
            return parts
        if kind == "input_image":
            extras = collect_extras(ctx, raw, {"type", "image_url", "file_id", "detail"}, path)
            if raw.get("image_url") is not None:
                return [openai_image_from_url(require(raw, "image_url", path, str), raw.get("detail"), pack(ctx, NS, extras))]
            file_id = require(raw, "file_id", path, str)
            return [ImagePart(url=file_id, detail=raw.get("detail"), provider_metadata=pack(ctx, NS, extras, {"ref": "file_id"}))]
        if kind == "input_file":
            extras = collect_extras(ctx, raw, {"type", "file_data", "file_id", "file_url", "filename"}, path)
            if raw.get("file_data") is None and raw.get("file_id") is None and raw.get("file_url") is None:
                raise MalformedInput("input_file needs file_data, file_id or file_url", path)
            hints = {"ref": "file_id"} if raw.get("file_id") is not None and raw.get("file_data") is None else None
            return [openai_file_from_fields(
                raw.get("file_data"), raw.get("file_id") or raw.get("file_url"), raw.get("filename"),
                pack(ctx, NS, extras, hints),
            )]
        if kind == "input_audio":
            audio = require(raw, "input_audio", path, dict)
            extras = collect_extras(ctx, raw, {"type"}, path, nested={"input_audio": {"data", "format"}})
            return [AudioPart(
                data=require(audio, "data", f"{path}.input_audio", str),
                media_type=f"audio/{require(audio, 'format', f'{path}.input_audio', str)}",
                provider_metadata=pack(ctx, NS, extras),
            )]
        if kind == "refusal":
            extras = collect_extras(ctx, raw, {"type", "refusal"}, path)
            return [RefusalPart(reason=require(raw, "refusal", path, str), provider_metadata=pack(ctx, NS, extras))]
        ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, f"content part type {kind!r} has no IR mapping", path)
        return []

    def content_from_provider(self, content: Any, role: str, ctx: ConversionContext, path: str) -> Tuple[List[Any], Dict[str, Any]]:
        if isinstance(content, str):
            parts = [TextPart(text=content)]
            return parts, content_form_shape(parts, True)
        parts = []
        for index, raw in enumerate(expect_list(content, path)):
            parts.extend(self.part_from_provider(raw, ctx, f"{path}[{index}]", role))
        return parts, content_form_shape(parts, False)

    def content_to_provider(self, parts: List[Any], hints: Dict[str, Any], role: str, ctx: ConversionContext,
                            path: str) -> Any:
        if wants_string(parts, hints):
            return parts[0].text
        encoded: List[Dict[str, Any]] = []
        for index, part in enumerate(parts):
            if isinstance(part, CitationPart):
                self.attach_citation(encoded, part, ctx, f"{path}[{index}]")
                continue
            item = self.part_to_provider(part, ctx, f"{path}[{index}]", role)
            if item is not None:
                encoded.append(item)
        return encoded

    def attach_citation(self, encoded: List[Dict[str, Any]], part: CitationPart, ctx: ConversionContext, path: str) -> None:
        if not encoded or encoded[-1].get("type") != "output_text":
            drop_part(ctx, "citation without preceding output text", TARGET, path)
            return
        encoded[-1].setdefault("annotations", []).append(self.citation_to_provider(part, ctx))

    def citation_to_provider(self, part: CitationPart, ctx: ConversionContext) -> Dict[str, Any]:
        out: Dict[str, Any] = {"type": "url_citation"}
        if part.url is not None:
            out["url"] = part.url
        if part.span is not None:
            out["start_index"] = part.span.start
            out["end_index"] = part.span.end
        if part.quoted_text is not None:
            warn_unmapped(ctx, "citation quoted text", TARGET, "$.citations")
        return restore(ctx, out, part.provider_metadata, NS)

    def citation_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> CitationPart:
        raw = expect_object(raw, path)
        span = None
        if isinstance(raw.get("start_index"), int) and isinstance(raw.get("end_index"), int):
            span = CitationSpan(start=raw["start_index"], end=raw["end_index"])
        extras = collect_extras(ctx, raw, {"type", "url", "start_index", "end_index"}, path,
                                designated={"title", "file_id", "filename", "index"}) or {}
        if raw.get("type") != "url_citation" and ctx.preserve:
            extras["type"] = raw.get("type")
        return CitationPart(url=raw.get("url"), span=span, provider_metadata=pack(ctx, NS, extras))


# ═══════════════════════════════════════════════════════════════════════════
# ITEMS
# ═══════════════════════════════════════════════════════════════════════════

_MESSAGE_KEYS = {"type", "role", "content"}
_CALL_KEYS = {"type", "call_id", "name", "arguments"}
_OUTPUT_KEYS = {"type", "call_id", "output"}
_REASONING_KEYS = {"type", "summary", "encrypted_content"}
_ITEM_DESIGNATED = {"id", "status"}


class ResponsesMessageOps(MessageOps):
    """input[] / output[] items"""

    @property
    def content(self) -> ResponsesContentOps:
        return self.converter.content_ops

    @property
    def tools(self) -> "ResponsesToolOps":
        return self.converter.tool_ops

    # -- output -----------------------------------------------------------------

    def messages_to_provider(self, messages: List[Any], ctx: ConversionContext) -> List[Any]:
        return self.items_to_provider(messages, ctx, response=False)

    def items_to_provider(self, messages: List[Any], ctx: ConversionContext, response: bool,
                          opaque: Optional[list] = None) -> List[Dict[str, Any]]:
        items: List[Dict[str, Any]] = []
        for index, message in enumerate(messages):
            path = f"$.messages[{index}]"
            if isinstance(message, AssistantMessage):
                items.extend(self.assistant_to_items(message, ctx, path, response, len(items)))
            elif isinstance(message, ToolMessage):
                items.extend(self.results_to_items(message, ctx, path))
            else:
                items.append(self.message_to_item(message, ctx, path))
        insert_hosted(items, opaque or [])
        return items

    def message_to_item(self, message: Any, ctx: ConversionContext, path: str) -> Dict[str, Any]:
        hints = shape(ctx, _custom(message), NS)
        role = hints.get("role", "system") if isinstance(message, SystemMessage) else "user"
        item: Dict[str, Any] = {} if hints.get("type_absent") else {"type": "message"}
        item["role"] = role
        item["content"] = self.content.content_to_provider(message.content, hints, role, ctx, f"{path}.content")
        return restore(ctx, item, _custom(message), NS)

    def results_to_items(self, message: ToolMessage, ctx: ConversionContext, path: str) -> List[Dict[str, Any]]:
        items = []
        for index, part in enumerate(message.content):
            part_path = f"{path}.content[{index}]"
            if not isinstance(part, ToolResultPart):
                drop_part(ctx, part.type, f"{TARGET} tool output items", part_path)
                continue
            hints = shape(ctx, part.provider_metadata, NS)
            if part.is_error:
                warn_unmapped(ctx, "is_error", TARGET, f"{part_path}.is_error")
            output = self.content.content_to_provider(list(part.content), hints, "user", ctx, f"{part_path}.content")
            item = {"type": "function_call_output", "call_id": part.tool_call_id, "output": output if part.content else ""}
            deep_merge(item, hints.get("item", {}))
            items.append(restore(ctx, item, part.provider_metadata, NS))
        if items:
            restore(ctx, items[0], _custom(message), NS)
        return items

    def assistant_to_items(self, message: AssistantMessage, ctx: ConversionContext, path: str, response: bool,
                           offset: int) -> List[Dict[str, Any]]:
        """Split one assistant message into sibling items in part order."""
        groups: List[Tuple[str, List[Any], Dict[str, Any]]] = []
        for index, part in enumerate(message.content):
            hints = shape(ctx, part.provider_metadata, NS)
            if isinstance(part, ToolCallPart):
                kind = "function_call"
            elif isinstance(part, ReasoningPart):
                kind = "reasoning"
            elif isinstance(part, (TextPart, RefusalPart, CitationPart)):
                kind = "message"
            else:
                drop_part(ctx, part.type, f"{TARGET} assistant output", f"{path}.content[{index}]")
                continue
            if kind == "function_call" or "item" in hints or not groups or groups[-1][0] != kind:
                groups.append((kind, [], hints))
            groups[-1][1].append(part)
        items = []
        for kind, parts, hints in groups:
            if kind == "function_call":
                item = self.tools.call_to_provider(parts[0], ctx)
            elif kind == "reasoning":
                item = self.reasoning_to_item(parts, ctx)
            else:
                item = self.assistant_message_to_item(parts, hints, ctx, path)
            if "item" in hints:
                deep_merge(item, hints["item"])
                if hints.get("type_absent"):
                    item.pop("type", None)
            elif response:
                item = {"id": item_id(kind, offset + len(items)), **item}
                if kind != "reasoning":
                    item["status"] = "completed"
            items.append(item)
        if items:
            restore(ctx, items[0], _custom(message), NS)
        return items

    def assistant_message_to_item(self, parts: List[Any], hints: Dict[str, Any], ctx: ConversionContext,
                                  path: str) -> Dict[str, Any]:
        if hints.get("empty"):
            content: Any = []
        else:
            form = {"content_form": hints.get("content_form", "parts")}
            content = self.content.content_to_provider(parts, form, "assistant", ctx, f"{path}.content")
        return {"type": "message", "role": "assistant", "content": content}

    def reasoning_to_item(self, parts: List[ReasoningPart], ctx: ConversionContext) -> Dict[str, Any]:
        summary = []
        signature = None
        for part in parts:
            signature = signature or part.signature
            if shape(ctx, part.provider_metadata, NS).get("empty") or not (part.text or part.provider_metadata):
                continue
            summary.append(restore(ctx, {"type": "summary_text", "text": part.text}, part.provider_metadata, NS))
        item: Dict[str, Any] = {"type": "reasoning", "summary": summary}
        if signature is not None:
            item["encrypted_content"] = signature
        return item

    # -- input ------------------------------------------------------------------

    def messages_from_provider(self, raw: List[Any], ctx: ConversionContext, path: str) -> List[Any]:
        messages, _ = self.items_from_provider(raw, ctx, path)
        return messages

    def items_from_provider(self, raw: List[Any], ctx: ConversionContext, path: str) -> Tuple[List[Any], list]:
        """Regroup flat items into IR messages; returns the messages and opaque [index, item] pairs."""
        messages: List[Any] = []
        opaque: list = []
        run: Optional[str] = None
        for index, item in enumerate(raw):
            item_path = f"{path}[{index}]"
            item = expect_object(item, item_path)
            kind = item.get("type", "message" if "role" in item else None)
            role = item.get("role")
            if (kind == "message" and role == "assistant") or kind in ASSISTANT_ITEMS:
                parts = self.assistant_item_from_provider(item, kind, ctx, item_path)
                if run == "assistant":
                    previous = messages[-1]
                    messages[-1] = previous.model_copy(update={"content": [*previous.content, *parts]})
                else:
                    messages.append(AssistantMessage(content=parts, metadata=MessageMetadata(id=item.get("id"))))
                run = "assistant"
            elif kind == "function_call_output":
                part = self.result_from_provider(item, ctx, item_path)
                if run == "tool":
                    previous = messages[-1]
                    messages[-1] = previous.model_copy(update={"content": [*previous.content, part]})
                else:
                    messages.append(ToolMessage(content=[part], metadata=MessageMetadata(id=item.get("id"))))
                run = "tool"
            elif kind == "message":
                messages.append(self.message_from_provider(item, ctx, item_path))
                run = None
            else:
                if ctx.preserve:
                    opaque.append([index, copy.deepcopy(item)])
                else:
                    ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, f"{kind!r} items have no IR mapping", item_path)
        return messages, opaque

    def message_from_provider(self, item: Dict[str, Any], ctx: ConversionContext, path: str,
                              system_item: bool = False) -> Any:
        role = require(item, "role", path, str)
        parts, hints = self.content.content_from_provider(require(item, "content", path), role, ctx, f"{path}.content")
        if "type" not in item:
            hints["type_absent"] = True
        extras = collect_extras(ctx, item, _MESSAGE_KEYS, path, designated=_ITEM_DESIGNATED)
        if role in ("system", "developer"):
            if role == "developer":
                hints["role"] = "developer"
            if system_item:
                hints["system_item"] = True
            return SystemMessage(content=parts, metadata=MessageMetadata(id=item.get("id"), custom=pack(ctx, NS, extras, hints)))
        if role == "user":
            return UserMessage(content=parts, metadata=MessageMetadata(id=item.get("id"), custom=pack(ctx, NS, extras, hints)))
        raise MalformedInput(f"unsupported message role {role!r}", f"{path}.role")

    def assistant_item_from_provider(self, item: Dict[str, Any], kind: str, ctx: ConversionContext, path: str) -> List[Any]:
        hints: Dict[str, Any] = {}
        if kind == "function_call":
            keys = _CALL_KEYS
            parts: List[Any] = [self.tools.call_from_provider(item, ctx, path)]
        elif kind == "reasoning":
            keys = _REASONING_KEYS
            parts = self.reasoning_from_provider(item, ctx, path)
        else:
            keys = _MESSAGE_KEYS
            content = item.get("content")
            parts, _ = self.content.content_from_provider(content if content is not None else [], "assistant", ctx,
                                                          f"{path}.content")
            if isinstance(content, str):
                hints["content_form"] = "string"
            if not parts:
                parts = [TextPart(text="")]
                hints["empty"] = True
        if "type" not in item:
            hints["type_absent"] = True
        hints["item"] = collect_extras(ctx, item, keys, path, designated=_ITEM_DESIGNATED) or {}
        return [_with_hints(ctx, parts[0], hints), *parts[1:]]

    def reasoning_from_provider(self, item: Dict[str, Any], ctx: ConversionContext, path: str) -> List[ReasoningPart]:
        signature = item.get("encrypted_content")
        if signature and not ctx.preserve:
            ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, "encrypted reasoning dropped", f"{path}.encrypted_content")
            signature = None
        parts = []
        for index, entry in enumerate(expect_list(item.get("summary") or [], f"{path}.summary")):
            entry_path = f"{path}.summary[{index}]"
            entry = expect_object(entry, entry_path)
            extras = collect_extras(ctx, entry, {"type", "text"}, entry_path)
            parts.append(ReasoningPart(
                text=require(entry, "text", entry_path, str),
                signature=signature if index == 0 else None,
                provider_metadata=pack(ctx, NS, extras),
            ))
        if not parts:
            parts.append(ReasoningPart(text="", signature=signature, provider_metadata=pack(ctx, NS, None, {"empty": True})))
        return parts

    def result_from_provider(self, item: Dict[str, Any], ctx: ConversionContext, path: str) -> ToolResultPart:
        output = item.get("output", "")
        parts, hints = self.content.content_from_provider(output, "user", ctx, f"{path}.output")
        extras = collect_extras(ctx, item, _OUTPUT_KEYS, path, designated=_ITEM_DESIGNATED) or {}
        hints["item"] = extras
        return ToolResultPart(
            tool_call_id=require(item, "call_id", path, str),
            content=parts,
            provider_metadata=pack(ctx, NS, None, hints),
        )


def _with_hints(ctx: ConversionContext, part: Any, hints: Dict[str, Any]) -> Any:
    """Copy of ``part`` with extra shape hints merged into its metadata."""
    if not ctx.preserve or not hints:
        return part
    meta = copy.deepcopy(part.provider_metadata) or {}
    meta.setdefault(NS, {}).setdefault(SHAPE_KEY, {}).update(hints)
    return part.model_copy(update={"provider_metadata": meta})


# ═══════════════════════════════════════════════════════════════════════════
# TOOLS
# ═══════════════════════════════════════════════════════════════════════════

class ResponsesToolOps(ToolOps):
    """Flat tools[], tool_choice, parallel_tool_calls and function_call items"""

    def call_to_provider(self, part: ToolCallPart, ctx: ConversionContext) -> Dict[str, Any]:
        hints = shape(ctx, part.provider_metadata, NS)
        item: Dict[str, Any] = {
            "type": "function_call",
            "call_id": part.tool_call_id,
            "name": part.tool_name,
            "arguments": hints.get("raw_arguments", dump_arguments(part.tool_input)),
        }
        return restore(ctx, item, part.provider_metadata, NS)

    def call_from_provider(self, item: Dict[str, Any], ctx: ConversionContext, path: str) -> ToolCallPart:
        arguments = item.get("arguments", "")
        tool_input = load_arguments(arguments, f"{path}.arguments")
        return ToolCallPart(
            tool_call_id=require(item, "call_id", path, str),
            tool_name=require(item, "name", path, str),
            tool_input=tool_input,
            provider_metadata=pack(ctx, NS, None, arguments_shape(arguments, tool_input)),
        )

    def tools_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        tools = []
        for tool in request.tools or []:
            if tool.tool_type == "mcp":
                entry: Dict[str, Any] = {"type": "mcp", "server_label": tool.name}
                if tool.description is not None:
                    entry["server_description"] = tool.description
            else:
                entry = {"type": "function", "name": tool.name}
                if tool.description is not None:
                    entry["description"] = tool.description
                if tool.parameters is not None:
                    entry["parameters"] = tool.parameters
                if not shape(ctx, tool.provider_metadata, NS).get("strict_absent"):
                    entry["strict"] = False
            tools.append(restore(ctx, entry, tool.provider_metadata, NS))
        insert_hosted(tools, hosted_tools(ctx, request.provider_extensions, NS))
        if tools:
            out["tools"] = tools
        choice = request.tool_choice
        if choice is not None:
            if choice.mode == "tool":
                out["tool_choice"] = {"type": "function", "name": choice.tool_name}
            else:
                out["tool_choice"] = TOOL_CHOICE_INVERSE[choice.mode]
        config = request.tool_call_config
        if config is not None and config.parallel_tool_calls is not None:
            out["parallel_tool_calls"] = config.parallel_tool_calls

    def tools_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        tools, hosted = [], []
        for index, raw in enumerate(expect_list(body.get("tools") or [], "$.tools")):
            path = f"$.tools[{index}]"
            raw = expect_object(raw, path)
            kind = raw.get("type")
            if kind == "function":
                extras = collect_extras(ctx, raw, {"type", "name", "description", "parameters"}, path,
                                        designated={"strict"})
                tools.append(ToolDefinition(
                    name=require(raw, "name", path, str),
                    description=raw.get("description"),
                    parameters=raw.get("parameters"),
                    provider_metadata=pack(ctx, NS, extras, None if "strict" in raw else {"strict_absent": True}),
                ))
            elif kind == "mcp":
                extras = collect_extras(ctx, raw, {"type", "server_label", "server_description"}, path)
                tools.append(ToolDefinition(
                    name=require(raw, "server_label", path, str),
                    description=raw.get("server_description"),
                    tool_type="mcp",
                    provider_metadata=pack(ctx, NS, extras),
                ))
            else:
                hosted.append([index, raw])
        if tools:
            result["tools"] = tools
        if hosted:
            result[HOSTED_TOOLS_KEY] = hosted
        choice = body.get("tool_choice")
        if isinstance(choice, str) and choice in TOOL_CHOICE_MODES:
            result["tool_choice"] = ToolChoice(mode=TOOL_CHOICE_MODES[choice])
        elif isinstance(choice, dict) and choice.get("type") == "function" and isinstance(choice.get("name"), str):
            result["tool_choice"] = ToolChoice(mode="tool", tool_name=choice["name"])
        elif choice is not None:
            result["__extensions__"] = {"tool_choice": choice}
        if isinstance(body.get("parallel_tool_calls"), bool):
            result["tool_call_config"] = ToolCallConfig(parallel_tool_calls=body["parallel_tool_calls"])
        return result


# ═══════════════════════════════════════════════════════════════════════════
# CONFIG
# ═══════════════════════════════════════════════════════════════════════════

_UNSUPPORTED_GENERATION = ("top_k", "stop_sequences", "frequency_penalty", "presence_penalty", "logit_bias", "seed")


class ResponsesConfigOps(ConfigOps):
    """Sampling parameters, text.format, reasoning and stream"""

    def config_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        gen = request.generation
        if gen is not None:
            for field in ("temperature", "top_p"):
                if getattr(gen, field) is not None:
                    out[field] = getattr(gen, field)
            if gen.max_tokens is not None:
                out["max_output_tokens"] = gen.max_tokens
            for field in _UNSUPPORTED_GENERATION:
                if getattr(gen, field) is not None:
                    warn_unmapped(ctx, field, TARGET, f"$.generation.{field}")
            if gen.logprobs is not None:
                if gen.logprobs.top_logprobs is not None:
                    out["top_logprobs"] = gen.logprobs.top_logprobs
                elif gen.logprobs.enabled:
                    warn_unmapped(ctx, "logprobs without top_logprobs", TARGET, "$.generation.logprobs")
        fmt = request.response_format
        if fmt is not None:
            text_format: Dict[str, Any] = {"type": fmt.kind}
            if fmt.kind == "json_schema":
                text_format["name"] = fmt.schema_name or "response"
                if fmt.json_schema is not None:
                    text_format["schema"] = fmt.json_schema
                if fmt.strict is not None:
                    text_format["strict"] = fmt.strict
            out["text"] = {"format": text_format}
        stream = request.stream
        if stream is not None:
            out["stream"] = stream.enabled
        reasoning = request.reasoning
        if reasoning is not None:
            config: Dict[str, Any] = {}
            if reasoning.effort is not None:
                config["effort"] = reasoning.effort
            elif reasoning.budget_tokens is not None:
                config["effort"] = budget_to_effort(reasoning.budget_tokens)
                ctx.warn(WarningCode.UNMAPPED_PARAMETER,
                         f"thinking budget {reasoning.budget_tokens} approximated as reasoning effort",
                         "$.reasoning.budget_tokens")
            if reasoning.enabled is False:
                warn_unmapped(ctx, "disabling reasoning", TARGET, "$.reasoning.enabled")
            else:
                out["reasoning"] = config
        if request.cache is not None:
            warn_unmapped(ctx, "cache", TARGET, "$.cache")

    def config_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        extensions: Dict[str, Any] = {}
        gen: Dict[str, Any] = {field: body[field] for field in ("temperature", "top_p") if body.get(field) is not None}
        if body.get("max_output_tokens") is not None:
            gen["max_tokens"] = body["max_output_tokens"]
        if body.get("top_logprobs") is not None:
            gen["logprobs"] = LogprobsConfig(enabled=True, top_logprobs=body["top_logprobs"])
        if gen:
            result["generation"] = GenerationConfig(**gen)

        text = body.get("text")
        if text is not None:
            text = expect_object(text, "$.text")
            fmt = text.get("format")
            if fmt is not None:
                fmt = expect_object(fmt, "$.text.format")
                result["response_format"] = ResponseFormatConfig(
                    kind=require(fmt, "type", "$.text.format", str),
                    json_schema=fmt.get("schema"),
                    schema_name=fmt.get("name"),
                    strict=fmt.get("strict"),
                )
                inner = {key: value for key, value in fmt.items() if key not in ("type", "schema", "name", "strict")}
                if inner:
                    extensions["text"] = {"format": inner}
            other = {key: value for key, value in text.items() if key != "format"}
            if other:
                extensions.setdefault("text", {}).update(other)

        if body.get("stream") is not None:
            result["stream"] = StreamConfig(enabled=bool(body["stream"]))

        reasoning = body.get("reasoning")
        if reasoning is not None:
            reasoning = expect_object(reasoning, "$.reasoning")
            effort = reasoning.get("effort")
            if effort in EFFORTS:
                result["reasoning"] = ReasoningConfig(effort=effort)
            else:
                result["reasoning"] = ReasoningConfig(enabled=True)
            inner = {key: value for key, value in reasoning.items() if key != "effort" or effort not in EFFORTS}
            if inner:
                extensions["reasoning"] = inner

        result[SHAPE_KEY] = {}
        result["__extensions__"] = extensions
        return result


# ═══════════════════════════════════════════════════════════════════════════
# USAGE
# ═══════════════════════════════════════════════════════════════════════════

def usage_from_provider(raw: Any, ctx: ConversionContext, path: str) -> UsageInfo:
    raw = expect_object(raw, path)
    input_details = raw.get("input_tokens_details") or {}
    output_details = raw.get("output_tokens_details") or {}
    usage = {
        "prompt_tokens": raw.get("input_tokens") or 0,
        "completion_tokens": raw.get("output_tokens") or 0,
        "cached_tokens": input_details.get("cached_tokens"),
        "reasoning_tokens": output_details.get("reasoning_tokens"),
    }
    extras = collect_extras(
        ctx, raw, {"input_tokens", "output_tokens", "total_tokens"}, path,
        nested={"input_tokens_details": {"cached_tokens"}, "output_tokens_details": {"reasoning_tokens"}},
    ) or {}
    total = raw.get("total_tokens")
    if total is not None and total != usage["prompt_tokens"] + usage["completion_tokens"] and ctx.preserve:
        extras["total_tokens"] = total
    return UsageInfo(**usage, provider_metadata=pack(ctx, NS, extras))


def usage_to_provider(usage: UsageInfo, ctx: ConversionContext) -> Dict[str, Any]:
    out: Dict[str, Any] = {"input_tokens": usage.prompt_tokens}
    if usage.cached_tokens is not None:
        out["input_tokens_details"] = {"cached_tokens": usage.cached_tokens}
    out["output_tokens"] = usage.completion_tokens
    if usage.reasoning_tokens is not None:
        out["output_tokens_details"] = {"reasoning_tokens": usage.reasoning_tokens}
    out["total_tokens"] = usage.total_tokens
    return restore(ctx, out, usage.provider_metadata, NS)


def request_system_item(ctx: ConversionContext, system: SystemMessage) -> bool:
    """Whether the system prompt came from a leading input item rather than ``instructions``."""
    return bool(shape(ctx, _custom(system), NS).get("system_item"))


__all__ = [
    "ITEM_PREFIXES",
    "NS",
    "OPAQUE_ITEMS",
    "ResponsesConfigOps",
    "ResponsesContentOps",
    "ResponsesMessageOps",
    "ResponsesToolOps",
    "finish_fields",
    "finish_from_provider",
    "finish_to_provider",
    "item_id",
    "request_system_item",
    "usage_from_provider",
    "usage_to_provider",
]
