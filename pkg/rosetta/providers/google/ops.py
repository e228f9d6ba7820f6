"""Ops for the Google GenAI (generateContent) format.

Google carries no tool-call ids in most payloads. Calls get request-wide
synthetic ids (``call_<n>``) on input; a functionResponse without an id is
matched to the oldest unanswered call with the same name. On output ids are
written only when the source payload had them, and result names are looked
up from the calls earlier in the conversation.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from datetime import datetime, timezone
from typing import Any, Deque, Dict, List, Optional, Tuple

from dateutil import parser as date_parser

from rosetta.config.defaults import EFFORT_BUDGETS
from rosetta.converters.base import ConfigOps, ContentOps, MessageOps, ToolOps
from rosetta.converters.context import ConversionContext, WarningCode
from rosetta.converters.errors import MalformedInput
from rosetta.converters.metadata import (
    HOSTED_TOOLS_KEY,
    SHAPE_KEY,
    collect_extras,
    expect_list,
    expect_object,
    extension_value,
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
    ResponseFormatConfig,
    SystemMessage,
    TextPart,
    ToolCallPart,
    ToolChoice,
    ToolDefinition,
    ToolMessage,
    ToolResultPart,
    UsageInfo,
    UserMessage,
)
from rosetta.providers.common import drop_part, joined_text, warn_unmapped

NS = ProviderFormat.GOOGLE.value
TARGET = "Google GenAI"

FINISH_REASONS = {
    "STOP": "stop",
    "MAX_TOKENS": "length",
    "SAFETY": "content_filter",
    "RECITATION": "content_filter",
    "BLOCKLIST": "content_filter",
    "PROHIBITED_CONTENT": "content_filter",
    "SPII": "content_filter",
    "IMAGE_SAFETY": "content_filter",
    "MALFORMED_FUNCTION_CALL": "error",
}
FINISH_INVERSE = {
    "stop": "STOP",
    "tool_calls": "STOP",
    "length": "MAX_TOKENS",
    "content_filter": "SAFETY",
    "error": "MALFORMED_FUNCTION_CALL",
    "other": "OTHER",
}

TOOL_MODES = {"AUTO": "auto", "NONE": "none", "ANY": "any"}
TOOL_MODES_INVERSE = {"auto": "AUTO", "none": "NONE", "any": "ANY", "tool": "ANY"}

# Schema keywords the functionDeclarations dialect accepts
SCHEMA_KEYWORDS = {
    "type", "format", "title", "description", "nullable", "enum", "maxItems", "minItems", "properties",
    "required", "minProperties", "maxProperties", "minLength", "maxLength", "pattern", "example",
    "anyOf", "propertyOrdering", "default", "items", "minimum", "maximum",
}


def _custom(message) -> Optional[Dict[str, Any]]:
    return message.metadata.custom


def finish_from_provider(raw: Any, has_calls: bool) -> Tuple[str, Dict[str, Any]]:
    if raw is None:
        return ("tool_calls" if has_calls else "other"), {"finish_reason": None}
    reason = FINISH_REASONS.get(raw, "other")
    if reason == "stop" and has_calls:
        reason = "tool_calls"
    if FINISH_INVERSE[reason] != raw:
        return reason, {"finish_reason": raw}
    return reason, {}


def finish_to_provider(ctx: ConversionContext, reason: str, meta: Optional[Dict[str, Any]]) -> Optional[str]:
    return shape(ctx, meta, NS).get("finish_reason", FINISH_INVERSE[reason])


def timestamp_from_provider(raw: Any) -> int:
    if not isinstance(raw, str):
        return 0
    try:
        return int(date_parser.isoparse(raw).timestamp())
    except (ValueError, OverflowError):
        return 0


def timestamp_to_provider(created: int) -> str:
    return datetime.fromtimestamp(created, timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def normalize_schema(schema: Any) -> Any:
    """Lower-case OpenAPI type names (``OBJECT`` -> ``object``)."""
    if isinstance(schema, dict):
        out = {}
        for key, value in schema.items():
            if key == "type" and isinstance(value, str):
                out[key] = value.lower()
            else:
                out[key] = normalize_schema(value)
        return out
    if isinstance(schema, list):
        return [normalize_schema(item) for item in schema]
    return schema


def sanitize_schema(schema: Any, ctx: ConversionContext, path: str) -> Any:
    """Drop keywords Google rejects; ``type: [T, "null"]`` becomes ``type: T, nullable: true``."""
    if not isinstance(schema, dict):
        return schema
    out: Dict[str, Any] = {}
    for key, value in schema.items():
        if key == "type" and isinstance(value, list):
            kinds = [kind for kind in value if kind != "null"]
            if len(kinds) == 1:
                out["type"] = kinds[0]
                if "null" in value:
                    out["nullable"] = True
                continue
        if key not in SCHEMA_KEYWORDS:
            ctx.warn(WarningCode.UNMAPPED_PARAMETER, f"schema keyword {key!r} is not supported by {TARGET}", f"{path}.{key}")
            continue
        if key == "properties" and isinstance(value, dict):
            out[key] = {name: sanitize_schema(sub, ctx, f"{path}.properties.{name}") for name, sub in value.items()}
        elif key == "items":
            out[key] = sanitize_schema(value, ctx, f"{path}.items")
        elif key == "anyOf" and isinstance(value, list):
            out[key] = [sanitize_schema(sub, ctx, f"{path}.anyOf[{index}]") for index, sub in enumerate(value)]
        else:
            out[key] = value
    return out


# ═══════════════════════════════════════════════════════════════════════════
# CONTENT
# ═══════════════════════════════════════════════════════════════════════════

_PART_DATA_KEYS = {"inlineData": {"mimeType", "data"}, "fileData": {"mimeType", "fileUri"}}


class GoogleContentOps(ContentOps):
    """parts[] entries"""

    def part_to_provider(self, part: Any, ctx: ConversionContext, path: str) -> Optional[Dict[str, Any]]:
        meta = part.provider_metadata
        hints = shape(ctx, meta, NS)
        if isinstance(part, TextPart):
            out: Dict[str, Any] = {"text": part.text}
        elif isinstance(part, ReasoningPart):
            out = {"text": part.text, "thought": True}
            if part.signature is not None:
                out["thoughtSignature"] = part.signature
        elif isinstance(part, (ImagePart, AudioPart, FilePart)):
            out = self.media_to_provider(part)
            if isinstance(part, ImagePart) and part.detail is not None:
                warn_unmapped(ctx, "image detail", TARGET, f"{path}.detail")
            if isinstance(part, FilePart) and part.filename is not None:
                warn_unmapped(ctx, "file name", TARGET, f"{path}.filename")
        elif isinstance(part, ToolCallPart):
            call: Dict[str, Any] = {"name": part.tool_name, "args": dict(part.tool_input)}
            if hints.get("id"):
                call["id"] = part.tool_call_id
            out = {"functionCall": call}
        else:
            drop_part(ctx, part.type, TARGET, path)
            return None
        return restore(ctx, out, meta, NS)

    @staticmethod
    def media_to_provider(part: Any) -> Dict[str, Any]:
        default_type = {"image": "image/png", "audio": "audio/wav"}.get(part.type, "application/octet-stream")
        if getattr(part, "data", None) is not None:
            return {"inlineData": {"mimeType": part.media_type or default_type, "data": part.data}}
        data: Dict[str, Any] = {"fileUri": part.url}
        if part.media_type is not None:
            data["mimeType"] = part.media_type
        return {"fileData": data}

    def result_to_provider(self, part: ToolResultPart, name: str, ctx: ConversionContext, path: str) -> Dict[str, Any]:
        hints = shape(ctx, part.provider_metadata, NS)
        for index, inner in enumerate(part.content):
            if not isinstance(inner, TextPart):
                drop_part(ctx, inner.type, f"{TARGET} function responses", f"{path}.content[{index}]")
        text = joined_text(part.content)
        if "raw_response" in hints:
            response = hints["raw_response"]
        elif part.is_error:
            response = {"error": text}
        elif hints.get("response_form") == "result":
            response = {"result": text}
        else:
            try:
                parsed = json.loads(text)
            except ValueError:
                parsed = None
            response = parsed if isinstance(parsed, dict) else {"result": text}
        body: Dict[str, Any] = {"name": name, "response": response}
        if hints.get("id"):
            body["id"] = part.tool_call_id
        return restore(ctx, {"functionResponse": body}, part.provider_metadata, NS)

    def part_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> List[Any]:
        raw = expect_object(raw, path)
        if "text" in raw and raw.get("thought"):
            signature = raw.get("thoughtSignature")
            if signature and not ctx.preserve:
                ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, "thought signature dropped", f"{path}.thoughtSignature")
            extras = collect_extras(ctx, raw, {"text", "thought", "thoughtSignature"}, path)
            return [ReasoningPart(
                text=require(raw, "text", path, str),
                signature=signature if ctx.preserve else None,
                provider_metadata=pack(ctx, NS, extras),
            )]
        if "text" in raw:
            extras = collect_extras(ctx, raw, {"text"}, path)
            return [TextPart(text=require(raw, "text", path, str), provider_metadata=pack(ctx, NS, extras))]
        for key, known in _PART_DATA_KEYS.items():
            if key in raw:
                data = require(raw, key, path, dict)
                extras = collect_extras(ctx, raw, set(), path, nested={key: known})
                return [self.media_from_provider(key, data, pack(ctx, NS, extras), f"{path}.{key}")]
        return []

    @staticmethod
    def media_from_provider(key: str, data: Dict[str, Any], metadata: Any, path: str) -> Any:
        media_type = data.get("mimeType")
        family = (media_type or "").split("/")[0]
        if key == "inlineData":
            payload = require(data, "data", path, str)
            if family == "image":
                return ImagePart(data=payload, media_type=media_type, provider_metadata=metadata)
            if family == "audio":
                return AudioPart(data=payload, media_type=media_type, provider_metadata=metadata)
            return FilePart(data=payload, media_type=media_type, provider_metadata=metadata)
        uri = require(data, "fileUri", path, str)
        if family == "image":
            return ImagePart(url=uri, media_type=media_type, provider_metadata=metadata)
        return FilePart(url=uri, media_type=media_type, provider_metadata=metadata)

    def citation_to_provider(self, part: CitationPart, ctx: ConversionContext) -> Dict[str, Any]:
        out: Dict[str, Any] = {}
        if part.span is not None:
            out["startIndex"] = part.span.start
            out["endIndex"] = part.span.end
        if part.url is not None:
            out["uri"] = part.url
        if part.quoted_text is not None:
            warn_unmapped(ctx, "citation quoted text", TARGET, "$.citations")
        return restore(ctx, out, part.provider_metadata, NS)

    def citation_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> CitationPart:
        raw = expect_object(raw, path)
        span = None
        if isinstance(raw.get("startIndex"), int) and isinstance(raw.get("endIndex"), int):
            span = CitationSpan(start=raw["startIndex"], end=raw["endIndex"])
        extras = collect_extras(ctx, raw, {"startIndex", "endIndex", "uri"}, path,
                                designated={"title", "license", "publicationDate"})
        return CitationPart(url=raw.get("uri"), span=span, provider_metadata=pack(ctx, NS, extras))


# ═══════════════════════════════════════════════════════════════════════════
# MESSAGES
# ═══════════════════════════════════════════════════════════════════════════

_OPAQUE = "opaque_parts"
_CALL_KEYS = {"id", "name", "args"}
_RESULT_KEYS = {"id", "name", "response"}


class GoogleMessageOps(MessageOps):
    """contents[] with user/model roles"""

    @property
    def content(self) -> GoogleContentOps:
        return self.converter.content_ops

    # -- output -----------------------------------------------------------------

    def messages_to_provider(self, messages: List[Any], ctx: ConversionContext) -> List[Any]:
        names: Dict[str, str] = {}
        for message in messages:
            for part in message.content:
                if isinstance(part, ToolCallPart):
                    names[part.tool_call_id] = part.tool_name
        out: List[Dict[str, Any]] = []
        opaque: List[Tuple[Dict[str, Any], list]] = []
        previous = None
        for index, message in enumerate(messages):
            path = f"$.messages[{index}]"
            hints = shape(ctx, _custom(message), NS)
            parts = self.parts_to_provider(message, names, ctx, path)
            if isinstance(message, AssistantMessage):
                role = "model"
            elif isinstance(message, SystemMessage):
                ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE,
                         "system message inside the conversation sent as user text", path)
                role = "user"
            else:
                role = hints.get("role", "user")
            merge = hints.get("merge", isinstance(previous, ToolMessage))
            previous = message
            if role != "model" and merge and out and out[-1]["role"] == role:
                out[-1]["parts"].extend(parts)
                continue
            item = {"role": role, "parts": parts}
            if hints.get(_OPAQUE):
                opaque.append((item, hints[_OPAQUE]))
            out.append(restore(ctx, item, _custom(message), NS))
        for item, pairs in opaque:
            insert_hosted(item["parts"], pairs)
        return out

    def parts_to_provider(self, message: Any, names: Dict[str, str], ctx: ConversionContext, path: str) -> List[Any]:
        parts = []
        for index, part in enumerate(message.content):
            part_path = f"{path}.content[{index}]"
            if isinstance(part, ToolResultPart):
                name = shape(ctx, part.provider_metadata, NS).get("name") or names.get(part.tool_call_id)
                if name is None:
                    ctx.warn(WarningCode.UNMAPPED_PARAMETER,
                             f"no tool call {part.tool_call_id!r} precedes this result; its id is used as the name",
                             part_path)
                    name = part.tool_call_id
                parts.append(self.content.result_to_provider(part, name, ctx, part_path))
                continue
            encoded = self.content.part_to_provider(part, ctx, part_path)
            if encoded is not None:
                parts.append(encoded)
        return parts

    def system_to_provider(self, system: SystemMessage, ctx: ConversionContext) -> Dict[str, Any]:
        parts = []
        for index, part in enumerate(system.content):
            encoded = self.content.part_to_provider(part, ctx, f"$.system.content[{index}]")
            if encoded is not None:
                parts.append(encoded)
        out: Dict[str, Any] = {"parts": parts}
        if shape(ctx, _custom(system), NS).get("role_entry"):
            out["role"] = "system"
        return restore(ctx, out, _custom(system), NS)

    # -- input ------------------------------------------------------------------

    def system_from_provider(self, raw: Any, ctx: ConversionContext, path: str, role_entry: bool = False) -> SystemMessage:
        raw = expect_object(raw, path)
        parts = []
        for index, item in enumerate(expect_list(raw.get("parts") or [], f"{path}.parts")):
            parts.extend(self.content.part_from_provider(item, ctx, f"{path}.parts[{index}]"))
        extras = collect_extras(ctx, raw, {"parts"} | ({"role"} if role_entry else set()), path, designated={"role"})
        hints = {"role_entry": True} if role_entry else None
        return SystemMessage(content=parts, metadata=MessageMetadata(custom=pack(ctx, NS, extras, hints)))

    def messages_from_provider(self, raw: List[Any], ctx: ConversionContext, path: str) -> List[Any]:
        pending: Dict[str, Deque[str]] = defaultdict(deque)
        messages: List[Any] = []
        for index, item in enumerate(raw):
            messages.extend(self.content_from_provider(item, ctx, f"{path}[{index}]", messages, pending))
        return messages

    def content_from_provider(self, raw: Any, ctx: ConversionContext, path: str, before: List[Any],
                              pending: Dict[str, Deque[str]]) -> List[Any]:
        raw = expect_object(raw, path)
        role = raw.get("role", "user")
        if role not in ("user", "model", "function"):
            raise MalformedInput(f"unsupported content role {role!r}", f"{path}.role")
        extras = collect_extras(ctx, raw, {"role", "parts"}, path)
        opaque = []
        runs: List[Tuple[str, List[Any]]] = []
        for index, item in enumerate(expect_list(require(raw, "parts", path), f"{path}.parts")):
            part_path = f"{path}.parts[{index}]"
            item = expect_object(item, part_path)
            if "functionCall" in item:
                parts, kind = [self.call_from_provider(item, ctx, part_path, pending)], "content"
            elif "functionResponse" in item:
                parts, kind = [self.result_from_provider(item, ctx, part_path, pending)], "tool"
            else:
                parts, kind = self.content.part_from_provider(item, ctx, part_path), "content"
                if not parts:
                    if ctx.preserve:
                        opaque.append([index, item])
                    else:
                        ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE,
                                 f"part with keys {sorted(item)} has no IR mapping", part_path)
                    continue
            if runs and runs[-1][0] == kind:
                runs[-1][1].extend(parts)
            else:
                runs.append((kind, list(parts)))
        if not runs:
            runs.append(("content", []))

        out: List[Any] = []
        previous = before[-1] if before else None
        for position, (kind, parts) in enumerate(runs):
            hints: Dict[str, Any] = {}
            merged = position > 0
            if role != "model" and merged != isinstance(previous, ToolMessage):
                hints["merge"] = merged
            if role == "function":
                hints["role"] = "function"
            if position == 0 and opaque:
                hints[_OPAQUE] = opaque
            metadata = MessageMetadata(custom=pack(ctx, NS, extras if position == 0 else None, hints))
            if kind == "tool":
                message = ToolMessage(content=parts, metadata=metadata)
            elif role == "model":
                message = AssistantMessage(content=parts, metadata=metadata)
            else:
                message = UserMessage(content=parts, metadata=metadata)
            out.append(message)
            previous = message
        return out

    def call_from_provider(self, raw: Dict[str, Any], ctx: ConversionContext, path: str,
                           pending: Dict[str, Deque[str]]) -> ToolCallPart:
        call = require(raw, "functionCall", path, dict)
        name = require(call, "name", f"{path}.functionCall", str)
        call_id = call.get("id") or ctx.next_call_id()
        pending[name].append(call_id)
        hints = {"id": True} if call.get("id") else None
        extras = collect_extras(ctx, raw, set(), path, nested={"functionCall": _CALL_KEYS})
        return ToolCallPart(
            tool_call_id=call_id,
            tool_name=name,
            tool_input=expect_object(call.get("args", {}), f"{path}.functionCall.args"),
            provider_metadata=pack(ctx, NS, extras, hints),
        )

    def result_from_provider(self, raw: Dict[str, Any], ctx: ConversionContext, path: str,
                             pending: Dict[str, Deque[str]]) -> ToolResultPart:
        body = require(raw, "functionResponse", path, dict)
        name = require(body, "name", f"{path}.functionResponse", str)
        hints: Dict[str, Any] = {}
        if body.get("id"):
            call_id = body["id"]
            hints["id"] = True
            if call_id in pending[name]:
                pending[name].remove(call_id)
        elif pending[name]:
            call_id = pending[name].popleft()
        else:
            call_id = ctx.next_call_id()
            hints["name"] = name
        response = body.get("response", {})
        is_error = None
        if isinstance(response, dict) and set(response) == {"result"} and isinstance(response["result"], str):
            text = response["result"]
            try:
                if isinstance(json.loads(text), dict):
                    hints["response_form"] = "result"
            except ValueError:
                pass
        elif isinstance(response, dict) and set(response) == {"error"} and isinstance(response["error"], str):
            text, is_error = response["error"], True
        else:
            text = json.dumps(response, ensure_ascii=False, separators=(",", ":"))
            if not isinstance(response, dict):
                hints["raw_response"] = response
        extras = collect_extras(ctx, raw, set(), path, nested={"functionResponse": _RESULT_KEYS})
        return ToolResultPart(
            tool_call_id=call_id,
            content=[TextPart(text=text)],
            is_error=is_error,
            provider_metadata=pack(ctx, NS, extras, hints),
        )


# ═══════════════════════════════════════════════════════════════════════════
# TOOLS
# ═══════════════════════════════════════════════════════════════════════════

_DECLARATION_KEYS = {"name", "description", "parameters", "parametersJsonSchema"}


class GoogleToolOps(ToolOps):
    """tools[].functionDeclarations and toolConfig.functionCallingConfig"""

    def tools_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        declarations = []
        foreign = ctx.source_format != ProviderFormat.GOOGLE
        for index, tool in enumerate(request.tools or []):
            path = f"$.tools[{index}]"
            if tool.tool_type != "function":
                drop_part(ctx, f"{tool.tool_type} tool", TARGET, path)
                continue
            hints = shape(ctx, tool.provider_metadata, NS)
            declaration: Dict[str, Any] = {"name": tool.name}
            if tool.description is not None:
                declaration["description"] = tool.description
            if "raw_parameters" in hints:
                declaration[hints.get("parameters_key", "parameters")] = hints["raw_parameters"]
            elif tool.parameters is not None:
                key = hints.get("parameters_key", "parameters")
                parameters = tool.parameters
                if foreign and key == "parameters":
                    parameters = sanitize_schema(parameters, ctx, f"{path}.parameters")
                declaration[key] = parameters
            declarations.append(restore(ctx, declaration, tool.provider_metadata, NS))
        groups = extension_value(request.provider_extensions, NS, SHAPE_KEY, {}).get("tool_groups")
        tools: List[Any] = []
        if declarations:
            if groups and sum(groups) == len(declarations):
                offset = 0
                for size in groups:
                    tools.append({"functionDeclarations": declarations[offset: offset + size]})
                    offset += size
            else:
                tools.append({"functionDeclarations": declarations})
        insert_hosted(tools, hosted_tools(ctx, request.provider_extensions, NS))
        if tools:
            out["tools"] = tools

        choice = request.tool_choice
        if choice is not None:
            config: Dict[str, Any] = {"mode": TOOL_MODES_INVERSE[choice.mode]}
            if choice.mode == "tool":
                config["allowedFunctionNames"] = [choice.tool_name]
            out["toolConfig"] = {"functionCallingConfig": config}
        if request.tool_call_config is not None and request.tool_call_config.parallel_tool_calls is not None:
            warn_unmapped(ctx, "parallel_tool_calls", TARGET, "$.tool_call_config.parallel_tool_calls")

    def tools_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        tools, hosted, groups = [], [], []
        for index, raw in enumerate(expect_list(body.get("tools") or [], "$.tools")):
            path = f"$.tools[{index}]"
            raw = expect_object(raw, path)
            if "functionDeclarations" not in raw:
                hosted.append([index, raw])
                continue
            group = expect_list(raw["functionDeclarations"], f"{path}.functionDeclarations")
            groups.append(len(group))
            for position, declaration in enumerate(group):
                tools.append(self.declaration_from_provider(declaration, ctx, f"{path}.functionDeclarations[{position}]"))
        if tools:
            result["tools"] = tools
        if hosted:
            result[HOSTED_TOOLS_KEY] = hosted
        if len(groups) > 1:
            result[SHAPE_KEY] = {"tool_groups": groups}

        config = (body.get("toolConfig") or {}).get("functionCallingConfig")
        if config is not None:
            config = expect_object(config, "$.toolConfig.functionCallingConfig")
            mode = config.get("mode", "AUTO")
            allowed = config.get("allowedFunctionNames")
            extra = {key: value for key, value in config.items() if key not in ("mode", "allowedFunctionNames")}
            if mode == "ANY" and isinstance(allowed, list) and len(allowed) == 1:
                result["tool_choice"] = ToolChoice(mode="tool", tool_name=allowed[0])
            elif mode in TOOL_MODES:
                result["tool_choice"] = ToolChoice(mode=TOOL_MODES[mode])
                if allowed is not None:
                    extra["allowedFunctionNames"] = allowed
            else:
                extra.update(mode=mode)
                if allowed is not None:
                    extra["allowedFunctionNames"] = allowed
            if extra:
                result["__extensions__"] = {"toolConfig": {"functionCallingConfig": extra}}
        return result

    def declaration_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> ToolDefinition:
        raw = expect_object(raw, path)
        key = "parametersJsonSchema" if "parametersJsonSchema" in raw else "parameters"
        parameters = raw.get(key)
        hints: Dict[str, Any] = {}
        if key != "parameters":
            hints["parameters_key"] = key
        normalized = normalize_schema(parameters) if parameters is not None else None
        if normalized != parameters:
            hints["raw_parameters"] = parameters
        extras = collect_extras(ctx, raw, _DECLARATION_KEYS, path)
        return ToolDefinition(
            name=require(raw, "name", path, str),
            description=raw.get("description"),
            parameters=normalized,
            provider_metadata=pack(ctx, NS, extras, hints),
        )


# ═══════════════════════════════════════════════════════════════════════════
# CONFIG
# ═══════════════════════════════════════════════════════════════════════════

_GENERATION_FIELDS = {
    "temperature": "temperature",
    "topP": "top_p",
    "topK": "top_k",
    "maxOutputTokens": "max_tokens",
    "stopSequences": "stop_sequences",
    "presencePenalty": "presence_penalty",
    "frequencyPenalty": "frequency_penalty",
    "seed": "seed",
}
_CONFIG_KEYS = set(_GENERATION_FIELDS) | {
    "responseLogprobs", "logprobs", "responseMimeType", "responseSchema", "responseJsonSchema", "thinkingConfig",
}


class GoogleConfigOps(ConfigOps):
    """generationConfig envelope"""

    def config_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        hints = extension_value(request.provider_extensions, NS, SHAPE_KEY, {})
        config: Dict[str, Any] = {}
        gen = request.generation
        if gen is not None:
            for wire, field in _GENERATION_FIELDS.items():
                value = getattr(gen, field)
                if value is not None:
                    config[wire] = list(value) if field == "stop_sequences" else value
            if gen.logit_bias is not None:
                warn_unmapped(ctx, "logit_bias", TARGET, "$.generation.logit_bias")
            if gen.logprobs is not None:
                config["responseLogprobs"] = gen.logprobs.enabled
                if gen.logprobs.top_logprobs is not None:
                    config["logprobs"] = gen.logprobs.top_logprobs
        fmt = request.response_format
        if fmt is not None:
            config["responseMimeType"] = "text/plain" if fmt.kind == "text" else "application/json"
            if fmt.json_schema is not None:
                config[hints.get("schema_key", "responseJsonSchema")] = fmt.json_schema
            for field in ("schema_name", "strict"):
                if getattr(fmt, field) is not None:
                    warn_unmapped(ctx, f"response_format {field}", TARGET, f"$.response_format.{field}")
        reasoning = request.reasoning
        if reasoning is not None:
            config["thinkingConfig"] = {"thinkingBudget": self.budget_to_provider(reasoning, ctx)}
        if config or hints.get("generation_config"):
            out["generationConfig"] = config
        if request.cache is not None:
            warn_unmapped(ctx, "request-level cache", TARGET, "$.cache")

    @staticmethod
    def budget_to_provider(reasoning: ReasoningConfig, ctx: ConversionContext) -> int:
        if reasoning.enabled is False:
            return 0
        if reasoning.budget_tokens is not None:
            return reasoning.budget_tokens
        if reasoning.effort is not None:
            budget = EFFORT_BUDGETS[reasoning.effort]
            ctx.warn(WarningCode.UNMAPPED_PARAMETER,
                     f"reasoning effort {reasoning.effort!r} approximated as a thinking budget of {budget}",
                     "$.reasoning.effort")
            return budget
        return -1

    def config_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        hints: Dict[str, Any] = {}
        extensions: Dict[str, Any] = {}
        config = body.get("generationConfig")
        if config is None:
            result[SHAPE_KEY], result["__extensions__"] = hints, extensions
            return result
        config = expect_object(config, "$.generationConfig")
        if not config:
            hints["generation_config"] = True
        gen = {field: config[wire] for wire, field in _GENERATION_FIELDS.items() if config.get(wire) is not None}
        if config.get("responseLogprobs") is not None or config.get("logprobs") is not None:
            gen["logprobs"] = LogprobsConfig(
                enabled=bool(config.get("responseLogprobs", True)), top_logprobs=config.get("logprobs"),
            )
        if gen:
            result["generation"] = GenerationConfig(**gen)

        mime = config.get("responseMimeType")
        if mime is not None:
            schema_key = "responseSchema" if "responseSchema" in config else "responseJsonSchema"
            schema = config.get(schema_key)
            if schema is not None:
                kind = "json_schema"
                if schema_key == "responseSchema":
                    hints["schema_key"] = schema_key
            else:
                kind = "json_object" if mime == "application/json" else "text"
            if mime not in ("application/json", "text/plain"):
                extensions.setdefault("generationConfig", {})["responseMimeType"] = mime
            result["response_format"] = ResponseFormatConfig(kind=kind, json_schema=schema)

        thinking = config.get("thinkingConfig")
        if thinking is not None:
            thinking = expect_object(thinking, "$.generationConfig.thinkingConfig")
            budget = thinking.get("thinkingBudget")
            if budget is not None:
                if budget == 0:
                    result["reasoning"] = ReasoningConfig(enabled=False)
                elif budget < 0:
                    result["reasoning"] = ReasoningConfig(enabled=True)
                else:
                    result["reasoning"] = ReasoningConfig(enabled=True, budget_tokens=budget)
            inner = {key: value for key, value in thinking.items() if key != "thinkingBudget"}
            if inner:
                extensions.setdefault("generationConfig", {})["thinkingConfig"] = inner

        unknown = {key: value for key, value in config.items() if key not in _CONFIG_KEYS}
        if unknown:
            extensions.setdefault("generationConfig", {}).update(unknown)
        result[SHAPE_KEY] = hints
        result["__extensions__"] = extensions
        return result


# ═══════════════════════════════════════════════════════════════════════════
# USAGE
# ═══════════════════════════════════════════════════════════════════════════

_USAGE_KNOWN = {
    "promptTokenCount", "candidatesTokenCount", "thoughtsTokenCount", "cachedContentTokenCount", "totalTokenCount",
}
_USAGE_DESIGNATED = {
    "promptTokensDetails", "candidatesTokensDetails", "cacheTokensDetails", "toolUsePromptTokenCount",
    "toolUsePromptTokensDetails", "trafficType",
}


def usage_from_provider(raw: Any, ctx: ConversionContext, path: str) -> UsageInfo:
    raw = expect_object(raw, path)
    thoughts = raw.get("thoughtsTokenCount")
    usage = {
        "prompt_tokens": raw.get("promptTokenCount") or 0,
        "completion_tokens": (raw.get("candidatesTokenCount") or 0) + (thoughts or 0),
        "reasoning_tokens": thoughts,
        "cached_tokens": raw.get("cachedContentTokenCount"),
    }
    extras = collect_extras(ctx, raw, _USAGE_KNOWN, path, designated=_USAGE_DESIGNATED) or {}
    total = raw.get("totalTokenCount")
    if total is not None and total != usage["prompt_tokens"] + usage["completion_tokens"] and ctx.preserve:
        extras["totalTokenCount"] = total
    hints = {"candidates_absent": True} if "candidatesTokenCount" not in raw else None
    return UsageInfo(**usage, provider_metadata=pack(ctx, NS, extras, hints))


def usage_to_provider(usage: UsageInfo, ctx: ConversionContext) -> Dict[str, Any]:
    out: Dict[str, Any] = {"promptTokenCount": usage.prompt_tokens}
    if not shape(ctx, usage.provider_metadata, NS).get("candidates_absent"):
        out["candidatesTokenCount"] = usage.completion_tokens - (usage.reasoning_tokens or 0)
    out["totalTokenCount"] = usage.total_tokens
    if usage.reasoning_tokens is not None:
        out["thoughtsTokenCount"] = usage.reasoning_tokens
    if usage.cached_tokens is not None:
        out["cachedContentTokenCount"] = usage.cached_tokens
    return restore(ctx, out, usage.provider_metadata, NS)


__all__ = [
    "FINISH_INVERSE",
    "FINISH_REASONS",
    "GoogleConfigOps",
    "GoogleContentOps",
    "GoogleMessageOps",
    "GoogleToolOps",
    "NS",
    "finish_from_provider",
    "finish_to_provider",
    "normalize_schema",
    "sanitize_schema",
    "timestamp_from_provider",
    "timestamp_to_provider",
    "usage_from_provider",
    "usage_to_provider",
]
