"""Ops for the OpenAI Chat Completions format."""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from rosetta.config.defaults import budget_to_effort
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

NS = ProviderFormat.OPENAI_CHAT.value
TARGET = "OpenAI Chat"

FINISH_REASONS = {
    "stop": "stop",
    "length": "length",
    "tool_calls": "tool_calls",
    "content_filter": "content_filter",
    "function_call": "tool_calls",
}
FINISH_INVERSE = {
    "stop": "stop",
    "length": "length",
    "tool_calls": "tool_calls",
    "content_filter": "content_filter",
    "error": "stop",
    "other": "stop",
}


def writes_reasoning(ctx: ConversionContext, hints: Dict[str, Any]) -> bool:
    """reasoning_content is a Chat-compatible extension: written for Chat-origin IR only."""
    return ctx.source_format == ProviderFormat.OPENAI_CHAT or bool(hints.get("reasoning_content"))


TOOL_CHOICE_MODES = {"none": "none", "auto": "auto", "required": "any"}
TOOL_CHOICE_INVERSE = {"none": "none", "auto": "auto", "any": "required"}

EFFORTS = ("low", "medium", "high")


def _custom(message) -> Optional[Dict[str, Any]]:
    return message.metadata.custom


def _metadata(ctx: ConversionContext, extras=None, hints=None) -> MessageMetadata:
    return MessageMetadata(custom=pack(ctx, NS, extras, hints))


# ═══════════════════════════════════════════════════════════════════════════
# CONTENT
# ═══════════════════════════════════════════════════════════════════════════

class ChatContentOps(ContentOps):
    """Content parts arrays (user, system, assistant and tool messages)"""

    def part_to_provider(self, part: Any, ctx: ConversionContext, path: str) -> Optional[Dict[str, Any]]:
        meta = part.provider_metadata
        hints = shape(ctx, meta, NS)
        if isinstance(part, TextPart):
            out: Dict[str, Any] = {"type": "text", "text": part.text}
        elif isinstance(part, ImagePart):
            image_url: Dict[str, Any] = {"url": openai_image_url(part)}
            if part.detail is not None:
                image_url["detail"] = part.detail
            out = {"type": "image_url", "image_url": image_url}
        elif isinstance(part, AudioPart):
            audio_format = part.media_type.split("/")[-1]
            out = {"type": "input_audio", "input_audio": {"data": part.data, "format": audio_format}}
        elif isinstance(part, FilePart):
            file: Dict[str, Any] = {}
            if part.data is not None:
                file["file_data"] = openai_file_data(part)
            elif part.url is not None and (hints.get("ref") == "file_id" or not part.url.startswith("http")):
                file["file_id"] = part.url
            else:
                drop_part(ctx, "file-by-URL", TARGET, path)
                return None
            if part.filename is not None:
                file["filename"] = part.filename
            out = {"type": "file", "file": file}
        elif isinstance(part, RefusalPart):
            out = {"type": "refusal", "refusal": part.reason}
        else:
            drop_part(ctx, part.type, TARGET, path)
            return None
        return restore(ctx, out, meta, NS)

    def part_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> List[Any]:
        raw = expect_object(raw, path)
        kind = raw.get("type")
        if kind == "text":
            text = require(raw, "text", path, str)
            return [TextPart(text=text, provider_metadata=pack(ctx, NS, collect_extras(ctx, raw, {"type", "text"}, path)))]
        if kind == "image_url":
            image_url = require(raw, "image_url", path, dict)
            url = require(image_url, "url", f"{path}.image_url", str)
            extras = collect_extras(ctx, raw, {"type"}, path, nested={"image_url": {"url", "detail"}})
            return [openai_image_from_url(url, image_url.get("detail"), pack(ctx, NS, extras))]
        if kind == "input_audio":
            audio = require(raw, "input_audio", path, dict)
            extras = collect_extras(ctx, raw, {"type"}, path, nested={"input_audio": {"data", "format"}})
            return [AudioPart(
                data=require(audio, "data", f"{path}.input_audio", str),
                media_type=f"audio/{require(audio, 'format', f'{path}.input_audio', str)}",
                provider_metadata=pack(ctx, NS, extras),
            )]
        if kind == "file":
            file = require(raw, "file", path, dict)
            extras = collect_extras(ctx, raw, {"type"}, path, nested={"file": {"file_data", "file_id", "filename"}})
            if file.get("file_data") is None and file.get("file_id") is None:
                raise MalformedInput("file part needs file_data or file_id", f"{path}.file")
            hints = {"ref": "file_id"} if file.get("file_data") is None else None
            return [openai_file_from_fields(
                file.get("file_data"), file.get("file_id"), file.get("filename"), pack(ctx, NS, extras, hints),
            )]
        if kind == "refusal":
            reason = require(raw, "refusal", path, str)
            extras = collect_extras(ctx, raw, {"type", "refusal"}, path)
            return [RefusalPart(reason=reason, provider_metadata=pack(ctx, NS, extras, {"in_content": True}))]
        ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, f"content part type {kind!r} has no IR mapping", path)
        return []

    def content_from_provider(self, content: Any, ctx: ConversionContext, path: str) -> Tuple[List[Any], Dict[str, Any]]:
        """String-or-array content -> parts plus the content-form hint."""
        if isinstance(content, str):
            parts = [TextPart(text=content)]
            return parts, content_form_shape(parts, True)
        parts = []
        for index, raw in enumerate(expect_list(content, path)):
            parts.extend(self.part_from_provider(raw, ctx, f"{path}[{index}]"))
        return parts, content_form_shape(parts, False)

    def content_to_provider(self, parts: List[Any], hints: Dict[str, Any], ctx: ConversionContext, path: str) -> Any:
        if wants_string(parts, hints):
            return parts[0].text
        encoded = []
        for index, part in enumerate(parts):
            item = self.part_to_provider(part, ctx, f"{path}[{index}]")
            if item is not None:
                encoded.append(item)
        return encoded


# ═══════════════════════════════════════════════════════════════════════════
# MESSAGES
# ═══════════════════════════════════════════════════════════════════════════

_SYSTEM_KEYS = {"role", "content"}
_USER_KEYS = {"role", "content"}
_ASSISTANT_KEYS = {"role", "content", "refusal", "tool_calls", "annotations", "reasoning_content"}
_TOOL_KEYS = {"role", "content", "tool_call_id"}


class ChatMessageOps(MessageOps):
    """messages[] with the system prompt as a role entry"""

    @property
    def content(self) -> ChatContentOps:
        return self.converter.content_ops

    @property
    def tools(self) -> "ChatToolOps":
        return self.converter.tool_ops

    def messages_to_provider(self, messages: List[Any], ctx: ConversionContext) -> List[Any]:
        out: List[Any] = []
        for index, message in enumerate(messages):
            out.extend(self.message_to_provider(message, ctx, f"$.messages[{index}]"))
        return out

    def message_to_provider(self, message: Any, ctx: ConversionContext, path: str) -> List[Dict[str, Any]]:
        hints = shape(ctx, _custom(message), NS)
        if isinstance(message, SystemMessage):
            out = {"role": hints.get("role", "system"),
                   "content": self.content.content_to_provider(message.content, hints, ctx, f"{path}.content")}
        elif isinstance(message, UserMessage):
            out = {"role": "user", "content": self.content.content_to_provider(message.content, hints, ctx, f"{path}.content")}
        elif isinstance(message, AssistantMessage):
            out = self.assistant_to_provider(message, ctx, path)
        else:
            return self.tool_results_to_provider(message, ctx, path)
        return [restore(ctx, out, _custom(message), NS)]

    def assistant_to_provider(self, message: AssistantMessage, ctx: ConversionContext, path: str) -> Dict[str, Any]:
        hints = shape(ctx, _custom(message), NS)
        out: Dict[str, Any] = {"role": "assistant"}
        content_parts, tool_calls, annotations, reasoning = [], [], [], []
        refusal: Optional[str] = None
        for index, part in enumerate(message.content):
            part_path = f"{path}.content[{index}]"
            if isinstance(part, ToolCallPart):
                tool_calls.append(self.tools.call_to_provider(part, ctx))
            elif isinstance(part, CitationPart):
                annotations.append(self.citation_to_provider(part, ctx))
            elif isinstance(part, ReasoningPart):
                if writes_reasoning(ctx, hints):
                    reasoning.append(part.text)
                else:
                    drop_part(ctx, "reasoning", TARGET, part_path)
            elif isinstance(part, RefusalPart) and not shape(ctx, part.provider_metadata, NS).get("in_content"):
                refusal = part.reason if refusal is None else refusal + part.reason
            elif isinstance(part, (TextPart, RefusalPart)):
                content_parts.append(part)
            else:
                drop_part(ctx, part.type, TARGET, part_path)
        if reasoning:
            out["reasoning_content"] = "".join(reasoning)
        if content_parts:
            out["content"] = self.content.content_to_provider(content_parts, hints, ctx, f"{path}.content")
        elif not tool_calls and refusal is None:
            out["content"] = ""
        if refusal is not None:
            out["refusal"] = refusal
        if annotations:
            out["annotations"] = annotations
        if tool_calls:
            out["tool_calls"] = tool_calls
        return out

    def tool_results_to_provider(self, message: ToolMessage, ctx: ConversionContext, path: str) -> List[Dict[str, Any]]:
        out = []
        for index, part in enumerate(message.content):
            part_path = f"{path}.content[{index}]"
            if not isinstance(part, ToolResultPart):
                drop_part(ctx, part.type, f"{TARGET} tool messages", part_path)
                continue
            hints = shape(ctx, part.provider_metadata, NS)
            if part.is_error:
                warn_unmapped(ctx, "is_error", TARGET, f"{part_path}.is_error")
            texts = []
            for inner_index, inner in enumerate(part.content):
                if isinstance(inner, TextPart):
                    texts.append(inner)
                else:
                    drop_part(ctx, inner.type, f"{TARGET} tool results", f"{part_path}.content[{inner_index}]")
            content = self.content.content_to_provider(texts, hints, ctx, f"{part_path}.content") if texts else ""
            item = restore(ctx, {"role": "tool", "tool_call_id": part.tool_call_id, "content": content},
                           part.provider_metadata, NS)
            out.append(item)
        if out:
            restore(ctx, out[0], _custom(message), NS)
        return out

    def citation_to_provider(self, part: CitationPart, ctx: ConversionContext) -> Dict[str, Any]:
        citation: Dict[str, Any] = {}
        if part.url is not None:
            citation["url"] = part.url
        if part.span is not None:
            citation["start_index"] = part.span.start
            citation["end_index"] = part.span.end
        return restore(ctx, {"type": "url_citation", "url_citation": citation}, part.provider_metadata, NS)

    def messages_from_provider(self, raw: List[Any], ctx: ConversionContext, path: str) -> List[Any]:
        messages = []
        for index, item in enumerate(raw):
            messages.append(self.message_from_provider(item, ctx, f"{path}[{index}]"))
        return messages

    def message_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> Any:
        raw = expect_object(raw, path)
        role = require(raw, "role", path, str)
        if role in ("system", "developer"):
            parts, hints = self.content.content_from_provider(require(raw, "content", path), ctx, f"{path}.content")
            if role == "developer":
                hints["role"] = "developer"
            extras = collect_extras(ctx, raw, _SYSTEM_KEYS, path)
            return SystemMessage(content=parts, metadata=_metadata(ctx, extras, hints))
        if role == "user":
            parts, hints = self.content.content_from_provider(require(raw, "content", path), ctx, f"{path}.content")
            extras = collect_extras(ctx, raw, _USER_KEYS, path)
            return UserMessage(content=parts, metadata=_metadata(ctx, extras, hints))
        if role == "assistant":
            parts, extras, hints = self.assistant_from_provider(raw, ctx, path)
            return AssistantMessage(content=parts, metadata=_metadata(ctx, extras, hints))
        if role == "tool":
            call_id = require(raw, "tool_call_id", path, str)
            parts, hints = self.content.content_from_provider(raw.get("content", ""), ctx, f"{path}.content")
            result = ToolResultPart(tool_call_id=call_id, content=parts, provider_metadata=pack(ctx, NS, None, hints))
            extras = collect_extras(ctx, raw, _TOOL_KEYS, path)
            return ToolMessage(content=[result], metadata=_metadata(ctx, extras))
        raise MalformedInput(f"unsupported message role {role!r}", f"{path}.role")

    def assistant_from_provider(self, raw: Dict[str, Any], ctx: ConversionContext, path: str):
        """Assistant message fields -> (parts, message extras, shape hints)."""
        parts: List[Any] = []
        hints: Dict[str, Any] = {}
        reasoning = raw.get("reasoning_content")
        if isinstance(reasoning, str):
            parts.append(ReasoningPart(text=reasoning))
            hints["reasoning_content"] = True
        content = raw.get("content")
        if content is not None:
            content_parts, form = self.content.content_from_provider(content, ctx, f"{path}.content")
            parts.extend(content_parts)
            hints.update(form)
        refusal = raw.get("refusal")
        if isinstance(refusal, str):
            parts.append(RefusalPart(reason=refusal))
        for index, annotation in enumerate(raw.get("annotations") or []):
            parts.append(self.citation_from_provider(annotation, ctx, f"{path}.annotations[{index}]"))
        for index, call in enumerate(raw.get("tool_calls") or []):
            parts.append(self.tools.call_from_provider(call, ctx, f"{path}.tool_calls[{index}]"))
        extras = collect_extras(ctx, raw, _ASSISTANT_KEYS, path)
        return parts, extras, hints

    def citation_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> CitationPart:
        raw = expect_object(raw, path)
        body = raw.get("url_citation") if isinstance(raw.get("url_citation"), dict) else {}
        span = None
        if isinstance(body.get("start_index"), int) and isinstance(body.get("end_index"), int):
            span = CitationSpan(start=body["start_index"], end=body["end_index"])
        extras = collect_extras(ctx, raw, {"type"}, path,
                                nested={"url_citation": {"url", "start_index", "end_index"}})
        if raw.get("type") != "url_citation" and ctx.preserve:
            extras = dict(extras or {}, type=raw.get("type"))
        return CitationPart(url=body.get("url"), span=span, provider_metadata=pack(ctx, NS, extras))


# ═══════════════════════════════════════════════════════════════════════════
# TOOLS
# ═══════════════════════════════════════════════════════════════════════════

class ChatToolOps(ToolOps):
    """tools[], tool_choice, parallel_tool_calls and assistant tool_calls[]"""

    def call_to_provider(self, part: ToolCallPart, ctx: ConversionContext) -> Dict[str, Any]:
        hints = shape(ctx, part.provider_metadata, NS)
        arguments = hints.get("raw_arguments", dump_arguments(part.tool_input))
        out = {
            "id": part.tool_call_id,
            "type": "function",
            "function": {"name": part.tool_name, "arguments": arguments},
        }
        return restore(ctx, out, part.provider_metadata, NS)

    def call_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> ToolCallPart:
        raw = expect_object(raw, path)
        function = require(raw, "function", path, dict)
        name = require(function, "name", f"{path}.function", str)
        arguments = function.get("arguments", "")
        tool_input = load_arguments(arguments, f"{path}.function.arguments")
        extras = collect_extras(ctx, raw, {"id", "type"}, path, nested={"function": {"name", "arguments"}})
        return ToolCallPart(
            tool_call_id=require(raw, "id", path, str),
            tool_name=name,
            tool_input=tool_input,
            provider_metadata=pack(ctx, NS, extras, arguments_shape(arguments, tool_input)),
        )

    def tools_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        tools = []
        for index, tool in enumerate(request.tools or []):
            if tool.tool_type != "function":
                drop_part(ctx, f"{tool.tool_type} tool", TARGET, f"$.tools[{index}]")
                continue
            function: Dict[str, Any] = {"name": tool.name}
            if tool.description is not None:
                function["description"] = tool.description
            if tool.parameters is not None:
                function["parameters"] = tool.parameters
            tools.append(restore(ctx, {"type": "function", "function": function}, tool.provider_metadata, NS))
        insert_hosted(tools, hosted_tools(ctx, request.provider_extensions, NS))
        if tools:
            out["tools"] = tools
        choice = request.tool_choice
        if choice is not None:
            if choice.mode == "tool":
                out["tool_choice"] = {"type": "function", "function": {"name": choice.tool_name}}
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
            if raw.get("type", "function") != "function":
                hosted.append([index, raw])
                continue
            function = require(raw, "function", path, dict)
            extras = collect_extras(ctx, raw, {"type"}, path,
                                    nested={"function": {"name", "description", "parameters"}})
            tools.append(ToolDefinition(
                name=require(function, "name", f"{path}.function", str),
                description=function.get("description"),
                parameters=function.get("parameters"),
                provider_metadata=pack(ctx, NS, extras),
            ))
        if tools:
            result["tools"] = tools
        if hosted:
            result[HOSTED_TOOLS_KEY] = hosted
        choice = body.get("tool_choice")
        if isinstance(choice, str) and choice in TOOL_CHOICE_MODES:
            result["tool_choice"] = ToolChoice(mode=TOOL_CHOICE_MODES[choice])
        elif isinstance(choice, dict) and choice.get("type") == "function" and isinstance(choice.get("function"), dict):
            result["tool_choice"] = ToolChoice(mode="tool", tool_name=require(choice["function"], "name", "$.tool_choice.function", str))
        elif choice is not None:
            result.setdefault("__extensions__", {})["tool_choice"] = choice
        if isinstance(body.get("parallel_tool_calls"), bool):
            result["tool_call_config"] = ToolCallConfig(parallel_tool_calls=body["parallel_tool_calls"])
        return result


# ═══════════════════════════════════════════════════════════════════════════
# CONFIG
# ═══════════════════════════════════════════════════════════════════════════

_GENERATION_KEYS = {
    "temperature": "temperature",
    "top_p": "top_p",
    "frequency_penalty": "frequency_penalty",
    "presence_penalty": "presence_penalty",
    "logit_bias": "logit_bias",
    "seed": "seed",
}


class ChatConfigOps(ConfigOps):
    """Sampling parameters, response_format, stream options, reasoning_effort"""

    def config_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        hints = extension_value(request.provider_extensions, NS, SHAPE_KEY, {})
        gen = request.generation
        if gen is not None:
            for wire, field in _GENERATION_KEYS.items():
                value = getattr(gen, field)
                if value is not None:
                    out[wire] = value
            if gen.max_tokens is not None:
                out[hints.get("max_tokens_key", "max_tokens")] = gen.max_tokens
            if gen.stop_sequences is not None:
                if hints.get("stop_form") == "string" and len(gen.stop_sequences) == 1:
                    out["stop"] = gen.stop_sequences[0]
                else:
                    out["stop"] = list(gen.stop_sequences)
            if gen.top_k is not None:
                warn_unmapped(ctx, "top_k", TARGET, "$.generation.top_k")
            if gen.logprobs is not None:
                if not hints.get("logprobs_absent"):
                    out["logprobs"] = gen.logprobs.enabled
                if gen.logprobs.top_logprobs is not None:
                    out["top_logprobs"] = gen.logprobs.top_logprobs
        fmt = request.response_format
        if fmt is not None:
            response_format: Dict[str, Any] = {"type": fmt.kind}
            if fmt.kind == "json_schema":
                json_schema: Dict[str, Any] = {"name": fmt.schema_name or "response"}
                if fmt.json_schema is not None:
                    json_schema["schema"] = fmt.json_schema
                if fmt.strict is not None:
                    json_schema["strict"] = fmt.strict
                response_format["json_schema"] = json_schema
            out["response_format"] = response_format
        stream = request.stream
        if stream is not None:
            if not hints.get("stream_absent"):
                out["stream"] = stream.enabled
            if stream.include_usage is not None:
                out["stream_options"] = {"include_usage": stream.include_usage}
        reasoning = request.reasoning
        if reasoning is not None:
            if reasoning.effort is not None:
                out["reasoning_effort"] = reasoning.effort
            elif reasoning.budget_tokens is not None:
                out["reasoning_effort"] = budget_to_effort(reasoning.budget_tokens)
                ctx.warn(WarningCode.UNMAPPED_PARAMETER,
                         f"thinking budget {reasoning.budget_tokens} approximated as reasoning_effort",
                         "$.reasoning.budget_tokens")
        if request.cache is not None:
            warn_unmapped(ctx, "cache", TARGET, "$.cache")

    def config_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        hints: Dict[str, Any] = {}
        extensions: Dict[str, Any] = {}
        gen: Dict[str, Any] = {
            field: body[wire] for wire, field in _GENERATION_KEYS.items() if body.get(wire) is not None
        }
        for key in ("max_completion_tokens", "max_tokens"):
            if body.get(key) is not None:
                gen["max_tokens"] = body[key]
                if key == "max_completion_tokens":
                    hints["max_tokens_key"] = key
        stop = body.get("stop")
        if isinstance(stop, str):
            gen["stop_sequences"] = [stop]
            hints["stop_form"] = "string"
        elif stop is not None:
            gen["stop_sequences"] = expect_list(stop, "$.stop")
        if body.get("logprobs") is not None or body.get("top_logprobs") is not None:
            if body.get("logprobs") is None:
                hints["logprobs_absent"] = True
            gen["logprobs"] = LogprobsConfig(
                enabled=bool(body["logprobs"]) if body.get("logprobs") is not None else True,
                top_logprobs=body.get("top_logprobs"),
            )
        if gen:
            result["generation"] = GenerationConfig(**gen)

        response_format = body.get("response_format")
        if response_format is not None:
            response_format = expect_object(response_format, "$.response_format")
            kind = require(response_format, "type", "$.response_format", str)
            json_schema = response_format.get("json_schema") or {}
            result["response_format"] = ResponseFormatConfig(
                kind=kind,
                json_schema=json_schema.get("schema"),
                schema_name=json_schema.get("name"),
                strict=json_schema.get("strict"),
            )
            inner = {key: value for key, value in json_schema.items() if key not in ("schema", "name", "strict")}
            if inner:
                extensions["response_format"] = {"json_schema": inner}

        if body.get("stream") is not None or body.get("stream_options") is not None:
            options = body.get("stream_options") or {}
            if body.get("stream") is None:
                hints["stream_absent"] = True
            result["stream"] = StreamConfig(enabled=bool(body.get("stream")), include_usage=options.get("include_usage"))
            inner = {key: value for key, value in options.items() if key != "include_usage"}
            if inner:
                extensions["stream_options"] = inner

        effort = body.get("reasoning_effort")
        if effort in EFFORTS:
            result["reasoning"] = ReasoningConfig(effort=effort)
        elif effort is not None:
            extensions["reasoning_effort"] = effort

        result[SHAPE_KEY] = hints
        result["__extensions__"] = extensions
        return result


# ═══════════════════════════════════════════════════════════════════════════
# USAGE
# ═══════════════════════════════════════════════════════════════════════════

_USAGE_DETAIL_KEYS = {"audio_tokens", "accepted_prediction_tokens", "rejected_prediction_tokens"}


def usage_from_provider(raw: Any, ctx: ConversionContext, path: str) -> UsageInfo:
    raw = expect_object(raw, path)
    prompt_details = raw.get("prompt_tokens_details") or {}
    completion_details = raw.get("completion_tokens_details") or {}
    usage = {
        "prompt_tokens": raw.get("prompt_tokens") or 0,
        "completion_tokens": raw.get("completion_tokens") or 0,
        "cached_tokens": prompt_details.get("cached_tokens"),
        "reasoning_tokens": completion_details.get("reasoning_tokens"),
    }
    extras = collect_extras(
        ctx, raw, {"prompt_tokens", "completion_tokens", "total_tokens"}, path,
        designated=_USAGE_DETAIL_KEYS,
        nested={"prompt_tokens_details": {"cached_tokens"}, "completion_tokens_details": {"reasoning_tokens"}},
    ) or {}
    total = raw.get("total_tokens")
    if total is not None and total != usage["prompt_tokens"] + usage["completion_tokens"] and ctx.preserve:
        extras["total_tokens"] = total
    return UsageInfo(**usage, provider_metadata=pack(ctx, NS, extras))


def usage_to_provider(usage: UsageInfo, ctx: ConversionContext) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "prompt_tokens": usage.prompt_tokens,
        "completion_tokens": usage.completion_tokens,
        "total_tokens": usage.total_tokens,
    }
    if usage.cached_tokens is not None:
        out["prompt_tokens_details"] = {"cached_tokens": usage.cached_tokens}
    if usage.reasoning_tokens is not None:
        out["completion_tokens_details"] = {"reasoning_tokens": usage.reasoning_tokens}
    return restore(ctx, out, usage.provider_metadata, NS)


__all__ = [
    "ChatConfigOps",
    "ChatContentOps",
    "ChatMessageOps",
    "ChatToolOps",
    "FINISH_INVERSE",
    "FINISH_REASONS",
    "NS",
    "usage_from_provider",
    "usage_to_provider",
]
