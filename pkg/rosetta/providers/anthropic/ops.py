"""Ops for the Anthropic Messages format.

Tool results travel as ``tool_result`` blocks inside user-role messages, so
one Anthropic user message may become several IR messages (alternating
UserMessage / ToolMessage runs). On output, consecutive IR messages are
folded back into one user message when the previous IR message was a
ToolMessage; a ``merge`` shape hint overrides that rule where the source
grouped differently.
"""

from __future__ import annotations

from typing import Any, Dict, List, Optional, Tuple

from rosetta.config.defaults import DEFAULT_ANTHROPIC_MAX_TOKENS, EFFORT_BUDGETS
from rosetta.converters.base import ConfigOps, ContentOps, MessageOps, ToolOps
from rosetta.converters.context import ConversionContext, WarningCode
from rosetta.converters.errors import MalformedInput
from rosetta.converters.metadata import (
    HOSTED_TOOLS_KEY,
    SHAPE_KEY,
    collect_extras,
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
    CitationPart,
    CitationSpan,
    FilePart,
    GenerationConfig,
    ImagePart,
    IRRequest,
    MessageMetadata,
    ProviderFormat,
    ReasoningConfig,
    ReasoningPart,
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
from rosetta.providers.common import content_form_shape, drop_part, wants_string, warn_unmapped

NS = ProviderFormat.ANTHROPIC.value
TARGET = "Anthropic"

FINISH_REASONS = {
    "end_turn": "stop",
    "max_tokens": "length",
    "stop_sequence": "stop",
    "tool_use": "tool_calls",
    "refusal": "content_filter",
    "pause_turn": "other",
    "model_context_window_exceeded": "length",
}
FINISH_INVERSE = {
    "stop": "end_turn",
    "length": "max_tokens",
    "tool_calls": "tool_use",
    "content_filter": "refusal",
    "error": "end_turn",
    "other": "end_turn",
}

_CITATION_KNOWN = {"cited_text", "url", "start_char_index", "end_char_index"}
_CITATION_DESIGNATED = {
    "type", "document_index", "document_title", "title", "encrypted_index", "start_page_number",
    "end_page_number", "start_block_index", "end_block_index", "search_result_index", "source",
}


def _custom(message) -> Optional[Dict[str, Any]]:
    return message.metadata.custom


# ═══════════════════════════════════════════════════════════════════════════
# CONTENT
# ═══════════════════════════════════════════════════════════════════════════

class AnthropicContentOps(ContentOps):
    """Typed content blocks"""

    # -- output -----------------------------------------------------------------

    def part_to_provider(self, part: Any, ctx: ConversionContext, path: str) -> Optional[Dict[str, Any]]:
        meta = part.provider_metadata
        hints = shape(ctx, meta, NS)
        if isinstance(part, TextPart):
            out: Dict[str, Any] = {"type": "text", "text": part.text}
            if hints.get("citations") == "empty":
                out["citations"] = []
        elif isinstance(part, ImagePart):
            if part.data is not None:
                source = {"type": "base64", "media_type": part.media_type or "image/png", "data": part.data}
            elif hints.get("source") == "file":
                source = {"type": "file", "file_id": part.url}
            else:
                source = {"type": "url", "url": part.url}
            out = {"type": "image", "source": source}
            if part.detail is not None:
                warn_unmapped(ctx, "image detail", TARGET, f"{path}.detail")
        elif isinstance(part, FilePart):
            out = {"type": "document", "source": self.document_source(part, hints)}
            if part.filename is not None:
                out["title"] = part.filename
        elif isinstance(part, ReasoningPart):
            out = {"type": "thinking", "thinking": part.text}
            if part.signature is not None:
                out["signature"] = part.signature
        elif isinstance(part, ToolCallPart):
            out = {"type": "tool_use", "id": part.tool_call_id, "name": part.tool_name, "input": dict(part.tool_input)}
        elif isinstance(part, ToolResultPart):
            out = self.tool_result_to_provider(part, ctx, path)
        else:
            drop_part(ctx, part.type, TARGET, path)
            return None
        return restore(ctx, out, meta, NS)

    def document_source(self, part: FilePart, hints: Dict[str, Any]) -> Dict[str, Any]:
        kind = hints.get("source")
        if kind == "text" and part.data is not None:
            return {"type": "text", "media_type": part.media_type or "text/plain", "data": part.data}
        if part.data is not None:
            return {"type": "base64", "media_type": part.media_type or "application/pdf", "data": part.data}
        if kind == "file":
            return {"type": "file", "file_id": part.url}
        return {"type": "url", "url": part.url}

    def tool_result_to_provider(self, part: ToolResultPart, ctx: ConversionContext, path: str) -> Dict[str, Any]:
        hints = shape(ctx, part.provider_metadata, NS)
        out: Dict[str, Any] = {"type": "tool_result", "tool_use_id": part.tool_call_id}
        if part.content or hints.get("content_form") == "parts":
            if wants_string(part.content, hints):
                out["content"] = part.content[0].text
            else:
                out["content"] = self.parts_to_blocks(part.content, ctx, f"{path}.content")
        if part.is_error is not None:
            out["is_error"] = part.is_error
        return out

    def citation_to_provider(self, part: CitationPart, ctx: ConversionContext) -> Dict[str, Any]:
        stored = shape(ctx, part.provider_metadata, NS)
        out: Dict[str, Any] = {"cited_text": part.quoted_text or ""}
        if part.url is not None:
            out["type"] = "web_search_result_location"
            out["url"] = part.url
        else:
            out["type"] = "char_location"
        if part.span is not None:
            out["start_char_index"] = part.span.start
            out["end_char_index"] = part.span.end
        if stored.get("cited_text_absent"):
            out.pop("cited_text")
        return restore(ctx, out, part.provider_metadata, NS)

    def parts_to_blocks(self, parts: List[Any], ctx: ConversionContext, path: str) -> List[Dict[str, Any]]:
        """Encode parts in order; citations attach to the text block before them."""
        blocks: List[Dict[str, Any]] = []
        for index, part in enumerate(parts):
            part_path = f"{path}[{index}]"
            if isinstance(part, CitationPart):
                if blocks and blocks[-1].get("type") == "text":
                    blocks[-1].setdefault("citations", []).append(self.citation_to_provider(part, ctx))
                else:
                    drop_part(ctx, "citation without a preceding text block", TARGET, part_path)
                continue
            block = self.part_to_provider(part, ctx, part_path)
            if block is not None:
                blocks.append(block)
        return blocks

    # -- input ------------------------------------------------------------------

    def part_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> List[Any]:
        raw = expect_object(raw, path)
        kind = raw.get("type")
        if kind == "text":
            return self.text_from_provider(raw, ctx, path)
        if kind == "image":
            return [self.image_from_provider(raw, ctx, path)]
        if kind == "document":
            return [self.document_from_provider(raw, ctx, path)]
        if kind == "thinking":
            signature = raw.get("signature")
            if signature and not ctx.preserve:
                ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, "thinking signature dropped", f"{path}.signature")
            extras = collect_extras(ctx, raw, {"type", "thinking", "signature"}, path)
            return [ReasoningPart(
                text=require(raw, "thinking", path, str),
                signature=signature if ctx.preserve else None,
                provider_metadata=pack(ctx, NS, extras),
            )]
        if kind == "tool_use":
            extras = collect_extras(ctx, raw, {"type", "id", "name", "input"}, path)
            return [ToolCallPart(
                tool_call_id=require(raw, "id", path, str),
                tool_name=require(raw, "name", path, str),
                tool_input=expect_object(raw.get("input", {}), f"{path}.input"),
                provider_metadata=pack(ctx, NS, extras),
            )]
        if kind == "tool_result":
            return [self.tool_result_from_provider(raw, ctx, path)]
        return []

    def text_from_provider(self, raw: Dict[str, Any], ctx: ConversionContext, path: str) -> List[Any]:
        extras = collect_extras(ctx, raw, {"type", "text", "citations"}, path)
        hints = {"citations": "empty"} if raw.get("citations") == [] else None
        parts: List[Any] = [TextPart(text=require(raw, "text", path, str), provider_metadata=pack(ctx, NS, extras, hints))]
        for index, citation in enumerate(raw.get("citations") or []):
            parts.append(self.citation_from_provider(citation, ctx, f"{path}.citations[{index}]"))
        return parts

    def citation_from_provider(self, raw: Any, ctx: ConversionContext, path: str) -> CitationPart:
        raw = expect_object(raw, path)
        span = None
        if isinstance(raw.get("start_char_index"), int) and isinstance(raw.get("end_char_index"), int):
            span = CitationSpan(start=raw["start_char_index"], end=raw["end_char_index"])
        extras = collect_extras(ctx, raw, _CITATION_KNOWN, path, designated=_CITATION_DESIGNATED)
        hints = {"cited_text_absent": True} if "cited_text" not in raw else None
        return CitationPart(
            url=raw.get("url"),
            quoted_text=raw.get("cited_text"),
            span=span,
            provider_metadata=pack(ctx, NS, extras, hints),
        )

    def image_from_provider(self, raw: Dict[str, Any], ctx: ConversionContext, path: str) -> ImagePart:
        source = require(raw, "source", path, dict)
        kind = source.get("type")
        extras = collect_extras(ctx, raw, {"type"}, path, nested={"source": {"type", "media_type", "data", "url", "file_id"}})
        if kind == "base64":
            return ImagePart(
                data=require(source, "data", f"{path}.source", str),
                media_type=source.get("media_type"),
                provider_metadata=pack(ctx, NS, extras),
            )
        if kind == "url":
            return ImagePart(url=require(source, "url", f"{path}.source", str), provider_metadata=pack(ctx, NS, extras))
        if kind == "file":
            return ImagePart(url=require(source, "file_id", f"{path}.source", str),
                             provider_metadata=pack(ctx, NS, extras, {"source": "file"}))
        raise MalformedInput(f"unsupported image source type {kind!r}", f"{path}.source.type")

    def document_from_provider(self, raw: Dict[str, Any], ctx: ConversionContext, path: str) -> FilePart:
        source = require(raw, "source", path, dict)
        kind = source.get("type")
        extras = collect_extras(ctx, raw, {"type", "title"}, path,
                                nested={"source": {"type", "media_type", "data", "url", "file_id"}})
        title = raw.get("title")
        if kind in ("base64", "text"):
            hints = {"source": "text"} if kind == "text" else None
            return FilePart(
                data=require(source, "data", f"{path}.source", str),
                media_type=source.get("media_type"),
                filename=title,
                provider_metadata=pack(ctx, NS, extras, hints),
            )
        if kind == "url":
            return FilePart(url=require(source, "url", f"{path}.source", str), filename=title,
                            provider_metadata=pack(ctx, NS, extras))
        if kind == "file":
            return FilePart(url=require(source, "file_id", f"{path}.source", str), filename=title,
                            provider_metadata=pack(ctx, NS, extras, {"source": "file"}))
        raise MalformedInput(f"unsupported document source type {kind!r}", f"{path}.source.type")

    def tool_result_from_provider(self, raw: Dict[str, Any], ctx: ConversionContext, path: str) -> ToolResultPart:
        content = raw.get("content")
        hints: Dict[str, Any] = {}
        if isinstance(content, str):
            parts: List[Any] = [TextPart(text=content)]
            hints = content_form_shape(parts, True)
        elif content is None:
            parts = []
        else:
            parts = []
            for index, block in enumerate(expect_list(content, f"{path}.content")):
                block_path = f"{path}.content[{index}]"
                kind = expect_object(block, block_path).get("type")
                if kind == "text":
                    parts.extend(p for p in self.text_from_provider(block, ctx, block_path) if isinstance(p, TextPart))
                elif kind == "image":
                    parts.append(self.image_from_provider(block, ctx, block_path))
                else:
                    ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE,
                             f"{kind!r} block in a tool result has no IR mapping", block_path)
            hints = content_form_shape(parts, False) if parts else {"content_form": "parts"}
        extras = collect_extras(ctx, raw, {"type", "tool_use_id", "content", "is_error"}, path)
        return ToolResultPart(
            tool_call_id=require(raw, "tool_use_id", path, str),
            content=parts,
            is_error=raw.get("is_error"),
            provider_metadata=pack(ctx, NS, extras, hints),
        )


# ═══════════════════════════════════════════════════════════════════════════
# MESSAGES
# ═══════════════════════════════════════════════════════════════════════════

_OPAQUE = "opaque_blocks"
_KNOWN_BLOCKS = {"text", "image", "document", "thinking", "tool_use", "tool_result"}


class AnthropicMessageOps(MessageOps):
    """messages[] of alternating user/assistant turns"""

    @property
    def content(self) -> AnthropicContentOps:
        return self.converter.content_ops

    # -- output -----------------------------------------------------------------

    def messages_to_provider(self, messages: List[Any], ctx: ConversionContext) -> List[Any]:
        out: List[Dict[str, Any]] = []
        opaque: List[Tuple[Dict[str, Any], list]] = []
        previous = None
        for index, message in enumerate(messages):
            path = f"$.messages[{index}]"
            hints = shape(ctx, _custom(message), NS)
            if isinstance(message, SystemMessage):
                ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE,
                         "system message inside the conversation sent as user text", path)
                role = "user"
            else:
                role = "assistant" if isinstance(message, AssistantMessage) else "user"
            blocks = self.content.parts_to_blocks(message.content, ctx, f"{path}.content")
            merge = hints.get("merge", isinstance(previous, ToolMessage))
            previous = message
            if role == "user" and merge and out and out[-1]["role"] == "user":
                group = out[-1]
                if isinstance(group["content"], str):
                    group["content"] = [{"type": "text", "text": group["content"]}]
                group["content"].extend(blocks)
                continue
            item: Dict[str, Any] = {"role": role, "content": blocks}
            if (
                not isinstance(message, ToolMessage)
                and len(blocks) == 1
                and set(blocks[0]) == {"type", "text"}
                and wants_string(message.content, hints)
            ):
                item["content"] = blocks[0]["text"]
            if hints.get(_OPAQUE):
                opaque.append((item, hints[_OPAQUE]))
            out.append(restore(ctx, item, _custom(message), NS))
        for item, pairs in opaque:
            if isinstance(item["content"], list):
                insert_hosted(item["content"], pairs)
        return out

    def system_to_provider(self, system: SystemMessage, ctx: ConversionContext) -> Any:
        hints = shape(ctx, _custom(system), NS)
        texts = []
        for index, part in enumerate(system.content):
            if isinstance(part, TextPart):
                texts.append(part.text)
            else:
                drop_part(ctx, part.type, "the Anthropic system prompt", f"$.system.content[{index}]")
        layout = hints.get("system_blocks")
        if layout and len(texts) == 1:
            blocks = self.split_system(texts[0], layout)
            if blocks is not None:
                return blocks
        if len(texts) == 1:
            return texts[0]
        return [{"type": "text", "text": text} for text in texts]

    @staticmethod
    def split_system(text: str, layout: List[Dict[str, Any]]) -> Optional[List[Dict[str, Any]]]:
        """Cut joined system text back into its original blocks; None when the text changed."""
        lengths = [entry.get("length", 0) for entry in layout]
        if sum(lengths) + len(lengths) - 1 != len(text):
            return None
        blocks, offset = [], 0
        for entry, length in zip(layout, lengths):
            block = {"type": "text", "text": text[offset: offset + length]}
            block.update(entry.get("extras") or {})
            blocks.append(block)
            offset += length + 1
        return blocks

    # -- input ------------------------------------------------------------------

    def system_from_provider(self, raw: Any, ctx: ConversionContext) -> SystemMessage:
        if isinstance(raw, str):
            return SystemMessage(content=[TextPart(text=raw)])
        layout, texts = [], []
        for index, block in enumerate(expect_list(raw, "$.system")):
            path = f"$.system[{index}]"
            block = expect_object(block, path)
            text = require(block, "text", path, str)
            texts.append(text)
            extras = collect_extras(ctx, block, {"text"}, path, designated={"type"})
            layout.append({"length": len(text), "extras": extras or {}})
        metadata = MessageMetadata(custom=pack(ctx, NS, None, {"system_blocks": layout}))
        return SystemMessage(content=[TextPart(text="\n".join(texts))], metadata=metadata)

    def messages_from_provider(self, raw: List[Any], ctx: ConversionContext, path: str) -> List[Any]:
        messages: List[Any] = []
        for index, item in enumerate(raw):
            messages.extend(self.message_from_provider(item, ctx, f"{path}[{index}]", messages))
        return messages

    def message_from_provider(self, raw: Any, ctx: ConversionContext, path: str, before: List[Any]) -> List[Any]:
        raw = expect_object(raw, path)
        role = require(raw, "role", path, str)
        if role not in ("user", "assistant"):
            raise MalformedInput(f"unsupported message role {role!r}", f"{path}.role")
        content = require(raw, "content", path)
        extras = collect_extras(ctx, raw, {"role", "content"}, path)
        if isinstance(content, str):
            parts = [TextPart(text=content)]
            hints = content_form_shape(parts, True)
            cls = AssistantMessage if role == "assistant" else UserMessage
            return [cls(content=parts, metadata=MessageMetadata(custom=pack(ctx, NS, extras, hints)))]

        blocks = expect_list(content, f"{path}.content")
        opaque = []
        runs: List[Tuple[str, List[Any]]] = []
        for index, block in enumerate(blocks):
            block_path = f"{path}.content[{index}]"
            kind = expect_object(block, block_path).get("type")
            if kind not in _KNOWN_BLOCKS:
                if ctx.preserve:
                    opaque.append([index, block])
                else:
                    ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, f"{kind!r} block has no IR mapping", block_path)
                continue
            parts = self.content.part_from_provider(block, ctx, block_path)
            run_kind = "tool" if role == "user" and kind == "tool_result" else "content"
            if runs and runs[-1][0] == run_kind:
                runs[-1][1].extend(parts)
            else:
                runs.append((run_kind, list(parts)))
        if not runs:
            runs.append(("content", []))

        out: List[Any] = []
        previous = before[-1] if before else None
        for position, (run_kind, parts) in enumerate(runs):
            hints: Dict[str, Any] = {}
            merged = position > 0
            if role == "user" and merged != isinstance(previous, ToolMessage):
                hints["merge"] = merged
            if position == 0:
                if run_kind == "content":
                    hints.update(content_form_shape(parts, False))
                if opaque:
                    hints[_OPAQUE] = opaque
            metadata = MessageMetadata(custom=pack(ctx, NS, extras if position == 0 else None, hints))
            if run_kind == "tool":
                message = ToolMessage(content=parts, metadata=metadata)
            elif role == "assistant":
                message = AssistantMessage(content=parts, metadata=metadata)
            else:
                message = UserMessage(content=parts, metadata=metadata)
            out.append(message)
            previous = message
        return out


# ═══════════════════════════════════════════════════════════════════════════
# TOOLS
# ═══════════════════════════════════════════════════════════════════════════

_EMPTY_SCHEMA = {"type": "object", "properties": {}}


class AnthropicToolOps(ToolOps):
    """tools[] and tool_choice (including disable_parallel_tool_use)"""

    def tools_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        tools = []
        for index, tool in enumerate(request.tools or []):
            if tool.tool_type != "function":
                drop_part(ctx, f"{tool.tool_type} tool", TARGET, f"$.tools[{index}]")
                continue
            item: Dict[str, Any] = {"name": tool.name}
            if tool.description is not None:
                item["description"] = tool.description
            item["input_schema"] = tool.parameters if tool.parameters is not None else dict(_EMPTY_SCHEMA)
            tools.append(restore(ctx, item, tool.provider_metadata, NS))
        insert_hosted(tools, hosted_tools(ctx, request.provider_extensions, NS))
        if tools:
            out["tools"] = tools
        choice = request.tool_choice
        parallel = request.tool_call_config.parallel_tool_calls if request.tool_call_config else None
        if choice is None and parallel is None:
            return
        tool_choice: Dict[str, Any] = {"type": choice.mode if choice else "auto"}
        if choice is not None and choice.mode == "tool":
            tool_choice["name"] = choice.tool_name
        if parallel is not None:
            tool_choice["disable_parallel_tool_use"] = not parallel
        out["tool_choice"] = tool_choice

    def tools_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        tools, hosted = [], []
        for index, raw in enumerate(expect_list(body.get("tools") or [], "$.tools")):
            path = f"$.tools[{index}]"
            raw = expect_object(raw, path)
            if raw.get("type") not in (None, "custom"):
                hosted.append([index, raw])
                continue
            extras = collect_extras(ctx, raw, {"name", "description", "input_schema"}, path, designated={"type"})
            tools.append(ToolDefinition(
                name=require(raw, "name", path, str),
                description=raw.get("description"),
                parameters=raw.get("input_schema"),
                provider_metadata=pack(ctx, NS, extras),
            ))
        if tools:
            result["tools"] = tools
        if hosted:
            result[HOSTED_TOOLS_KEY] = hosted
        choice = body.get("tool_choice")
        if choice is not None:
            choice = expect_object(choice, "$.tool_choice")
            mode = require(choice, "type", "$.tool_choice", str)
            if mode not in ("auto", "any", "none", "tool"):
                raise MalformedInput(f"unsupported tool_choice type {mode!r}", "$.tool_choice.type")
            result["tool_choice"] = ToolChoice(mode=mode, tool_name=choice.get("name"))
            disable = choice.get("disable_parallel_tool_use")
            if isinstance(disable, bool):
                result["tool_call_config"] = ToolCallConfig(parallel_tool_calls=not disable)
            extras = {key: value for key, value in choice.items()
                      if key not in ("type", "name", "disable_parallel_tool_use")}
            if extras:
                result["__extensions__"] = {"tool_choice": extras}
        return result


# ═══════════════════════════════════════════════════════════════════════════
# CONFIG
# ═══════════════════════════════════════════════════════════════════════════

class AnthropicConfigOps(ConfigOps):
    """max_tokens, sampling, stop_sequences, thinking, stream"""

    def config_to_provider(self, request: IRRequest, ctx: ConversionContext, out: Dict[str, Any]) -> None:
        gen = request.generation or GenerationConfig()
        if gen.max_tokens is not None:
            out["max_tokens"] = gen.max_tokens
        else:
            out["max_tokens"] = DEFAULT_ANTHROPIC_MAX_TOKENS
            ctx.warn(WarningCode.UNMAPPED_PARAMETER_DEFAULTED,
                     f"max_tokens is required by Anthropic; defaulted to {DEFAULT_ANTHROPIC_MAX_TOKENS}",
                     "$.generation.max_tokens")
        for field in ("temperature", "top_p", "top_k"):
            value = getattr(gen, field)
            if value is not None:
                out[field] = value
        if gen.stop_sequences is not None:
            out["stop_sequences"] = list(gen.stop_sequences)
        for field in ("frequency_penalty", "presence_penalty", "logit_bias", "seed", "logprobs"):
            if getattr(gen, field) is not None:
                warn_unmapped(ctx, field, TARGET, f"$.generation.{field}")
        if request.response_format is not None and request.response_format.kind != "text":
            warn_unmapped(ctx, "response_format", TARGET, "$.response_format")
        if request.stream is not None:
            out["stream"] = request.stream.enabled
            if request.stream.include_usage is not None:
                warn_unmapped(ctx, "stream include_usage", TARGET, "$.stream.include_usage")
        reasoning = request.reasoning
        if reasoning is not None:
            out["thinking"] = self.thinking_to_provider(reasoning, ctx)
        if request.cache is not None:
            warn_unmapped(ctx, "request-level cache", TARGET, "$.cache")

    def thinking_to_provider(self, reasoning: ReasoningConfig, ctx: ConversionContext) -> Dict[str, Any]:
        if reasoning.enabled is False:
            return {"type": "disabled"}
        budget = reasoning.budget_tokens
        if budget is None:
            effort = reasoning.effort or "medium"
            budget = EFFORT_BUDGETS[effort]
            ctx.warn(WarningCode.UNMAPPED_PARAMETER,
                     f"reasoning effort {effort!r} approximated as a thinking budget of {budget}",
                     "$.reasoning")
        return {"type": "enabled", "budget_tokens": budget}

    def config_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        extensions: Dict[str, Any] = {}
        gen = {field: body[field] for field in ("max_tokens", "temperature", "top_p", "top_k") if body.get(field) is not None}
        if body.get("stop_sequences") is not None:
            gen["stop_sequences"] = expect_list(body["stop_sequences"], "$.stop_sequences")
        if gen:
            result["generation"] = GenerationConfig(**gen)
        if body.get("stream") is not None:
            result["stream"] = StreamConfig(enabled=bool(body["stream"]))
        thinking = body.get("thinking")
        if thinking is not None:
            thinking = expect_object(thinking, "$.thinking")
            kind = thinking.get("type")
            if kind == "enabled":
                result["reasoning"] = ReasoningConfig(enabled=True, budget_tokens=thinking.get("budget_tokens"))
            elif kind == "disabled":
                result["reasoning"] = ReasoningConfig(enabled=False)
            else:
                extensions["thinking"] = thinking
            inner = {key: value for key, value in thinking.items() if key not in ("type", "budget_tokens")}
            if inner and kind in ("enabled", "disabled"):
                extensions["thinking"] = inner
        result[SHAPE_KEY] = {}
        result["__extensions__"] = extensions
        return result


# ═══════════════════════════════════════════════════════════════════════════
# USAGE
# ═══════════════════════════════════════════════════════════════════════════

_USAGE_DESIGNATED = {"cache_creation_input_tokens", "cache_creation", "server_tool_use", "service_tier"}


def usage_from_provider(raw: Any, ctx: ConversionContext, path: str) -> UsageInfo:
    raw = expect_object(raw, path)
    extras = collect_extras(ctx, raw, {"input_tokens", "output_tokens", "cache_read_input_tokens"}, path,
                            designated=_USAGE_DESIGNATED)
    return UsageInfo(
        prompt_tokens=raw.get("input_tokens") or 0,
        completion_tokens=raw.get("output_tokens") or 0,
        cached_tokens=raw.get("cache_read_input_tokens"),
        provider_metadata=pack(ctx, NS, extras),
    )


def usage_to_provider(usage: UsageInfo, ctx: ConversionContext) -> Dict[str, Any]:
    out: Dict[str, Any] = {"input_tokens": usage.prompt_tokens, "output_tokens": usage.completion_tokens}
    if usage.cached_tokens is not None:
        out["cache_read_input_tokens"] = usage.cached_tokens
    return restore(ctx, out, usage.provider_metadata, NS)


__all__ = [
    "AnthropicConfigOps",
    "AnthropicContentOps",
    "AnthropicMessageOps",
    "AnthropicToolOps",
    "FINISH_INVERSE",
    "FINISH_REASONS",
    "NS",
    "usage_from_provider",
    "usage_to_provider",
]
