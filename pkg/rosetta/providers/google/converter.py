"""Google GenAI generateContent converter"""

from __future__ import annotations

import logging
from collections import defaultdict, deque
from typing import Any, Dict, List

from rosetta.converters.base import BaseConverter, StreamPayload
from rosetta.converters.context import ConversionContext, StreamContext
from rosetta.converters.errors import MalformedInput
from rosetta.converters.metadata import (
    HOSTED_TOOLS_KEY,
    SHAPE_KEY,
    collect_extras,
    deep_merge,
    emit_extensions,
    expect_list,
    expect_object,
    extension_value,
    insert_hosted,
    pack,
    request_extensions,
    require,
    restore,
    shape,
)
from rosetta.ir.types import AssistantMessage, ChoiceInfo, CitationPart, IRRequest, IRResponse, ProviderFormat
from rosetta.providers.google import stream
from rosetta.providers.google.ops import (
    NS,
    GoogleConfigOps,
    GoogleContentOps,
    GoogleMessageOps,
    GoogleToolOps,
    finish_from_provider,
    finish_to_provider,
    timestamp_from_provider,
    timestamp_to_provider,
    usage_from_provider,
    usage_to_provider,
)

logger = logging.getLogger(__name__)

REQUEST_KEYS = {"model", "contents", "systemInstruction", "tools", "toolConfig", "generationConfig"}
RESPONSE_KEYS = {"candidates", "usageMetadata", "responseId", "modelVersion", "createTime"}
CANDIDATE_KEYS = {"content", "finishReason", "index", "citationMetadata"}
CANDIDATE_DESIGNATED = {"safetyRatings", "avgLogprobs", "logprobsResult", "tokenCount", "finishMessage"}


class GoogleConverter(BaseConverter):
    format = ProviderFormat.GOOGLE
    sse_dialect = "google"
    content_ops_class = GoogleContentOps
    message_ops_class = GoogleMessageOps
    tool_ops_class = GoogleToolOps
    config_ops_class = GoogleConfigOps

    # -- requests ---------------------------------------------------------------

    def _request_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRRequest:
        model = body.get("model") or ctx.model_hint
        if not model:
            raise MalformedInput("Google bodies carry no model; pass one with --model", "$.model")
        contents = list(expect_list(require(body, "contents", "$"), "$.contents"))
        system = None
        if body.get("systemInstruction") is not None:
            system = self.message_ops.system_from_provider(body["systemInstruction"], ctx, "$.systemInstruction")
        elif contents and isinstance(contents[0], dict) and contents[0].get("role") == "system":
            system = self.message_ops.system_from_provider(contents[0], ctx, "$.contents[0]", role_entry=True)
            contents = contents[1:]
        if not contents:
            raise MalformedInput("at least one content entry is required", "$.contents")

        tools = self.tool_ops.tools_from_provider(body, ctx)
        config = self.config_ops.config_from_provider(body, ctx)
        hints = dict(config.pop(SHAPE_KEY))
        hints.update(tools.pop(SHAPE_KEY, {}))
        if "model" in body:
            hints["model_in_body"] = True
        extra = dict(config.pop("__extensions__"))
        deep_merge(extra, tools.pop("__extensions__", {}))
        if HOSTED_TOOLS_KEY in tools:
            extra[HOSTED_TOOLS_KEY] = tools.pop(HOSTED_TOOLS_KEY)
        tool_config = expect_object(body.get("toolConfig") or {}, "$.toolConfig")
        other = {key: value for key, value in tool_config.items() if key != "functionCallingConfig"}
        if other:
            deep_merge(extra, {"toolConfig": other})

        return IRRequest(
            model=model,
            messages=self.message_ops.messages_from_provider(contents, ctx, "$.contents"),
            system=system,
            provider_extensions=request_extensions(ctx, NS, body, REQUEST_KEYS, hints, extra),
            **tools,
            **config,
        )

    def _request_to_provider(self, request: IRRequest, ctx: ConversionContext) -> Dict[str, Any]:
        hints = extension_value(request.provider_extensions, NS, SHAPE_KEY, {})
        out: Dict[str, Any] = {}
        if hints.get("model_in_body"):
            out["model"] = request.model
        contents = self.message_ops.messages_to_provider(request.messages, ctx)
        if request.system is not None:
            system = self.message_ops.system_to_provider(request.system, ctx)
            if system.get("role") == "system":
                contents.insert(0, system)
            else:
                out["systemInstruction"] = system
        out["contents"] = contents
        self.tool_ops.tools_to_provider(request, ctx, out)
        self.config_ops.config_to_provider(request, ctx, out)
        return emit_extensions(ctx, request.provider_extensions, NS, out)

    # -- responses --------------------------------------------------------------

    def _candidate_from_provider(self, raw: Any, position: int, ctx: ConversionContext) -> ChoiceInfo:
        path = f"$.candidates[{position}]"
        raw = expect_object(raw, path)
        hints: Dict[str, Any] = {}
        content = raw.get("content")
        if content is None:
            hints["content_absent"] = True
            content = {"parts": []}
        content = expect_object(content, f"{path}.content")
        if "role" not in content:
            hints["role_absent"] = True
        wrapped = {"role": "model", "parts": [], **content}
        messages = self.message_ops.content_from_provider(wrapped, ctx, f"{path}.content", [], defaultdict(deque))
        parts: List[Any] = [part for message in messages for part in message.content]
        has_calls = any(part.type == "tool_call" for part in parts)
        citation_meta = raw.get("citationMetadata")
        if citation_meta is not None:
            citation_meta = expect_object(citation_meta, f"{path}.citationMetadata")
            for index, item in enumerate(expect_list(citation_meta.get("citations") or [], f"{path}.citationMetadata.citations")):
                parts.append(self.content_ops.citation_from_provider(item, ctx, f"{path}.citationMetadata.citations[{index}]"))
        reason, reason_hint = finish_from_provider(raw.get("finishReason"), has_calls)
        hints.update(reason_hint)
        if "index" not in raw:
            hints["index_absent"] = True
        extras = collect_extras(ctx, raw, CANDIDATE_KEYS, path, designated=CANDIDATE_DESIGNATED,
                                nested={"citationMetadata": {"citations"}})
        return ChoiceInfo(
            index=raw.get("index", position),
            message=AssistantMessage(content=parts, metadata=messages[0].metadata),
            finish_reason=reason,
            provider_metadata=pack(ctx, NS, extras, hints),
        )

    def _response_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRResponse:
        candidates = expect_list(body.get("candidates") or [], "$.candidates")
        choices = [self._candidate_from_provider(raw, position, ctx) for position, raw in enumerate(candidates)]
        usage = body.get("usageMetadata")
        extras = collect_extras(ctx, body, RESPONSE_KEYS, "$", designated={"promptFeedback"}) or {}
        if ctx.preserve and body.get("createTime") is not None:
            extras["createTime"] = body["createTime"]
        hints = {"candidates_absent": True} if "candidates" not in body else None
        return IRResponse(
            id=body.get("responseId") or "",
            created=timestamp_from_provider(body.get("createTime")),
            model=body.get("modelVersion") or ctx.model_hint or "",
            choices=choices,
            usage=usage_from_provider(usage, ctx, "$.usageMetadata") if usage else None,
            provider_metadata=pack(ctx, NS, extras, hints),
        )

    def _candidate_to_provider(self, choice: ChoiceInfo, position: int, ctx: ConversionContext) -> Dict[str, Any]:
        path = f"$.choices[{position}]"
        hints = shape(ctx, choice.provider_metadata, NS)
        message = choice.message
        custom = message.metadata.custom
        citations = [part for part in message.content if isinstance(part, CitationPart)]
        body = message.model_copy(update={"content": [p for p in message.content if not isinstance(p, CitationPart)]})
        parts = self.message_ops.parts_to_provider(body, {}, ctx, f"{path}.message")
        insert_hosted(parts, shape(ctx, custom, NS).get("opaque_parts", []))
        candidate: Dict[str, Any] = {}
        if parts or not hints.get("content_absent"):
            content: Dict[str, Any] = {"parts": parts}
            if not hints.get("role_absent"):
                content = {"role": "model", "parts": parts}
            candidate["content"] = restore(ctx, content, custom, NS)
        reason = finish_to_provider(ctx, choice.finish_reason, choice.provider_metadata)
        if reason is not None:
            candidate["finishReason"] = reason
        if not hints.get("index_absent"):
            candidate["index"] = choice.index
        if citations:
            candidate["citationMetadata"] = {
                "citations": [self.content_ops.citation_to_provider(part, ctx) for part in citations],
            }
        return restore(ctx, candidate, choice.provider_metadata, NS)

    def _response_to_provider(self, response: IRResponse, ctx: ConversionContext) -> Dict[str, Any]:
        hints = shape(ctx, response.provider_metadata, NS)
        out: Dict[str, Any] = {}
        if response.choices or not hints.get("candidates_absent"):
            out["candidates"] = [
                self._candidate_to_provider(choice, position, ctx) for position, choice in enumerate(response.choices)
            ]
        if response.usage is not None:
            out["usageMetadata"] = usage_to_provider(response.usage, ctx)
        if response.model:
            out["modelVersion"] = response.model
        if response.id:
            out["responseId"] = response.id
        if response.created > 0:
            out["createTime"] = timestamp_to_provider(response.created)
        return restore(ctx, out, response.provider_metadata, NS)

    # -- streaming --------------------------------------------------------------

    def _stream_chunk_from_provider(self, chunk: StreamPayload, ctx: StreamContext) -> None:
        stream.chunk_from_provider(chunk, ctx)

    def stream_close_from_provider(self, ctx: StreamContext) -> List[Any]:
        if not ctx.ended:
            stream.close_from_provider(ctx)
        return super().stream_close_from_provider(ctx)

    def stream_event_to_provider(self, event: Any, ctx: StreamContext) -> List[StreamPayload]:
        return stream.event_to_provider(event, ctx)

    def stream_error_to_provider(self, message: str, ctx: StreamContext) -> List[StreamPayload]:
        logger.debug("ending google stream with error: %s", message)
        return stream.error_to_provider(message, ctx)
