"""Anthropic Messages converter"""

from __future__ import annotations

import logging
from typing import Any, Dict, List

from rosetta.converters.base import BaseConverter, StreamPayload
from rosetta.converters.context import ConversionContext, StreamContext, WarningCode
from rosetta.converters.errors import MalformedInput
from rosetta.converters.metadata import (
    HOSTED_TOOLS_KEY,
    SHAPE_KEY,
    collect_extras,
    emit_extensions,
    expect_list,
    pack,
    request_extensions,
    require,
    restore,
    shape,
)
from rosetta.ir.types import AssistantMessage, ChoiceInfo, IRRequest, IRResponse, ProviderFormat
from rosetta.providers.anthropic import stream
from rosetta.providers.anthropic.ops import (
    FINISH_INVERSE,
    FINISH_REASONS,
    NS,
    AnthropicConfigOps,
    AnthropicContentOps,
    AnthropicMessageOps,
    AnthropicToolOps,
    usage_from_provider,
    usage_to_provider,
)
from rosetta.providers.common import map_reason

logger = logging.getLogger(__name__)

REQUEST_KEYS = {
    "model", "messages", "system", "max_tokens", "temperature", "top_p", "top_k", "stop_sequences",
    "stream", "tools", "tool_choice", "thinking",
}
RESPONSE_KEYS = {"id", "type", "role", "model", "content", "stop_reason", "usage"}


class AnthropicConverter(BaseConverter):
    format = ProviderFormat.ANTHROPIC
    sse_dialect = "anthropic"
    content_ops_class = AnthropicContentOps
    message_ops_class = AnthropicMessageOps
    tool_ops_class = AnthropicToolOps
    config_ops_class = AnthropicConfigOps

    # -- requests ---------------------------------------------------------------

    def _request_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRRequest:
        model = require(body, "model", "$", str)
        raw_messages = expect_list(require(body, "messages", "$"), "$.messages")
        if not raw_messages:
            raise MalformedInput("at least one message is required", "$.messages")
        system = body.get("system")
        tools = self.tool_ops.tools_from_provider(body, ctx)
        config = self.config_ops.config_from_provider(body, ctx)
        hints = config.pop(SHAPE_KEY)
        extra = dict(config.pop("__extensions__"))
        extra.update(tools.pop("__extensions__", {}))
        if HOSTED_TOOLS_KEY in tools:
            extra[HOSTED_TOOLS_KEY] = tools.pop(HOSTED_TOOLS_KEY)
        return IRRequest(
            model=model,
            messages=self.message_ops.messages_from_provider(raw_messages, ctx, "$.messages"),
            system=self.message_ops.system_from_provider(system, ctx) if system is not None else None,
            provider_extensions=request_extensions(ctx, NS, body, REQUEST_KEYS, hints, extra),
            **tools,
            **config,
        )

    def _request_to_provider(self, request: IRRequest, ctx: ConversionContext) -> Dict[str, Any]:
        out: Dict[str, Any] = {"model": request.model}
        if request.system is not None:
            out["system"] = self.message_ops.system_to_provider(request.system, ctx)
        out["messages"] = self.message_ops.messages_to_provider(request.messages, ctx)
        self.tool_ops.tools_to_provider(request, ctx, out)
        self.config_ops.config_to_provider(request, ctx, out)
        return emit_extensions(ctx, request.provider_extensions, NS, out)

    # -- responses --------------------------------------------------------------

    def _response_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRResponse:
        content = require(body, "content", "$", list)
        wrapped = {"role": "assistant", "content": content}
        messages = self.message_ops.message_from_provider(wrapped, ctx, "$", [])
        message = messages[0]
        reason, hint = map_reason(body.get("stop_reason"), FINISH_REASONS, FINISH_INVERSE)
        usage = body.get("usage")
        extras = collect_extras(ctx, body, RESPONSE_KEYS, "$", designated={"stop_sequence"})
        return IRResponse(
            id=require(body, "id", "$", str),
            created=0,
            model=require(body, "model", "$", str),
            choices=[ChoiceInfo(
                index=0,
                message=AssistantMessage(content=message.content, metadata=message.metadata),
                finish_reason=reason,
                provider_metadata=pack(ctx, NS, None, hint),
            )],
            usage=usage_from_provider(usage, ctx, "$.usage") if usage else None,
            provider_metadata=pack(ctx, NS, extras),
        )

    def _response_to_provider(self, response: IRResponse, ctx: ConversionContext) -> Dict[str, Any]:
        if not response.choices:
            raise MalformedInput("an Anthropic response needs one choice", "$.choices")
        if len(response.choices) > 1:
            ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE,
                     "Anthropic responses carry one choice; the others are dropped", "$.choices")
        choice = response.choices[0]
        blocks = self.message_ops.messages_to_provider([choice.message], ctx)[0]["content"]
        if isinstance(blocks, str):
            blocks = [{"type": "text", "text": blocks}]
        hints = shape(ctx, choice.provider_metadata, NS)
        out: Dict[str, Any] = {
            "id": response.id,
            "type": "message",
            "role": "assistant",
            "model": response.model,
            "content": blocks,
            "stop_reason": hints.get("finish_reason", FINISH_INVERSE[choice.finish_reason]),
            "stop_sequence": None,
        }
        if response.usage is not None:
            out["usage"] = usage_to_provider(response.usage, ctx)
        return restore(ctx, out, response.provider_metadata, NS)

    # -- streaming --------------------------------------------------------------

    def _stream_chunk_from_provider(self, chunk: StreamPayload, ctx: StreamContext) -> None:
        stream.chunk_from_provider(chunk, ctx)

    def stream_event_to_provider(self, event: Any, ctx: StreamContext) -> List[StreamPayload]:
        return stream.event_to_provider(event, ctx)

    def stream_error_to_provider(self, message: str, ctx: StreamContext) -> List[StreamPayload]:
        logger.debug("ending anthropic stream with error: %s", message)
        return stream.error_to_provider(message, ctx)
