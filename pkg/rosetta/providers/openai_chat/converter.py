"""OpenAI Chat Completions converter"""

from __future__ import annotations

import logging
from typing import Any, Dict, List

from rosetta.converters.base import BaseConverter, StreamPayload
from rosetta.converters.context import ConversionContext, StreamContext
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
from rosetta.ir.types import AssistantMessage, ChoiceInfo, IRRequest, IRResponse, ProviderFormat, SystemMessage
from rosetta.providers.common import map_reason
from rosetta.providers.openai_chat import stream
from rosetta.providers.openai_chat.ops import (
    FINISH_INVERSE,
    FINISH_REASONS,
    NS,
    ChatConfigOps,
    ChatContentOps,
    ChatMessageOps,
    ChatToolOps,
    usage_from_provider,
    usage_to_provider,
)

logger = logging.getLogger(__name__)

REQUEST_KEYS = {
    "model", "messages", "tools", "tool_choice", "parallel_tool_calls", "temperature", "top_p",
    "max_tokens", "max_completion_tokens", "stop", "frequency_penalty", "presence_penalty",
    "logit_bias", "seed", "logprobs", "top_logprobs", "response_format", "stream", "stream_options",
    "reasoning_effort",
}
RESPONSE_KEYS = {"id", "object", "created", "model", "choices", "usage"}
CHOICE_KEYS = {"index", "message", "finish_reason"}


class OpenAIChatConverter(BaseConverter):
    format = ProviderFormat.OPENAI_CHAT
    sse_dialect = "openai"
    content_ops_class = ChatContentOps
    message_ops_class = ChatMessageOps
    tool_ops_class = ChatToolOps
    config_ops_class = ChatConfigOps

    # -- requests ---------------------------------------------------------------

    def _request_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRRequest:
        model = require(body, "model", "$", str)
        raw_messages = expect_list(require(body, "messages", "$"), "$.messages")
        if not raw_messages:
            raise MalformedInput("at least one message is required", "$.messages")
        messages = self.message_ops.messages_from_provider(raw_messages, ctx, "$.messages")
        system = None
        if isinstance(messages[0], SystemMessage):
            system, messages = messages[0], messages[1:]

        tools = self.tool_ops.tools_from_provider(body, ctx)
        config = self.config_ops.config_from_provider(body, ctx)
        hints = config.pop(SHAPE_KEY)
        extra = dict(config.pop("__extensions__"))
        extra.update(tools.pop("__extensions__", {}))
        if HOSTED_TOOLS_KEY in tools:
            extra[HOSTED_TOOLS_KEY] = tools.pop(HOSTED_TOOLS_KEY)

        return IRRequest(
            model=model,
            messages=messages,
            system=system,
            provider_extensions=request_extensions(ctx, NS, body, REQUEST_KEYS, hints, extra),
            **tools,
            **config,
        )

    def _request_to_provider(self, request: IRRequest, ctx: ConversionContext) -> Dict[str, Any]:
        messages: List[Any] = []
        if request.system is not None:
            messages.extend(self.message_ops.message_to_provider(request.system, ctx, "$.system"))
        messages.extend(self.message_ops.messages_to_provider(request.messages, ctx))
        out: Dict[str, Any] = {"model": request.model, "messages": messages}
        self.tool_ops.tools_to_provider(request, ctx, out)
        self.config_ops.config_to_provider(request, ctx, out)
        return emit_extensions(ctx, request.provider_extensions, NS, out)

    # -- responses --------------------------------------------------------------

    def _response_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRResponse:
        choices = []
        for index, raw in enumerate(require(body, "choices", "$", list)):
            path = f"$.choices[{index}]"
            message = require(raw, "message", path, dict)
            parts, extras, hints = self.message_ops.assistant_from_provider(message, ctx, f"{path}.message")
            reason, reason_hint = map_reason(raw.get("finish_reason"), FINISH_REASONS, FINISH_INVERSE)
            choice_extras = collect_extras(ctx, raw, CHOICE_KEYS, path, designated={"logprobs"})
            choices.append(ChoiceInfo(
                index=raw.get("index", index),
                message=AssistantMessage(content=parts, metadata={"custom": pack(ctx, NS, extras, hints)}),
                finish_reason=reason,
                provider_metadata=pack(ctx, NS, choice_extras, reason_hint),
            ))
        usage = body.get("usage")
        extras = collect_extras(ctx, body, RESPONSE_KEYS, "$", designated={"system_fingerprint", "service_tier"})
        return IRResponse(
            id=require(body, "id", "$", str),
            created=body.get("created") or 0,
            model=require(body, "model", "$", str),
            choices=choices,
            usage=usage_from_provider(usage, ctx, "$.usage") if usage else None,
            provider_metadata=pack(ctx, NS, extras),
        )

    def _response_to_provider(self, response: IRResponse, ctx: ConversionContext) -> Dict[str, Any]:
        choices = []
        for position, choice in enumerate(response.choices):
            path = f"$.choices[{position}]"
            message = self.message_ops.assistant_to_provider(choice.message, ctx, f"{path}.message")
            restore(ctx, message, choice.message.metadata.custom, NS)
            hints = shape(ctx, choice.provider_metadata, NS)
            item = {
                "index": choice.index,
                "message": message,
                "finish_reason": hints.get("finish_reason", FINISH_INVERSE[choice.finish_reason]),
            }
            choices.append(restore(ctx, item, choice.provider_metadata, NS))
        out: Dict[str, Any] = {
            "id": response.id,
            "object": "chat.completion",
            "created": response.created,
            "model": response.model,
            "choices": choices,
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
        logger.debug("ending chat stream with error: %s", message)
        return stream.error_to_provider(message, ctx)
