"""OpenAI Responses converter"""

from __future__ import annotations

import copy
import logging
from typing import Any, Dict, List, Optional

from rosetta.converters.base import BaseConverter, StreamPayload
from rosetta.converters.context import ConversionContext, StreamContext, WarningCode
from rosetta.converters.errors import MalformedInput
from rosetta.converters.metadata import (
    HOSTED_TOOLS_KEY,
    SHAPE_KEY,
    collect_extras,
    deep_merge,
    emit_extensions,
    expect_list,
    extension_value,
    pack,
    request_extensions,
    require,
    restore,
    shape,
)
from rosetta.ir.types import (
    AssistantMessage,
    ChoiceInfo,
    IRRequest,
    IRResponse,
    MessageMetadata,
    ProviderFormat,
    SystemMessage,
    TextPart,
    UserMessage,
)
from rosetta.providers.openai_responses import stream
from rosetta.providers.openai_responses.ops import (
    NS,
    OPAQUE_ITEMS,
    ResponsesConfigOps,
    ResponsesContentOps,
    ResponsesMessageOps,
    ResponsesToolOps,
    finish_from_provider,
    finish_to_provider,
    request_system_item,
    usage_from_provider,
    usage_to_provider,
)

logger = logging.getLogger(__name__)

REQUEST_KEYS = {
    "model", "input", "instructions", "tools", "tool_choice", "parallel_tool_calls", "temperature", "top_p",
    "max_output_tokens", "top_logprobs", "text", "stream", "reasoning",
}
RESPONSE_KEYS = {"id", "object", "created_at", "status", "incomplete_details", "model", "output", "usage"}
# Request settings echoed back on every response object.
RESPONSE_ECHOES = {
    "error", "instructions", "max_output_tokens", "max_tool_calls", "parallel_tool_calls", "previous_response_id",
    "reasoning", "service_tier", "store", "temperature", "text", "tool_choice", "tools", "top_logprobs", "top_p",
    "truncation", "user", "metadata", "background", "output_text", "prompt_cache_key", "safety_identifier",
}
ALWAYS_EMITTED = ("object", "created_at", "status", "error", "incomplete_details", "output")


def _with_system_item(ctx: ConversionContext, message: SystemMessage) -> SystemMessage:
    if not ctx.preserve:
        return message
    custom = copy.deepcopy(message.metadata.custom) or {}
    custom.setdefault(NS, {}).setdefault(SHAPE_KEY, {})["system_item"] = True
    return message.model_copy(update={"metadata": message.metadata.model_copy(update={"custom": custom})})


class OpenAIResponsesConverter(BaseConverter):
    format = ProviderFormat.OPENAI_RESPONSES
    # Responses streams name every event, which is the named-event framing.
    sse_dialect = "anthropic"
    content_ops_class = ResponsesContentOps
    message_ops_class = ResponsesMessageOps
    tool_ops_class = ResponsesToolOps
    config_ops_class = ResponsesConfigOps

    # -- requests ---------------------------------------------------------------

    def _request_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRRequest:
        model = require(body, "model", "$", str)
        raw_input = require(body, "input", "$")
        hints: Dict[str, Any] = {}
        if isinstance(raw_input, str):
            messages: List[Any] = [UserMessage(content=[TextPart(text=raw_input)])]
            hints["input_string"] = True
        else:
            messages, opaque = self.message_ops.items_from_provider(expect_list(raw_input, "$.input"), ctx, "$.input")
            if opaque:
                hints[OPAQUE_ITEMS] = opaque
        if not messages:
            raise MalformedInput("at least one input item is required", "$.input")

        system: Optional[SystemMessage] = None
        if body.get("instructions") is not None:
            parts, form = self.content_ops.content_from_provider(body["instructions"], "system", ctx, "$.instructions")
            system = SystemMessage(content=parts, metadata=MessageMetadata(custom=pack(ctx, NS, None, form)))
        elif isinstance(messages[0], SystemMessage):
            system, messages = _with_system_item(ctx, messages[0]), messages[1:]
        if not messages:
            raise MalformedInput("input holds only a system message", "$.input")

        tools = self.tool_ops.tools_from_provider(body, ctx)
        config = self.config_ops.config_from_provider(body, ctx)
        hints.update(config.pop(SHAPE_KEY))
        extra = dict(config.pop("__extensions__"))
        deep_merge(extra, tools.pop("__extensions__", {}))
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
        hints = extension_value(request.provider_extensions, NS, SHAPE_KEY, {})
        out: Dict[str, Any] = {"model": request.model}
        messages = list(request.messages)
        system = request.system
        if system is not None and request_system_item(ctx, system):
            messages.insert(0, system)
        elif system is not None:
            system_hints = shape(ctx, system.metadata.custom, NS)
            out["instructions"] = self.content_ops.content_to_provider(
                system.content, system_hints, "system", ctx, "$.system.content",
            )
        if (hints.get("input_string") and len(messages) == 1 and isinstance(messages[0], UserMessage)
                and len(messages[0].content) == 1 and isinstance(messages[0].content[0], TextPart)):
            out["input"] = messages[0].content[0].text
        else:
            out["input"] = self.message_ops.items_to_provider(messages, ctx, response=False,
                                                              opaque=hints.get(OPAQUE_ITEMS))
        self.tool_ops.tools_to_provider(request, ctx, out)
        self.config_ops.config_to_provider(request, ctx, out)
        return emit_extensions(ctx, request.provider_extensions, NS, out)

    # -- responses --------------------------------------------------------------

    def _response_from_provider(self, body: Dict[str, Any], ctx: ConversionContext) -> IRResponse:
        output = expect_list(body.get("output") or [], "$.output")
        messages, opaque = self.message_ops.items_from_provider(output, ctx, "$.output")
        parts: List[Any] = []
        message_id = None
        for index, message in enumerate(messages):
            if not isinstance(message, AssistantMessage):
                raise MalformedInput(f"{message.role} items cannot appear in response output", f"$.output[{index}]")
            message_id = message_id or message.metadata.id
            parts.extend(message.content)
        has_calls = any(part.type == "tool_call" for part in parts)
        reason, reason_hints = finish_from_provider(body.get("status"), body.get("incomplete_details"), has_calls)
        message_hints = {OPAQUE_ITEMS: opaque} if opaque else None

        extras = collect_extras(ctx, body, RESPONSE_KEYS, "$", designated=RESPONSE_ECHOES)
        absent = [key for key in ALWAYS_EMITTED if key not in body]
        usage = body.get("usage")
        return IRResponse(
            id=require(body, "id", "$", str),
            created=body.get("created_at") or 0,
            model=body.get("model") or ctx.model_hint or "",
            choices=[ChoiceInfo(
                index=0,
                message=AssistantMessage(
                    content=parts,
                    metadata=MessageMetadata(id=message_id, custom=pack(ctx, NS, None, message_hints)),
                ),
                finish_reason=reason,
                provider_metadata=pack(ctx, NS, None, reason_hints),
            )],
            usage=usage_from_provider(usage, ctx, "$.usage") if usage else None,
            provider_metadata=pack(ctx, NS, extras, {"absent": absent} if absent else None),
        )

    def _response_to_provider(self, response: IRResponse, ctx: ConversionContext) -> Dict[str, Any]:
        if len(response.choices) > 1:
            ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE,
                     f"Responses output holds one answer; {len(response.choices) - 1} extra choices dropped",
                     "$.choices[1]")
        out: Dict[str, Any] = {"id": response.id, "object": "response", "created_at": response.created}
        if response.choices:
            choice = response.choices[0]
            message_hints = shape(ctx, choice.message.metadata.custom, NS)
            items = self.message_ops.items_to_provider([choice.message], ctx, response=True,
                                                       opaque=message_hints.get(OPAQUE_ITEMS))
            fields = finish_to_provider(ctx, choice.finish_reason, choice.provider_metadata)
        else:
            items, fields = [], {"status": "completed", "incomplete_details": None}
        out["status"] = fields["status"]
        out["error"] = {"code": "server_error", "message": ""} if fields["status"] == "failed" else None
        out["incomplete_details"] = fields["incomplete_details"]
        out["model"] = response.model
        out["output"] = items
        if response.usage is not None:
            out["usage"] = usage_to_provider(response.usage, ctx)
        for key in shape(ctx, response.provider_metadata, NS).get("absent", []):
            out.pop(key, None)
        return restore(ctx, out, response.provider_metadata, NS)

    # -- streaming --------------------------------------------------------------

    def _stream_chunk_from_provider(self, chunk: StreamPayload, ctx: StreamContext) -> None:
        stream.chunk_from_provider(chunk, ctx)

    def stream_event_to_provider(self, event: Any, ctx: StreamContext) -> List[StreamPayload]:
        return stream.event_to_provider(event, ctx)

    def stream_error_to_provider(self, message: str, ctx: StreamContext) -> List[StreamPayload]:
        logger.debug("ending responses stream with error: %s", message)
        return stream.error_to_provider(message, ctx)
