"""Provider-neutral intermediate representation.

Every payload the converters touch passes through these models: content parts,
messages, tool definitions, generation settings, the request/response
envelopes and the streaming events. Models are frozen once built.

The types stay deliberately permissive: role constraints, numeric bounds and
cross-references are checked by :mod:`rosetta.ir.validate`, which reports
violations as data instead of refusing to construct the value.
"""

from __future__ import annotations

from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


JsonObject = Dict[str, Any]


class ProviderFormat(str, Enum):
    OPENAI_CHAT = "openai_chat"
    OPENAI_RESPONSES = "openai_responses"
    ANTHROPIC = "anthropic"
    GOOGLE = "google"


class IRModel(BaseModel):
    """Base for all IR values: immutable, strict about unknown fields."""

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)


# ═══════════════════════════════════════════════════════════════════════════
# CONTENT PARTS
# ═══════════════════════════════════════════════════════════════════════════

class TextPart(IRModel):
    type: Literal["text"] = "text"
    text: str
    provider_metadata: Optional[JsonObject] = None


class ImagePart(IRModel):
    """Image given inline (base64 ``data``) or by reference (``url``)."""

    type: Literal["image"] = "image"
    data: Optional[str] = None
    url: Optional[str] = None
    media_type: Optional[str] = None
    detail: Optional[Literal["low", "high", "auto"]] = None
    provider_metadata: Optional[JsonObject] = None


class AudioPart(IRModel):
    type: Literal["audio"] = "audio"
    data: str
    media_type: str
    provider_metadata: Optional[JsonObject] = None


class FilePart(IRModel):
    type: Literal["file"] = "file"
    data: Optional[str] = None
    url: Optional[str] = None
    media_type: Optional[str] = None
    filename: Optional[str] = None
    provider_metadata: Optional[JsonObject] = None


class ToolCallPart(IRModel):
    type: Literal["tool_call"] = "tool_call"
    tool_call_id: str
    tool_name: str
    tool_input: JsonObject = Field(default_factory=dict)
    provider_metadata: Optional[JsonObject] = None


class ToolResultPart(IRModel):
    type: Literal["tool_result"] = "tool_result"
    tool_call_id: str
    content: List[Annotated[Union[TextPart, ImagePart], Field(discriminator="type")]] = Field(
        default_factory=list
    )
    is_error: Optional[bool] = None
    provider_metadata: Optional[JsonObject] = None


class ReasoningPart(IRModel):
    type: Literal["reasoning"] = "reasoning"
    text: str
    signature: Optional[str] = None
    provider_metadata: Optional[JsonObject] = None


class RefusalPart(IRModel):
    type: Literal["refusal"] = "refusal"
    reason: str
    provider_metadata: Optional[JsonObject] = None


class CitationSpan(IRModel):
    """Offsets in Unicode scalar values into the cited text."""

    start: int
    end: int


class CitationPart(IRModel):
    type: Literal["citation"] = "citation"
    url: Optional[str] = None
    quoted_text: Optional[str] = None
    span: Optional[CitationSpan] = None
    provider_metadata: Optional[JsonObject] = None


ContentPart = Annotated[
    Union[
        TextPart,
        ImagePart,
        AudioPart,
        FilePart,
        ToolCallPart,
        ToolResultPart,
        ReasoningPart,
        RefusalPart,
        CitationPart,
    ],
    Field(discriminator="type"),
]

CONTENT_PART_TYPES = (
    "text",
    "image",
    "audio",
    "file",
    "tool_call",
    "tool_result",
    "reasoning",
    "refusal",
    "citation",
)


# ═══════════════════════════════════════════════════════════════════════════
# MESSAGES
# ═══════════════════════════════════════════════════════════════════════════

class MessageMetadata(IRModel):
    id: Optional[str] = None
    timestamp: Optional[int] = None
    streaming_state: Optional[Literal["partial", "complete"]] = None
    custom: Optional[JsonObject] = None


class _MessageBase(IRModel):
    content: List[ContentPart] = Field(default_factory=list)
    metadata: MessageMetadata = Field(default_factory=MessageMetadata)


class SystemMessage(_MessageBase):
    role: Literal["system"] = "system"


class UserMessage(_MessageBase):
    role: Literal["user"] = "user"


class AssistantMessage(_MessageBase):
    role: Literal["assistant"] = "assistant"


class ToolMessage(_MessageBase):
    role: Literal["tool"] = "tool"


Message = Annotated[
    Union[SystemMessage, UserMessage, AssistantMessage, ToolMessage],
    Field(discriminator="role"),
]

# Part kinds confined to specific roles; every other kind may appear anywhere.
PART_ROLE_RESTRICTIONS: Dict[str, frozenset] = {
    "tool_call": frozenset({"assistant"}),
    "reasoning": frozenset({"assistant"}),
    "refusal": frozenset({"assistant"}),
    "tool_result": frozenset({"tool"}),
}
MESSAGE_ROLES = ("system", "user", "assistant", "tool")


# ═══════════════════════════════════════════════════════════════════════════
# TOOLS
# ═══════════════════════════════════════════════════════════════════════════

class ToolDefinition(IRModel):
    name: str
    description: Optional[str] = None
    parameters: Optional[JsonObject] = None
    tool_type: Literal["function", "mcp"] = "function"
    provider_metadata: Optional[JsonObject] = None


class ToolChoice(IRModel):
    mode: Literal["none", "auto", "any", "tool"]
    tool_name: Optional[str] = None


class ToolCallConfig(IRModel):
    parallel_tool_calls: Optional[bool] = None


# ═══════════════════════════════════════════════════════════════════════════
# GENERATION CONFIGURATION
# ═══════════════════════════════════════════════════════════════════════════

class LogprobsConfig(IRModel):
    enabled: bool
    top_logprobs: Optional[int] = None


class GenerationConfig(IRModel):
    temperature: Optional[float] = None
    top_p: Optional[float] = None
    top_k: Optional[int] = None
    max_tokens: Optional[int] = None
    stop_sequences: Optional[List[str]] = None
    frequency_penalty: Optional[float] = None
    presence_penalty: Optional[float] = None
    logit_bias: Optional[Dict[str, float]] = None
    seed: Optional[int] = None
    logprobs: Optional[LogprobsConfig] = None


class ReasoningConfig(IRModel):
    enabled: Optional[bool] = None
    effort: Optional[Literal["low", "medium", "high"]] = None
    budget_tokens: Optional[int] = None


class StreamConfig(IRModel):
    enabled: bool
    include_usage: Optional[bool] = None


class ResponseFormatConfig(IRModel):
    kind: Literal["text", "json_object", "json_schema"]
    json_schema: Optional[JsonObject] = Field(default=None, alias="schema")
    schema_name: Optional[str] = None
    strict: Optional[bool] = None


# ═══════════════════════════════════════════════════════════════════════════
# REQUEST / RESPONSE
# ═══════════════════════════════════════════════════════════════════════════

class IRRequest(IRModel):
    model: str
    messages: List[Message]
    system: Optional[SystemMessage] = None
    tools: Optional[List[ToolDefinition]] = None
    tool_choice: Optional[ToolChoice] = None
    tool_call_config: Optional[ToolCallConfig] = None
    generation: Optional[GenerationConfig] = None
    response_format: Optional[ResponseFormatConfig] = None
    stream: Optional[StreamConfig] = None
    reasoning: Optional[ReasoningConfig] = None
    cache: Optional[JsonObject] = None
    provider_extensions: Optional[JsonObject] = None


FinishReason = Literal["stop", "length", "tool_calls", "content_filter", "error", "other"]
FINISH_REASONS = ("stop", "length", "tool_calls", "content_filter", "error", "other")


class UsageInfo(IRModel):
    prompt_tokens: int = 0
    completion_tokens: int = 0
    reasoning_tokens: Optional[int] = None
    cached_tokens: Optional[int] = None
    provider_metadata: Optional[JsonObject] = None

    @property
    def total_tokens(self) -> int:
        return self.prompt_tokens + self.completion_tokens


class ChoiceInfo(IRModel):
    index: int
    message: AssistantMessage
    finish_reason: FinishReason
    provider_metadata: Optional[JsonObject] = None


class IRResponse(IRModel):
    id: str
    created: int
    model: str
    choices: List[ChoiceInfo]
    usage: Optional[UsageInfo] = None
    provider_metadata: Optional[JsonObject] = None


# ═══════════════════════════════════════════════════════════════════════════
# STREAM EVENTS
# ═══════════════════════════════════════════════════════════════════════════

BlockKind = Literal["text", "tool_call", "reasoning"]


class _EventBase(IRModel):
    provider_metadata: Optional[JsonObject] = None


class StreamStartEvent(_EventBase):
    type: Literal["stream_start"] = "stream_start"
    response_id: str
    model: str
    created: int = 0


class StreamEndEvent(_EventBase):
    type: Literal["stream_end"] = "stream_end"


class ContentBlockStartEvent(_EventBase):
    type: Literal["content_block_start"] = "content_block_start"
    block_index: int
    block_kind: BlockKind


class ContentBlockEndEvent(_EventBase):
    type: Literal["content_block_end"] = "content_block_end"
    block_index: int


class TextDeltaEvent(_EventBase):
    type: Literal["text_delta"] = "text_delta"
    block_index: int
    text: str


class ReasoningDeltaEvent(_EventBase):
    type: Literal["reasoning_delta"] = "reasoning_delta"
    block_index: int
    text: str


class ToolCallStartEvent(_EventBase):
    type: Literal["tool_call_start"] = "tool_call_start"
    block_index: int
    tool_call_id: str
    tool_name: str


class ToolCallDeltaEvent(_EventBase):
    type: Literal["tool_call_delta"] = "tool_call_delta"
    block_index: int
    arguments_fragment: str


class FinishEvent(_EventBase):
    type: Literal["finish"] = "finish"
    finish_reason: FinishReason


class UsageEvent(_EventBase):
    type: Literal["usage"] = "usage"
    usage: UsageInfo


StreamEvent = Annotated[
    Union[
        StreamStartEvent,
        StreamEndEvent,
        ContentBlockStartEvent,
        ContentBlockEndEvent,
        TextDeltaEvent,
        ReasoningDeltaEvent,
        ToolCallStartEvent,
        ToolCallDeltaEvent,
        FinishEvent,
        UsageEvent,
    ],
    Field(discriminator="type"),
]


__all__ = [
    "AssistantMessage",
    "AudioPart",
    "BlockKind",
    "CONTENT_PART_TYPES",
    "ChoiceInfo",
    "CitationPart",
    "CitationSpan",
    "ContentBlockEndEvent",
    "ContentBlockStartEvent",
    "ContentPart",
    "FINISH_REASONS",
    "FilePart",
    "FinishEvent",
    "FinishReason",
    "GenerationConfig",
    "IRRequest",
    "IRResponse",
    "ImagePart",
    "JsonObject",
    "LogprobsConfig",
    "Message",
    "MessageMetadata",
    "ProviderFormat",
    "MESSAGE_ROLES",
    "PART_ROLE_RESTRICTIONS",
    "ReasoningConfig",
    "ReasoningDeltaEvent",
    "ReasoningPart",
    "RefusalPart",
    "ResponseFormatConfig",
    "StreamConfig",
    "StreamEndEvent",
    "StreamEvent",
    "StreamStartEvent",
    "SystemMessage",
    "TextDeltaEvent",
    "TextPart",
    "ToolCallConfig",
    "ToolCallDeltaEvent",
    "ToolCallPart",
    "ToolCallStartEvent",
    "ToolChoice",
    "ToolDefinition",
    "ToolMessage",
    "ToolResultPart",
    "UsageEvent",
    "UsageInfo",
    "UserMessage",
]
