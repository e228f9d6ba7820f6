"""Request-body format auto-detection.

Rules are tried in a fixed priority order and the first match wins:

1. Google: ``contents`` entries with a ``parts`` array.
2. OpenAI Responses: ``input`` (or ``output``) holding typed items, or a
   bare-string ``input``.
3. ``messages``: Anthropic when the body has a top-level ``system``, an
   ``anthropic_version``, or content blocks of an Anthropic-only type;
   OpenAI Chat otherwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, List, Literal, Optional

from rosetta.ir.types import ProviderFormat

logger = logging.getLogger(__name__)

ANTHROPIC_BLOCK_TYPES = {"image", "document", "tool_use", "tool_result", "thinking", "redacted_thinking"}
RESPONSES_ITEM_TYPES = {
    "message", "function_call", "function_call_output", "reasoning", "input_text", "output_text",
    "web_search_call", "file_search_call", "computer_call", "item_reference",
}

Confidence = Literal["exact", "heuristic"]


@dataclass(frozen=True)
class DetectionResult:
    format: Optional[ProviderFormat]
    confidence: Confidence = "heuristic"
    signals: List[str] = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.format.value if self.format is not None else "unknown"

    @property
    def known(self) -> bool:
        return self.format is not None

    def to_dict(self):
        return {"format": self.name, "confidence": self.confidence, "signals": list(self.signals)}


UNKNOWN = DetectionResult(None)


def _google(body: dict) -> Optional[DetectionResult]:
    contents = body.get("contents")
    if not isinstance(contents, list):
        return None
    if any(isinstance(entry, dict) and isinstance(entry.get("parts"), list) for entry in contents):
        return DetectionResult(ProviderFormat.GOOGLE, "exact", ["contents.parts"])
    return None


def _responses(body: dict) -> Optional[DetectionResult]:
    for key in ("input", "output"):
        value = body.get(key)
        if isinstance(value, list) and any(
            isinstance(item, dict) and item.get("type") in RESPONSES_ITEM_TYPES for item in value
        ):
            return DetectionResult(ProviderFormat.OPENAI_RESPONSES, "exact", [f"{key}.typed_items"])
    value = body.get("input")
    if isinstance(value, str):
        return DetectionResult(ProviderFormat.OPENAI_RESPONSES, "heuristic", ["input.string"])
    if isinstance(value, list) and "messages" not in body:
        return DetectionResult(ProviderFormat.OPENAI_RESPONSES, "heuristic", ["input.items"])
    return None


def _anthropic_blocks(messages: list) -> bool:
    for message in messages:
        content = message.get("content") if isinstance(message, dict) else None
        if isinstance(content, list) and any(
            isinstance(block, dict) and block.get("type") in ANTHROPIC_BLOCK_TYPES for block in content
        ):
            return True
    return False


def _messages(body: dict) -> Optional[DetectionResult]:
    messages = body.get("messages")
    if not isinstance(messages, list):
        return None
    signals = []
    if isinstance(body.get("system"), (str, list)):
        signals.append("system")
    if "anthropic_version" in body:
        signals.append("anthropic_version")
    if _anthropic_blocks(messages):
        signals.append("messages.anthropic_blocks")
    if signals:
        return DetectionResult(ProviderFormat.ANTHROPIC, "exact", signals)
    return DetectionResult(ProviderFormat.OPENAI_CHAT, "heuristic", ["messages"])


RULES = (_google, _responses, _messages)


def detect_format(body: Any) -> DetectionResult:
    """Infer the ProviderFormat of a request body; never raises."""
    if not isinstance(body, dict):
        return UNKNOWN
    for rule in RULES:
        result = rule(body)
        if result is not None:
            logger.debug("detected %s from %s", result.name, ", ".join(result.signals))
            return result
    return UNKNOWN


__all__ = ["DetectionResult", "UNKNOWN", "detect_format"]
