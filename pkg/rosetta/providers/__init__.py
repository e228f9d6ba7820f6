"""Per-provider converters (spokes of the IR hub)."""

from typing import List

from rosetta.converters.base import BaseConverter
from rosetta.providers.anthropic import AnthropicConverter
from rosetta.providers.google import GoogleConverter
from rosetta.providers.openai_chat import OpenAIChatConverter
from rosetta.providers.openai_responses import OpenAIResponsesConverter


def all_converters() -> List[BaseConverter]:
    return [OpenAIChatConverter(), OpenAIResponsesConverter(), AnthropicConverter(), GoogleConverter()]


__all__ = [
    "AnthropicConverter",
    "GoogleConverter",
    "OpenAIChatConverter",
    "OpenAIResponsesConverter",
    "all_converters",
]
