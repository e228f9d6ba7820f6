from rosetta.providers.anthropic.converter import AnthropicConverter

__all__ = ["AnthropicConverter"]
