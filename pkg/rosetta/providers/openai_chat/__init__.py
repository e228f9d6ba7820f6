from rosetta.providers.openai_chat.converter import OpenAIChatConverter

__all__ = ["OpenAIChatConverter"]
