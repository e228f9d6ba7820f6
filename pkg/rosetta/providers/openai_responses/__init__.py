from rosetta.providers.openai_responses.converter import OpenAIResponsesConverter

__all__ = ["OpenAIResponsesConverter"]
