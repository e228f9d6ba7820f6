from rosetta.providers.google.converter import GoogleConverter

__all__ = ["GoogleConverter"]
