"""Rosetta: hub-and-spoke translation of LLM API payloads.

Every provider format converts to and from one intermediate representation
(:mod:`rosetta.ir`), so N formats need N converters instead of N² adapters.
"""

__version__ = "0.1.0"

from rosetta.converters.registry import ConverterRegistry, default_registry  # noqa: E402
from rosetta.detect import detect_format  # noqa: E402
from rosetta.ir.types import ProviderFormat  # noqa: E402

__all__ = ["ConverterRegistry", "ProviderFormat", "__version__", "default_registry", "detect_format"]
