from rosetta.converters.base import BaseConverter, ConfigOps, ContentOps, MessageOps, ToolOps
from rosetta.converters.context import (
    ConversionContext,
    ConversionWarning,
    MetadataMode,
    StreamContext,
    WarningCode,
)
from rosetta.converters.errors import (
    EncodingError,
    GatewayConfigError,
    MalformedInput,
    MissingEventName,
    ProtocolViolation,
    RosettaError,
    UnknownFormat,
    UnsupportedConstruct,
)
from rosetta.converters.registry import ConverterRegistry, StreamTranslator, Translation, default_registry

__all__ = [
    "BaseConverter",
    "ConfigOps",
    "ContentOps",
    "ConversionContext",
    "ConversionWarning",
    "ConverterRegistry",
    "EncodingError",
    "GatewayConfigError",
    "MalformedInput",
    "MessageOps",
    "MetadataMode",
    "MissingEventName",
    "ProtocolViolation",
    "RosettaError",
    "StreamContext",
    "StreamTranslator",
    "ToolOps",
    "Translation",
    "UnknownFormat",
    "UnsupportedConstruct",
    "WarningCode",
    "default_registry",
]
