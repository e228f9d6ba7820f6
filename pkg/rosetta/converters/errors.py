"""Errors raised while converting, parsing or relaying payloads.

Warnings never raise; anything below aborts the conversion it happened in.
"""

from typing import Any, Dict, Optional


class RosettaError(Exception):
    """Base class for every failure the library reports."""

    code = "rosetta_error"

    def __init__(self, message: str, json_path: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.json_path = json_path

    def to_dict(self) -> Dict[str, Any]:
        body: Dict[str, Any] = {"error": self.code, "message": self.message}
        if self.json_path is not None:
            body["json_path"] = self.json_path
        return body

    def __str__(self) -> str:
        if self.json_path:
            return f"{self.message} (at {self.json_path})"
        return self.message


class MalformedInput(RosettaError):
    code = "malformed_input"


class UnsupportedConstruct(RosettaError):
    code = "unsupported_construct"


class UnknownFormat(RosettaError):
    code = "unknown_format"

    def __init__(self, name: Any):
        super().__init__(f"Unknown provider format: {name!r}")
        self.name = name


class ProtocolViolation(RosettaError):
    """A stream broke its lifecycle rules (delta for an unopened block, ...)."""

    code = "protocol_violation"

    def __init__(self, message: str, frame_ordinal: Optional[int] = None, json_path: Optional[str] = None):
        super().__init__(message, json_path)
        self.frame_ordinal = frame_ordinal

    def to_dict(self) -> Dict[str, Any]:
        body = super().to_dict()
        if self.frame_ordinal is not None:
            body["frame_ordinal"] = self.frame_ordinal
        return body

    def __str__(self) -> str:
        text = super().__str__()
        if self.frame_ordinal is not None:
            return f"{text} [frame {self.frame_ordinal}]"
        return text


class EncodingError(RosettaError):
    code = "encoding_error"


class MissingEventName(RosettaError):
    code = "missing_event_name"


class GatewayConfigError(RosettaError):
    code = "gateway_config_error"
