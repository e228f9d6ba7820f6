"""Helpers shared by the provider converters.

The OpenAI image/file codecs are used by both OpenAI formats; the rest is
format-independent plumbing (tool-argument strings, content-form hints,
finish-reason tables).
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Mapping, Optional, Tuple

from rosetta.converters.context import ConversionContext, WarningCode
from rosetta.converters.errors import MalformedInput
from rosetta.ir.types import FilePart, ImagePart, TextPart


def parse_data_url(url: str) -> Optional[Tuple[str, str]]:
    """``data:<media>;base64,<payload>`` -> (media, payload); None for anything else."""
    if not url.startswith("data:"):
        return None
    header, sep, payload = url[5:].partition(",")
    if not sep or not header.endswith(";base64"):
        return None
    return header[: -len(";base64")], payload


def data_url(media_type: Optional[str], data: str) -> str:
    return f"data:{media_type or 'application/octet-stream'};base64,{data}"


def dump_arguments(value: Mapping[str, Any]) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(",", ":"))


def load_arguments(raw: Any, path: str) -> Dict[str, Any]:
    """Parse a JSON-encoded tool-arguments string into an object."""
    if isinstance(raw, dict):
        return raw
    if raw is None or raw == "":
        return {}
    if not isinstance(raw, str):
        raise MalformedInput("tool arguments must be a JSON string", path)
    try:
        value = json.loads(raw)
    except ValueError as exc:
        raise MalformedInput(f"tool arguments are not valid JSON: {exc}", path) from None
    if not isinstance(value, dict):
        raise MalformedInput("tool arguments must encode a JSON object", path)
    return value


def arguments_shape(raw: Any, parsed: Dict[str, Any]) -> Dict[str, Any]:
    """Keep the original arguments string when re-encoding would not reproduce it."""
    if isinstance(raw, str) and dump_arguments(parsed) != raw:
        return {"raw_arguments": raw}
    return {}


def is_plain_text(parts: List[Any]) -> bool:
    return len(parts) == 1 and isinstance(parts[0], TextPart) and not parts[0].provider_metadata


def content_form_shape(parts: List[Any], used_string: bool) -> Dict[str, Any]:
    """Shape hint when the source form differs from the default encoding rule.

    Default: a single plain text part is written as a bare string, anything
    else as a parts array.
    """
    default_string = is_plain_text(parts)
    if used_string == default_string:
        return {}
    return {"content_form": "string" if used_string else "parts"}


def wants_string(parts: List[Any], hints: Mapping[str, Any]) -> bool:
    form = hints.get("content_form")
    if form == "string" and len(parts) == 1 and isinstance(parts[0], TextPart):
        return True
    if form == "parts":
        return False
    return is_plain_text(parts)


def joined_text(parts: List[Any]) -> str:
    return "".join(part.text for part in parts if isinstance(part, TextPart))


def map_reason(raw: Any, table: Mapping[str, str], inverse: Mapping[str, str],
               default: str = "other") -> Tuple[str, Dict[str, Any]]:
    """Provider finish reason -> IR reason, plus the raw value when it is not the canonical inverse."""
    reason = table.get(raw, default) if raw is not None else default
    if inverse.get(reason) != raw:
        return reason, {"finish_reason": raw}
    return reason, {}


# ═══════════════════════════════════════════════════════════════════════════
# OPENAI IMAGE / FILE CODECS (shared by Chat Completions and Responses)
# ═══════════════════════════════════════════════════════════════════════════

def openai_image_from_url(url: str, detail: Optional[str], provider_metadata=None) -> ImagePart:
    parsed = parse_data_url(url)
    if parsed is not None:
        media_type, data = parsed
        return ImagePart(data=data, media_type=media_type, detail=detail, provider_metadata=provider_metadata)
    return ImagePart(url=url, detail=detail, provider_metadata=provider_metadata)


def openai_image_url(part: ImagePart) -> str:
    if part.data is not None:
        return data_url(part.media_type or "image/png", part.data)
    return part.url or ""


def openai_file_from_fields(file_data: Optional[str], file_url: Optional[str], filename: Optional[str],
                            provider_metadata=None) -> FilePart:
    if file_data is not None:
        parsed = parse_data_url(file_data)
        if parsed is not None:
            return FilePart(data=parsed[1], media_type=parsed[0], filename=filename,
                            provider_metadata=provider_metadata)
        return FilePart(data=file_data, filename=filename, provider_metadata=provider_metadata)
    return FilePart(url=file_url, filename=filename, provider_metadata=provider_metadata)


def openai_file_data(part: FilePart) -> Optional[str]:
    if part.data is None:
        return None
    if part.media_type is None:
        return part.data
    return data_url(part.media_type, part.data)


def warn_unmapped(ctx: ConversionContext, name: str, target: str, path: str) -> None:
    ctx.warn(WarningCode.UNMAPPED_PARAMETER, f"{name} has no {target} equivalent", path)


def drop_part(ctx: ConversionContext, kind: str, target: str, path: str) -> None:
    ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, f"{kind} content is not supported by {target}", path)


__all__ = [
    "arguments_shape",
    "content_form_shape",
    "data_url",
    "drop_part",
    "dump_arguments",
    "is_plain_text",
    "joined_text",
    "load_arguments",
    "map_reason",
    "openai_file_data",
    "openai_file_from_fields",
    "openai_image_from_url",
    "openai_image_url",
    "parse_data_url",
    "wants_string",
    "warn_unmapped",
]
