"""Canonical JSON form of IR values.

Field names are snake_case as declared, unset fields are omitted rather than
written as null, and empty message metadata is left out. ``dumps`` is
byte-deterministic: two-space indent, declaration order, trailing newline.
"""

from __future__ import annotations

import copy
import json
from enum import Enum
from typing import Any, Dict, Iterable, List

from pydantic import BaseModel, TypeAdapter

from rosetta.ir.types import IRRequest, IRResponse, MessageMetadata, StreamEvent

_EMPTY_METADATA = MessageMetadata()
_EVENT_ADAPTER: TypeAdapter = TypeAdapter(StreamEvent)


def to_json(value: Any) -> Any:
    """Convert an IR model (or list of them) to plain JSON data."""
    if isinstance(value, BaseModel):
        out: Dict[str, Any] = {}
        for name, info in type(value).model_fields.items():
            item = getattr(value, name)
            if item is None:
                continue
            if isinstance(item, MessageMetadata) and item == _EMPTY_METADATA:
                continue
            out[info.alias or name] = to_json(item)
        return out
    if isinstance(value, (list, tuple)):
        return [to_json(item) for item in value]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return copy.deepcopy(value)
    return value


def dumps(value: Any) -> str:
    data = to_json(value)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def parse_request(data: Dict[str, Any]) -> IRRequest:
    return IRRequest.model_validate(data)


def parse_response(data: Dict[str, Any]) -> IRResponse:
    return IRResponse.model_validate(data)


def parse_event(data: Dict[str, Any]):
    return _EVENT_ADAPTER.validate_python(data)


def parse_events(items: Iterable[Dict[str, Any]]) -> List[Any]:
    return [parse_event(item) for item in items]


__all__ = ["dumps", "parse_event", "parse_events", "parse_request", "parse_response", "to_json"]
