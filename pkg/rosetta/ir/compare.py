"""Structural equality over JSON trees and the semantic projection of IR values.

``structural_equal`` is the fidelity oracle for preserve-mode round trips:
object key order is ignored, array order matters, numbers compare by value
(``1 == 1.0``), strings compare exactly. ``True``/``False`` are not numbers
here even though Python treats them as ints.

``semantic_projection`` reduces an IR request or response to the fields every
provider can express (roles, text, tool names and inputs, generation
parameters, finish reasons) so strip-mode and cross-provider results can be
compared field by field.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List, Optional, Union

from rosetta.ir.types import (
    CitationPart,
    ImagePart,
    IRRequest,
    IRResponse,
    ReasoningPart,
    RefusalPart,
    TextPart,
    ToolCallPart,
    ToolResultPart,
)


def structural_equal(a: Any, b: Any) -> bool:
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        return _numbers_equal(a, b)
    if isinstance(a, dict):
        if not isinstance(b, dict) or a.keys() != b.keys():
            return False
        return all(structural_equal(a[key], b[key]) for key in a)
    if isinstance(a, (list, tuple)):
        if not isinstance(b, (list, tuple)) or len(a) != len(b):
            return False
        return all(structural_equal(x, y) for x, y in zip(a, b))
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    return False


def _numbers_equal(a: Union[int, float], b: Union[int, float]) -> bool:
    # Python compares int and float by exact value, so 2**53 + 1 != 2**53.0.
    return a == b


def first_difference(a: Any, b: Any, path: str = "$") -> Optional[str]:
    """Return the JSON path of the first structural difference, or None."""
    if structural_equal(a, b):
        return None
    if isinstance(a, dict) and isinstance(b, dict):
        for key in sorted(set(a) | set(b)):
            if key not in a or key not in b:
                return f"{path}.{key}"
            found = first_difference(a[key], b[key], f"{path}.{key}")
            if found:
                return found
    if isinstance(a, list) and isinstance(b, list) and len(a) == len(b):
        for index, (x, y) in enumerate(zip(a, b)):
            found = first_difference(x, y, f"{path}[{index}]")
            if found:
                return found
    return path


# ═══════════════════════════════════════════════════════════════════════════
# SEMANTIC PROJECTION
# ═══════════════════════════════════════════════════════════════════════════

def _project_part(part: Any) -> Optional[Dict[str, Any]]:
    if isinstance(part, TextPart):
        return {"text": part.text}
    if isinstance(part, ImagePart):
        return {"image": part.data or part.url}
    if isinstance(part, ToolCallPart):
        return {"tool_call": part.tool_name, "input": part.tool_input}
    if isinstance(part, ToolResultPart):
        texts = [p.text for p in part.content if isinstance(p, TextPart)]
        return {"tool_result": _normalise_result_text("".join(texts))}
    if isinstance(part, ReasoningPart):
        return {"reasoning": part.text}
    if isinstance(part, RefusalPart):
        return {"refusal": part.reason}
    if isinstance(part, CitationPart):
        return None
    return {part.type: True}


def _normalise_result_text(text: str) -> Any:
    # Formats that carry tool output as JSON objects re-encode it; compare by value.
    try:
        return json.loads(text)
    except ValueError:
        return text


def _merge_text(parts: List[Dict[str, Any]]) -> List[Dict[str, Any]]:
    merged: List[Dict[str, Any]] = []
    for part in parts:
        if merged and "text" in part and "text" in merged[-1]:
            merged[-1] = {"text": merged[-1]["text"] + part["text"]}
        else:
            merged.append(part)
    return merged


def _project_messages(messages) -> List[Dict[str, Any]]:
    projected: List[Dict[str, Any]] = []
    for message in messages:
        parts = [p for p in (_project_part(part) for part in message.content) if p is not None]
        role = message.role
        # Adjacent same-role turns are a layout choice of the wire format.
        if projected and projected[-1]["role"] == role and role in ("tool", "user"):
            projected[-1]["parts"] = _merge_text(projected[-1]["parts"] + parts)
            continue
        projected.append({"role": role, "parts": _merge_text(parts)})
    return projected


def semantic_projection(value: Union[IRRequest, IRResponse]) -> Dict[str, Any]:
    """Fields every format preserves; used for strip-mode and cross-provider checks."""
    if isinstance(value, IRResponse):
        return {
            "choices": [
                {
                    "finish_reason": choice.finish_reason,
                    "message": _project_messages([choice.message]),
                }
                for choice in value.choices
            ],
        }
    projection: Dict[str, Any] = {
        "messages": _project_messages(value.messages),
        "system": "\n".join(
            p.text for p in (value.system.content if value.system else []) if isinstance(p, TextPart)
        ),
        "tools": [
            {"name": tool.name, "parameters": tool.parameters or {}} for tool in (value.tools or [])
        ],
    }
    if value.generation is not None:
        generation = value.generation
        projection["generation"] = {
            key: val
            for key, val in {
                "temperature": generation.temperature,
                "top_p": generation.top_p,
                "max_tokens": generation.max_tokens,
                "stop_sequences": generation.stop_sequences,
            }.items()
            if val is not None
        }
    return projection


__all__ = ["first_difference", "semantic_projection", "structural_equal"]
