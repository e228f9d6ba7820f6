"""Structural validation for IR requests and responses.

Validation never raises: every broken invariant becomes a ``Violation`` with a
JSON path, and the report lists all of them. Plain dicts are accepted too;
anything pydantic refuses to parse (unknown part types, wrong field types) is
reported the same way, and the elements it refused are cut so the remainder
still gets the semantic checks.
"""

from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Set, Tuple, Union

from pydantic import ValidationError

from rosetta.ir.types import (
    CONTENT_PART_TYPES,
    MESSAGE_ROLES,
    PART_ROLE_RESTRICTIONS,
    AssistantMessage,
    FilePart,
    ImagePart,
    IRRequest,
    IRResponse,
    SystemMessage,
    ToolCallPart,
    ToolMessage,
    ToolResultPart,
)


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def to_dict(self) -> Dict[str, str]:
        return {"json_path": self.path, "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def paths(self) -> List[str]:
        return [v.path for v in self.violations]

    def to_dict(self) -> Dict[str, Any]:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


_UNION_TAGS = frozenset(CONTENT_PART_TYPES) | frozenset(MESSAGE_ROLES)


def _loc_to_path(loc: Sequence[Union[str, int]]) -> str:
    path = "$"
    previous: Union[str, int, None] = None
    for item in loc:
        if isinstance(item, int):
            path += f"[{item}]"
        elif isinstance(previous, int) and item in _UNION_TAGS:
            # pydantic puts the discriminator tag right after the list index
            pass
        else:
            path += f".{item}"
        previous = item
    return path


def _parse_failures(exc: ValidationError) -> List[Violation]:
    return [Violation(_loc_to_path(err["loc"]), err["msg"]) for err in exc.errors()]



# Placeholders for required envelope fields, so a document missing one can
# still be checked for everything else.
_REQUIRED_PLACEHOLDERS: Dict[str, Any] = {"model": "", "messages": [], "id": "", "created": 0, "choices": []}
_SEGMENT = re.compile(r"\.[^.\[]+|\[\d+\]")


@dataclass
class _Salvage:
    """Parse failures plus the list elements cut to get a checkable model.

    ``removed`` maps a list's path (original indices) to the indices cut from
    it; semantic findings on the pruned model are mapped back through it.
    """

    failures: List[Violation] = field(default_factory=list)
    removed: Dict[str, Set[int]] = field(default_factory=dict)

    def _original_path(self, path: str) -> str:
        original = "$"
        for segment in _SEGMENT.findall(path[1:]):
            if segment.startswith("[") and original in self.removed:
                wanted, position = int(segment[1:-1]), -1
                while wanted >= 0:
                    position += 1
                    if position not in self.removed[original]:
                        wanted -= 1
                segment = f"[{position}]"
            original += segment
        return original

    def _covered(self, path: str) -> bool:
        if path in self.removed:
            return True
        return any(
            path == failure.path or path.startswith((failure.path + ".", failure.path + "["))
            for failure in self.failures
        )

    def merge(self, found: List[Violation]) -> List[Violation]:
        kept = []
        for violation in found:
            path = self._original_path(violation.path)
            if not self._covered(path):
                kept.append(Violation(path, violation.message))
        return self.failures + kept


def _cut_point(data: Dict[str, Any], loc: Sequence[Union[str, int]]) -> Tuple[Any, Union[str, int], str]:
    """Deepest list element on ``loc`` present in ``data``, else the deepest dict key."""
    node: Any = data
    list_cut = key_cut = None
    previous: Union[str, int, None] = None
    for depth, item in enumerate(loc):
        if isinstance(item, int) and isinstance(node, list) and 0 <= item < len(node):
            list_cut = (node, item, _loc_to_path(loc[:depth]))
            node = node[item]
        elif isinstance(item, str) and isinstance(node, dict) and item in node:
            key_cut = (node, item, "")
            node = node[item]
        elif isinstance(item, str) and isinstance(previous, int) and item in _UNION_TAGS:
            pass
        else:
            break
        previous = item
    return list_cut or key_cut or (None, None, "")


def _salvage(model_cls, raw: Any, exc: ValidationError):
    """Cut whatever pydantic refused and parse the rest; None when that still fails."""
    salvage = _Salvage(_parse_failures(exc))
    if not isinstance(raw, dict):
        return None, salvage
    data = copy.deepcopy(raw)
    cuts = [_cut_point(data, err["loc"]) for err in exc.errors()]
    by_list: Dict[int, Tuple[list, Set[int]]] = {}
    for container, key, list_path in cuts:
        if isinstance(container, list):
            by_list.setdefault(id(container), (container, set()))[1].add(key)
            salvage.removed.setdefault(list_path, set()).add(key)
        elif isinstance(container, dict):
            container.pop(key, None)
    for container, indices in by_list.values():
        for index in sorted(indices, reverse=True):
            del container[index]
    for name in model_cls.model_fields:
        if name in _REQUIRED_PLACEHOLDERS:
            data.setdefault(name, copy.deepcopy(_REQUIRED_PLACEHOLDERS[name]))
    try:
        return model_cls.model_validate(data), salvage
    except ValidationError:
        return None, salvage

def _check_parts(message, path: str, out: List[Violation]) -> None:
    role = message.role
    for index, part in enumerate(message.content):
        part_path = f"{path}.content[{index}]"
        allowed = PART_ROLE_RESTRICTIONS.get(part.type)
        if allowed is not None and role not in allowed:
            out.append(Violation(part_path, f"role-constrained content: {part.type} not allowed in {role} message"))
        if isinstance(part, ToolResultPart) and not part.tool_call_id:
            out.append(Violation(f"{part_path}.tool_call_id", "tool_call_id must be non-empty"))
        if isinstance(part, ToolCallPart) and not part.tool_call_id:
            out.append(Violation(f"{part_path}.tool_call_id", "tool_call_id must be non-empty"))
        if isinstance(part, ImagePart) and (part.data is None) == (part.url is None):
            out.append(Violation(part_path, "image needs exactly one of data or url"))
        if isinstance(part, FilePart) and part.data is None and part.url is None:
            out.append(Violation(part_path, "file needs data or url"))
        if isinstance(part, ToolResultPart):
            for inner_index, inner in enumerate(part.content):
                if isinstance(inner, ImagePart) and (inner.data is None) == (inner.url is None):
                    out.append(Violation(f"{part_path}.content[{inner_index}]", "image needs exactly one of data or url"))
    if role in ("user", "tool") and not message.content:
        out.append(Violation(f"{path}.content", "non-empty required"))


def _check_messages(request: IRRequest, out: List[Violation]) -> None:
    if not request.messages:
        out.append(Violation("$.messages", "non-empty required"))
        return
    if request.system is not None:
        _check_parts(request.system, "$.system", out)
    last = len(request.messages) - 1
    for index, message in enumerate(request.messages):
        path = f"$.messages[{index}]"
        _check_parts(message, path, out)
        if isinstance(message, SystemMessage) and request.system is not None:
            out.append(Violation(path, "system instruction given both in system and inside messages"))
        if not isinstance(message, AssistantMessage) or index == last:
            continue
        answered = {
            part.tool_call_id
            for later in request.messages[index + 1:]
            if isinstance(later, ToolMessage)
            for part in later.content
            if isinstance(part, ToolResultPart)
        }
        for part_index, part in enumerate(message.content):
            if isinstance(part, ToolCallPart) and part.tool_call_id not in answered:
                out.append(Violation(
                    f"{path}.content[{part_index}]",
                    f"tool call {part.tool_call_id!r} has no matching tool result",
                ))


def _check_tools(request: IRRequest, out: List[Violation]) -> None:
    names = set()
    for index, tool in enumerate(request.tools or []):
        path = f"$.tools[{index}]"
        if not tool.name:
            out.append(Violation(f"{path}.name", "tool name must be non-empty"))
        elif tool.name in names:
            out.append(Violation(f"{path}.name", f"duplicate tool name {tool.name!r}"))
        names.add(tool.name)
        if tool.parameters is not None and tool.parameters.get("type") != "object":
            out.append(Violation(f"{path}.parameters", 'parameters must have top-level "type": "object"'))
    choice = request.tool_choice
    if choice is None:
        return
    if choice.mode == "tool":
        if not choice.tool_name:
            out.append(Violation("$.tool_choice.tool_name", "tool_name required when mode is tool"))
        elif choice.tool_name not in names:
            out.append(Violation("$.tool_choice.tool_name", f"unknown tool {choice.tool_name!r}"))
    elif choice.tool_name is not None:
        out.append(Violation("$.tool_choice.tool_name", "tool_name only allowed when mode is tool"))


def _check_generation(request: IRRequest, out: List[Violation]) -> None:
    gen = request.generation
    if gen is not None:
        if gen.temperature is not None and gen.temperature < 0:
            out.append(Violation("$.generation.temperature", "must be >= 0"))
        if gen.top_p is not None and not 0 <= gen.top_p <= 1:
            out.append(Violation("$.generation.top_p", "must be in [0, 1]"))
        if gen.top_k is not None and gen.top_k <= 0:
            out.append(Violation("$.generation.top_k", "must be a positive integer"))
        if gen.max_tokens is not None and gen.max_tokens <= 0:
            out.append(Violation("$.generation.max_tokens", "must be a positive integer"))
        if gen.logprobs is not None and gen.logprobs.top_logprobs is not None and gen.logprobs.top_logprobs < 0:
            out.append(Violation("$.generation.logprobs.top_logprobs", "must be >= 0"))
    if request.reasoning is not None and request.reasoning.budget_tokens is not None:
        if request.reasoning.budget_tokens <= 0:
            out.append(Violation("$.reasoning.budget_tokens", "must be a positive integer"))
    fmt = request.response_format
    if fmt is not None and (fmt.kind == "json_schema") != (fmt.json_schema is not None):
        out.append(Violation("$.response_format.schema", "schema required exactly when kind is json_schema"))


def validate_ir_request(request: Union[IRRequest, Dict[str, Any]]) -> ValidationReport:
    salvage = _Salvage()
    if not isinstance(request, IRRequest):
        try:
            request = IRRequest.model_validate(request)
        except ValidationError as exc:
            request, salvage = _salvage(IRRequest, request, exc)
            if request is None:
                return ValidationReport(salvage.failures)
    out: List[Violation] = []
    if not request.model:
        out.append(Violation("$.model", "non-empty required"))
    _check_messages(request, out)
    _check_tools(request, out)
    _check_generation(request, out)
    return ValidationReport(salvage.merge(out))


def validate_ir_response(response: Union[IRResponse, Dict[str, Any]]) -> ValidationReport:
    salvage = _Salvage()
    if not isinstance(response, IRResponse):
        try:
            response = IRResponse.model_validate(response)
        except ValidationError as exc:
            response, salvage = _salvage(IRResponse, response, exc)
            if response is None:
                return ValidationReport(salvage.failures)
    out: List[Violation] = []
    if not response.choices:
        out.append(Violation("$.choices", "non-empty required"))
    indices = sorted(choice.index for choice in response.choices)
    if indices != list(range(len(indices))):
        out.append(Violation("$.choices", "choice indices must be contiguous from 0"))
    for position, choice in enumerate(response.choices):
        _check_parts(choice.message, f"$.choices[{position}].message", out)
    if response.usage is not None:
        for name in ("prompt_tokens", "completion_tokens", "reasoning_tokens", "cached_tokens"):
            value = getattr(response.usage, name)
            if value is not None and value < 0:
                out.append(Violation(f"$.usage.{name}", "must be >= 0"))
    return ValidationReport(salvage.merge(out))


__all__ = ["ValidationReport", "Violation", "validate_ir_request", "validate_ir_response"]
