"""Preserve-mode bookkeeping shared by all converters.

Provider-specific keys a converter does not map are stored verbatim under
``provider_metadata[<format>][<key>]``. Layout choices that the IR cannot
express (string vs. parts content, aliases that were used, block splits) go
under the reserved ``"__shape__"`` key of the same namespace. On output the
namespace of the target format is deep-merged back into the emitted object;
other namespaces are ignored.
"""

from __future__ import annotations

import copy
from typing import Any, Dict, Iterable, Mapping, Optional

from rosetta.converters.context import ConversionContext, WarningCode
from rosetta.converters.errors import MalformedInput

SHAPE_KEY = "__shape__"

JsonDict = Dict[str, Any]


def collect_extras(
    ctx: ConversionContext,
    obj: Mapping[str, Any],
    known: Iterable[str],
    path: str,
    designated: Iterable[str] = (),
    nested: Optional[Mapping[str, Iterable[str]]] = None,
) -> Optional[JsonDict]:
    """Unknown keys of ``obj``: kept in preserve mode, warned about in strip mode.

    Null values are kept in preserve mode and dropped silently otherwise.
    ``designated`` keys (ids, timestamps, echo fields) never warn.
    ``nested`` maps a known key holding an object to that object's known keys;
    its unknown keys are collected under the same key.
    """
    known = set(known) | set(nested or ())
    designated = set(designated)
    extras: JsonDict = {}
    for key, value in obj.items():
        if value is None:
            if ctx.preserve:
                extras[key] = None
            continue
        if key in known:
            continue
        if ctx.preserve:
            extras[key] = copy.deepcopy(value)
        elif key not in designated:
            ctx.warn(WarningCode.DROPPED_PROVIDER_FEATURE, f"{key!r} has no IR mapping", f"{path}.{key}")
    for key, inner_known in (nested or {}).items():
        inner = obj.get(key)
        if isinstance(inner, Mapping):
            found = collect_extras(ctx, inner, inner_known, f"{path}.{key}", designated)
            if found:
                extras[key] = found
    return extras or None


def request_extensions(
    ctx: ConversionContext,
    fmt: str,
    body: Mapping[str, Any],
    known: Iterable[str],
    shape: Optional[JsonDict] = None,
    extra: Optional[JsonDict] = None,
) -> Optional[JsonDict]:
    """provider_extensions for a request body.

    Unknown top-level keys and ``extra`` (nested unknown settings, hosted
    tools) are kept in both modes; null-valued known keys and ``shape`` hints
    only in preserve mode.
    """
    known = set(known)
    kept: JsonDict = {}
    for key, value in body.items():
        if key in known:
            if value is None and ctx.preserve:
                kept[key] = None
            continue
        kept[key] = copy.deepcopy(value)
    if extra:
        for key, value in extra.items():
            if isinstance(value, dict) and isinstance(kept.get(key), dict):
                deep_merge(kept[key], value)
            else:
                kept[key] = copy.deepcopy(value)
    if shape and ctx.preserve:
        kept[SHAPE_KEY] = dict(shape)
    return {fmt: kept} if kept else None


HOSTED_TOOLS_KEY = "__hosted_tools__"


def hosted_tools(ctx: ConversionContext, extensions: Optional[Mapping[str, Any]], fmt: str) -> list:
    """Provider-hosted tools of ``fmt`` as [position, raw] pairs; other formats' are dropped."""
    found: list = []
    for source, keys in (extensions or {}).items():
        if not isinstance(keys, dict) or HOSTED_TOOLS_KEY not in keys:
            continue
        if source == fmt:
            found = keys[HOSTED_TOOLS_KEY]
            continue
        for index, (_, raw) in enumerate(keys[HOSTED_TOOLS_KEY]):
            kind = raw.get("type") if isinstance(raw, dict) else None
            ctx.warn(
                WarningCode.DROPPED_PROVIDER_FEATURE,
                f"{source} hosted tool {kind or raw!r} is not supported by {fmt}",
                f"$.provider_extensions.{source}.{HOSTED_TOOLS_KEY}[{index}]",
            )
    return found


def insert_hosted(items: list, hosted: list) -> list:
    for position, raw in sorted(hosted, key=lambda pair: pair[0]):
        items.insert(min(position, len(items)), copy.deepcopy(raw))
    return items


def extension_value(extensions: Optional[Mapping[str, Any]], fmt: str, key: str, default: Any = None) -> Any:
    value = (extensions or {}).get(fmt)
    if not isinstance(value, dict):
        return default
    return value.get(key, default)


def pack(ctx: ConversionContext, fmt: str, extras: Optional[JsonDict] = None,
         shape: Optional[JsonDict] = None) -> Optional[JsonDict]:
    """Build a provider_metadata value for ``fmt``; None in strip mode or when empty."""
    if not ctx.preserve:
        return None
    namespace: JsonDict = dict(extras or {})
    if shape:
        namespace[SHAPE_KEY] = dict(shape)
    if not namespace:
        return None
    return {fmt: namespace}


def namespace(ctx: Optional[ConversionContext], meta: Optional[Mapping[str, Any]], fmt: str) -> JsonDict:
    """The ``fmt`` namespace of ``meta``; other namespaces are ignored."""
    if not meta:
        return {}
    if ctx is not None:
        foreign = [key for key in meta if key != fmt]
        if foreign:
            ctx.note_foreign_metadata(foreign)
    value = meta.get(fmt)
    return value if isinstance(value, dict) else {}


def shape(ctx: Optional[ConversionContext], meta: Optional[Mapping[str, Any]], fmt: str) -> JsonDict:
    value = namespace(ctx, meta, fmt).get(SHAPE_KEY)
    return value if isinstance(value, dict) else {}


def deep_merge(target: JsonDict, extras: Mapping[str, Any]) -> JsonDict:
    for key, value in extras.items():
        if key == SHAPE_KEY:
            continue
        current = target.get(key)
        if isinstance(current, dict) and isinstance(value, dict):
            deep_merge(current, value)
        else:
            target[key] = copy.deepcopy(value)
    return target


def restore(ctx: Optional[ConversionContext], target: JsonDict, meta: Optional[Mapping[str, Any]], fmt: str) -> JsonDict:
    """Merge the stored keys of ``fmt`` back into an emitted object."""
    stored = namespace(ctx, meta, fmt)
    if stored:
        deep_merge(target, stored)
    return target


def merge_meta(*metas: Optional[Mapping[str, Any]]) -> Optional[JsonDict]:
    merged: JsonDict = {}
    for meta in metas:
        for fmt, value in (meta or {}).items():
            if not isinstance(value, dict):
                continue
            target = merged.setdefault(fmt, {})
            deep_merge(target, value)
            if SHAPE_KEY in value:
                target.setdefault(SHAPE_KEY, {}).update(value[SHAPE_KEY])
    return merged or None


def emit_extensions(ctx: ConversionContext, extensions: Optional[Mapping[str, Any]], fmt: str,
                    out: JsonDict) -> JsonDict:
    """Re-emit pass-through request keys when they came from ``fmt``; warn otherwise."""
    if not extensions:
        return out
    for source, keys in extensions.items():
        if not isinstance(keys, dict):
            continue
        if source == fmt:
            for key, value in keys.items():
                if key.startswith("__"):
                    continue
                if isinstance(value, dict) and isinstance(out.get(key), dict):
                    deep_merge(out[key], value)
                else:
                    out[key] = copy.deepcopy(value)
            continue
        for key in keys:
            if not key.startswith("__"):
                ctx.warn(
                    WarningCode.DROPPED_PROVIDER_FEATURE,
                    f"{source} parameter {key!r} not supported by {fmt}",
                    f"$.provider_extensions.{source}.{key}",
                )
    return out


# ═══════════════════════════════════════════════════════════════════════════
# INPUT ACCESS HELPERS
# ═══════════════════════════════════════════════════════════════════════════

def require(obj: Mapping[str, Any], key: str, path: str, kind: type = object) -> Any:
    if not isinstance(obj, Mapping):
        raise MalformedInput("expected a JSON object", path)
    if key not in obj or obj[key] is None:
        raise MalformedInput(f"missing required field {key!r}", f"{path}.{key}")
    value = obj[key]
    if kind is not object and not isinstance(value, kind):
        raise MalformedInput(f"{key!r} has the wrong type", f"{path}.{key}")
    return value


def expect_object(value: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(value, Mapping):
        raise MalformedInput("expected a JSON object", path)
    return value


def expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise MalformedInput("expected a JSON array", path)
    return value


__all__ = [
    "HOSTED_TOOLS_KEY",
    "SHAPE_KEY",
    "collect_extras",
    "deep_merge",
    "emit_extensions",
    "expect_list",
    "expect_object",
    "extension_value",
    "hosted_tools",
    "insert_hosted",
    "merge_meta",
    "namespace",
    "pack",
    "request_extensions",
    "require",
    "restore",
    "shape",
]
