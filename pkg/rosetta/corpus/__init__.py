"""Round-trip corpus and SSE traces, shipped in code and writable to disk.

On disk the corpus is laid out as ``<dir>/<format>/<category>/<name>.<kind>.json``
and the traces as ``<dir>/traces/<format>/<name>.sse``.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import List, Optional, Union

from rosetta.corpus.payloads import CATEGORIES, GOOGLE_MODEL, CorpusEntry, corpus, entry
from rosetta.corpus.traces import SseTrace, split_trace, trace_payloads, traces
from rosetta.ir.types import ProviderFormat

logger = logging.getLogger(__name__)

KINDS = ("request", "response")


def write_corpus(directory: Union[str, Path]) -> List[Path]:
    """Write every payload and trace below ``directory``; returns the files written."""
    root = Path(directory)
    written = []
    for item in corpus():
        path = root / item.format.value / item.category / f"{item.name}.{item.kind}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(item.body, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        written.append(path)
    for trace in traces():
        path = root / "traces" / trace.format.value / f"{trace.name}.sse"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(trace.render())
        written.append(path)
    logger.info("wrote %d corpus files to %s", len(written), root)
    return written


def load_corpus(directory: Union[str, Path], fmt: Optional[ProviderFormat] = None) -> List[CorpusEntry]:
    """Read a corpus directory written by :func:`write_corpus` (or laid out the same way)."""
    root = Path(directory)
    entries = []
    for path in sorted(root.glob("*/*/*.json")):
        provider_dir, category = path.parent.parent.name, path.parent.name
        try:
            provider = ProviderFormat(provider_dir)
        except ValueError:
            logger.debug("skipping %s: %r is not a format", path, provider_dir)
            continue
        if fmt is not None and provider != ProviderFormat(fmt):
            continue
        name, _, kind = path.name[: -len(".json")].rpartition(".")
        if kind not in KINDS or not name:
            logger.debug("skipping %s: expected <name>.<request|response>.json", path)
            continue
        hint = GOOGLE_MODEL if provider == ProviderFormat.GOOGLE and kind == "request" else None
        try:
            body = json.loads(path.read_text(encoding="utf-8"))
        except ValueError as e:
            entries.append(CorpusEntry(name, provider, category, kind, {}, hint, f"invalid JSON: {e}"))
            continue
        entries.append(CorpusEntry(name, provider, category, kind, body, hint))
    return entries


__all__ = [
    "CATEGORIES",
    "CorpusEntry",
    "KINDS",
    "SseTrace",
    "corpus",
    "entry",
    "load_corpus",
    "split_trace",
    "trace_payloads",
    "traces",
    "write_corpus",
]
