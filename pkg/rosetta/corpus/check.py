"""Round-trip verification of corpus entries.

Preserve mode: provider -> IR -> same provider must give a structurally equal
JSON tree. Strip mode: the IR of the re-emitted payload must have the same
semantic projection as the IR of the original.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

from tabulate import tabulate

from rosetta.converters.context import ConversionWarning, MetadataMode
from rosetta.converters.errors import RosettaError
from rosetta.converters.registry import ConverterRegistry, as_mode
from rosetta.corpus.payloads import CorpusEntry
from rosetta.ir.compare import first_difference, semantic_projection, structural_equal

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
MALFORMED = "malformed"
ERROR = "error"


@dataclass
class RoundTripResult:
    entry: CorpusEntry
    mode: MetadataMode
    status: str
    warnings: List[ConversionWarning] = field(default_factory=list)
    detail: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> Dict[str, Any]:
        out = {
            "entry": self.entry.key,
            "kind": self.entry.kind,
            "mode": self.mode.value,
            "status": self.status,
            "warnings": [warning.to_dict() for warning in self.warnings],
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def check_entry(registry: ConverterRegistry, entry: CorpusEntry, mode="preserve") -> RoundTripResult:
    mode = as_mode(mode)
    if entry.error is not None:
        return RoundTripResult(entry, mode, MALFORMED, detail=entry.error)
    original = entry.load()
    try:
        there = registry.to_ir(original, entry.format, entry.kind, mode, entry.model_hint)
        back = registry.from_ir(there.ir, entry.format, entry.kind, mode, source=entry.format)
        warnings = there.warnings + back.warnings
        if mode == MetadataMode.PRESERVE:
            if structural_equal(original, back.body):
                return RoundTripResult(entry, mode, PASS, warnings)
            return RoundTripResult(entry, mode, FAIL, warnings,
                                   f"differs at {first_difference(original, back.body)}")
        again = registry.to_ir(back.body, entry.format, entry.kind, mode, entry.model_hint)
        expected, actual = semantic_projection(there.ir), semantic_projection(again.ir)
        if expected == actual:
            return RoundTripResult(entry, mode, PASS, warnings)
        return RoundTripResult(entry, mode, FAIL, warnings,
                               f"semantic difference at {first_difference(expected, actual)}")
    except RosettaError as e:
        status = MALFORMED if e.code == "malformed_input" else ERROR
        return RoundTripResult(entry, mode, status, detail=str(e))


def check_corpus(registry: ConverterRegistry, entries: Iterable[CorpusEntry], mode="preserve") -> List[RoundTripResult]:
    results = [check_entry(registry, entry, mode) for entry in entries]
    failed = [result for result in results if not result.passed]
    logger.debug("round-tripped %d entries, %d not passing", len(results), len(failed))
    return results


def summarize(results: Iterable[RoundTripResult]) -> List[Dict[str, Any]]:
    """Counts per (format, category) row."""
    rows: Dict[tuple, Counter] = defaultdict(Counter)
    for result in results:
        counts = rows[(result.entry.format.value, result.entry.category)]
        counts[result.status] += 1
        counts["warnings"] += len(result.warnings)
    return [
        {"format": fmt, "category": category, "total": sum(counts[s] for s in (PASS, FAIL, MALFORMED, ERROR)),
         **{status: counts[status] for status in (PASS, FAIL, MALFORMED, ERROR)}, "warnings": counts["warnings"]}
        for (fmt, category), counts in sorted(rows.items())
    ]


def report_table(results: Iterable[RoundTripResult]) -> str:
    return tabulate(summarize(results), headers="keys", tablefmt="github")


__all__ = ["ERROR", "FAIL", "MALFORMED", "PASS", "RoundTripResult", "check_corpus", "check_entry",
           "report_table", "summarize"]
