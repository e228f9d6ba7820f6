"""Round-trip conversion microbenchmark.

Each cell times ``provider -> IR -> provider`` for one payload shape and one
format: ``perf_counter_ns`` per iteration, aggregated to median and p95 in
microseconds. Rows are simple text, multi-turn and tool-call requests, plus
response bodies.
"""

from __future__ import annotations

import json
import logging
import math
import os
import platform
import statistics
import sys
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Union

from tabulate import tabulate

from rosetta.config.defaults import (
    BENCH_DEFAULT_ITERATIONS,
    BENCH_MEDIAN_LIMIT_US,
    BENCH_P95_LIMIT_US,
    BENCH_PAYLOADS,
    REFERENCE_MEDIANS_US,
)
from rosetta.converters.registry import ConverterRegistry, as_format, default_registry
from rosetta.corpus import entry
from rosetta.ir.types import ProviderFormat

logger = logging.getLogger(__name__)

# corpus entry per (payload row, format)
PAYLOAD_ENTRIES = {
    "simple": {
        ProviderFormat.OPENAI_CHAT: "openai_chat/content/text_string",
        ProviderFormat.OPENAI_RESPONSES: "openai_responses/content/input_message",
        ProviderFormat.ANTHROPIC: "anthropic/content/text_string",
        ProviderFormat.GOOGLE: "google/content/text",
    },
    "multiturn": {
        ProviderFormat.OPENAI_CHAT: "openai_chat/messages/multi_turn",
        ProviderFormat.OPENAI_RESPONSES: "openai_responses/messages/multi_turn",
        ProviderFormat.ANTHROPIC: "anthropic/messages/multi_turn",
        ProviderFormat.GOOGLE: "google/messages/multi_turn",
    },
    "tools": {
        ProviderFormat.OPENAI_CHAT: "openai_chat/tools/tool_round_trip",
        ProviderFormat.OPENAI_RESPONSES: "openai_responses/tools/function_round_trip",
        ProviderFormat.ANTHROPIC: "anthropic/tools/tool_round_trip",
        ProviderFormat.GOOGLE: "google/tools/function_round_trip",
    },
    "responses": {
        ProviderFormat.OPENAI_CHAT: "openai_chat/full/tool_call_response",
        ProviderFormat.OPENAI_RESPONSES: "openai_responses/full/function_call_response",
        ProviderFormat.ANTHROPIC: "anthropic/full/tool_use_response",
        ProviderFormat.GOOGLE: "google/full/function_call_response",
    },
}


@dataclass
class BenchResult:
    payload: str
    format: str
    kind: str
    iterations: int
    median_us: float
    p95_us: float
    reference_us: Optional[float] = None

    @property
    def ratio(self) -> Optional[float]:
        if not self.reference_us:
            return None
        return self.median_us / self.reference_us

    @property
    def within_limits(self) -> bool:
        return self.median_us < BENCH_MEDIAN_LIMIT_US and self.p95_us < BENCH_P95_LIMIT_US

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["ratio"] = round(self.ratio, 3) if self.ratio is not None else None
        out["within_limits"] = self.within_limits
        return out


@dataclass
class BenchReport:
    results: List[BenchResult]
    machine: Dict[str, Any] = field(default_factory=lambda: machine_spec())
    pinned_core: Optional[int] = None

    @property
    def ok(self) -> bool:
        return all(result.within_limits for result in self.results)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "machine": self.machine,
            "pinned_core": self.pinned_core,
            "limits_us": {"median": BENCH_MEDIAN_LIMIT_US, "p95": BENCH_P95_LIMIT_US},
            "ok": self.ok,
            "results": [result.to_dict() for result in self.results],
        }

    def table(self) -> str:
        rows = [
            [r.payload, r.format, r.kind, f"{r.median_us:.1f}", f"{r.p95_us:.1f}",
             "" if r.reference_us is None else f"{r.reference_us:.0f}",
             "" if r.ratio is None else f"{r.ratio:.2f}x"]
            for r in self.results
        ]
        return tabulate(rows, headers=["payload", "format", "kind", "median µs", "p95 µs", "reference µs", "ratio"],
                        tablefmt="github")

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")
        return path


def machine_spec() -> Dict[str, Any]:
    return {
        "platform": platform.platform(),
        "machine": platform.machine(),
        "processor": platform.processor() or "unknown",
        "cpu_count": os.cpu_count(),
        "python": sys.version.split()[0],
        "implementation": platform.python_implementation(),
    }


def pin_to_one_core() -> Optional[int]:
    """Restrict the process to a single core where the OS allows it."""
    if not hasattr(os, "sched_setaffinity"):
        return None
    try:
        core = min(os.sched_getaffinity(0))
        os.sched_setaffinity(0, {core})
    except OSError as e:
        logger.debug("could not pin to one core: %s", e)
        return None
    return core


@contextmanager
def pinned(enabled: bool = True) -> Iterator[Optional[int]]:
    """Pin to one core for the duration of the block, then put the original mask back."""
    original = os.sched_getaffinity(0) if enabled and hasattr(os, "sched_getaffinity") else None
    core = pin_to_one_core() if enabled else None
    try:
        yield core
    finally:
        if core is not None and original is not None:
            try:
                os.sched_setaffinity(0, original)
            except OSError as e:
                logger.warning("could not restore CPU affinity: %s", e)


def percentile(samples: List[float], fraction: float) -> float:
    """Nearest-rank percentile."""
    ordered = sorted(samples)
    rank = max(1, math.ceil(fraction * len(ordered)))
    return ordered[rank - 1]


def time_round_trip(registry: ConverterRegistry, body: Dict[str, Any], fmt: ProviderFormat, kind: str,
                    iterations: int, model_hint: Optional[str] = None) -> List[float]:
    """Per-iteration timings in microseconds."""
    converter = registry.get(fmt)
    # warm-up
    for _ in range(min(iterations, 20)):
        registry.from_ir(registry.to_ir(body, fmt, kind, model_hint=model_hint).ir, fmt, kind, source=fmt)
    samples = []
    clock = time.perf_counter_ns
    for _ in range(iterations):
        start = clock()
        ctx = registry.context(fmt, fmt, "strip", model_hint)
        if kind == "request":
            converter.request_to_provider(converter.request_from_provider(body, ctx), ctx)
        else:
            converter.response_to_provider(converter.response_from_provider(body, ctx), ctx)
        samples.append((clock() - start) / 1000.0)
    return samples


def run_bench(payloads: Iterable[str] = BENCH_PAYLOADS, formats: Optional[Iterable[Any]] = None,
              iterations: int = BENCH_DEFAULT_ITERATIONS, registry: Optional[ConverterRegistry] = None,
              pin: bool = True) -> BenchReport:
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    registry = registry or default_registry()
    selected = [as_format(fmt) for fmt in formats] if formats else list(ProviderFormat)
    payloads = list(payloads)
    for payload in payloads:
        if payload not in PAYLOAD_ENTRIES:
            raise ValueError(f"unknown bench payload {payload!r}; expected one of {', '.join(PAYLOAD_ENTRIES)}")
    results = []
    with pinned(pin) as core:
        for payload in payloads:
            for fmt in selected:
                item = entry(PAYLOAD_ENTRIES[payload][fmt])
                samples = time_round_trip(registry, item.load(), fmt, item.kind, iterations, item.model_hint)
                result = BenchResult(
                    payload=payload,
                    format=fmt.value,
                    kind=item.kind,
                    iterations=iterations,
                    median_us=round(statistics.median(samples), 2),
                    p95_us=round(percentile(samples, 0.95), 2),
                    reference_us=REFERENCE_MEDIANS_US.get((payload, fmt.value)),
                )
                logger.info("bench %s/%s: median %.1f µs, p95 %.1f µs",
                            payload, fmt.value, result.median_us, result.p95_us)
                results.append(result)
    return BenchReport(results, pinned_core=core)


__all__ = ["BenchReport", "BenchResult", "PAYLOAD_ENTRIES", "machine_spec", "percentile", "pinned", "run_bench",
           "time_round_trip"]
