#!/usr/bin/env python3
"""
Benchmark harness tests
"""

import json

import pytest

from rosetta import bench
from rosetta.bench import PAYLOAD_ENTRIES, BenchReport, BenchResult, percentile, run_bench, time_round_trip
from rosetta.config.defaults import BENCH_PAYLOADS
from rosetta.corpus import entry
from rosetta.ir.types import ProviderFormat


def test_every_cell_has_a_corpus_entry():
    assert set(PAYLOAD_ENTRIES) == set(BENCH_PAYLOADS)
    for row in PAYLOAD_ENTRIES.values():
        assert set(row) == set(ProviderFormat)
        for key in row.values():
            entry(key)


@pytest.mark.parametrize(
    "samples, fraction, expected",
    [
        ([5.0], 0.95, 5.0),
        ([1.0, 2.0, 3.0, 4.0], 0.5, 2.0),
        ([float(n) for n in range(1, 101)], 0.95, 95.0),
        ([3.0, 1.0, 2.0], 1.0, 3.0),
    ],
)
def test_percentile_is_nearest_rank(samples, fraction, expected):
    assert percentile(samples, fraction) == expected


def test_time_round_trip_returns_one_sample_per_iteration(registry):
    item = entry("google/content/text")
    samples = time_round_trip(registry, item.load(), ProviderFormat.GOOGLE, "request", 4, item.model_hint)
    assert len(samples) == 4
    assert all(sample > 0 for sample in samples)


def test_run_bench_rows(registry):
    report = run_bench(["simple", "responses"], ["anthropic"], iterations=2, registry=registry, pin=False)
    assert [(r.payload, r.format, r.kind) for r in report.results] == [
        ("simple", "anthropic", "request"),
        ("responses", "anthropic", "response"),
    ]
    assert report.pinned_core is None
    assert all(r.iterations == 2 for r in report.results)


def test_reference_ratio(registry):
    [result] = run_bench(["simple"], ["openai_chat"], iterations=2, registry=registry, pin=False).results
    assert result.reference_us == 21.0
    assert result.ratio == pytest.approx(result.median_us / 21.0)


def test_limits():
    fast = BenchResult("simple", "google", "request", 10, median_us=50.0, p95_us=90.0)
    slow = BenchResult("simple", "google", "request", 10, median_us=50.0, p95_us=2500.0)
    assert fast.within_limits
    assert not slow.within_limits
    assert not BenchReport([fast, slow], machine={}).ok
    assert fast.ratio is None


def test_report_file(tmp_path):
    result = BenchResult("tools", "openai_responses", "request", 5, 12.5, 20.0, reference_us=10.0)
    report = BenchReport([result], machine={"python": "3.12.1"}, pinned_core=0)
    path = report.write(tmp_path / "nested" / "bench.json")
    data = json.loads(path.read_text())
    assert data["pinned_core"] == 0
    assert data["limits_us"] == {"median": 1000.0, "p95": 2000.0}
    assert data["results"][0]["ratio"] == 1.25
    assert data["results"][0]["within_limits"] is True
    assert "| tools" in report.table()


def test_machine_spec_fields():
    assert {"platform", "python", "implementation", "cpu_count"} <= set(bench.machine_spec())


def test_pinning_uses_lowest_core(mocker):
    mocker.patch.object(bench.os, "sched_getaffinity", create=True, return_value={3, 1, 2})
    pin = mocker.patch.object(bench.os, "sched_setaffinity", create=True)
    assert bench.pin_to_one_core() == 1
    pin.assert_called_once_with(0, {1})


def test_pinning_failure_is_not_fatal(mocker):
    mocker.patch.object(bench.os, "sched_getaffinity", create=True, return_value={0, 1})
    mocker.patch.object(bench.os, "sched_setaffinity", create=True, side_effect=OSError("not permitted"))
    assert bench.pin_to_one_core() is None


def test_pinned_restores_original_mask(mocker):
    mocker.patch.object(bench.os, "sched_getaffinity", create=True, return_value={0, 1, 2})
    setaffinity = mocker.patch.object(bench.os, "sched_setaffinity", create=True)
    with bench.pinned() as core:
        assert core == 0
        setaffinity.assert_called_once_with(0, {0})
    assert setaffinity.call_args_list[-1] == mocker.call(0, {0, 1, 2})


def test_pinned_restores_mask_after_error(mocker):
    mocker.patch.object(bench.os, "sched_getaffinity", create=True, return_value={2, 3})
    setaffinity = mocker.patch.object(bench.os, "sched_setaffinity", create=True)
    with pytest.raises(RuntimeError):
        with bench.pinned():
            raise RuntimeError("boom")
    assert setaffinity.call_args_list == [mocker.call(0, {2}), mocker.call(0, {2, 3})]


def test_run_bench_leaves_affinity_as_found(mocker, registry):
    mocker.patch.object(bench.os, "sched_getaffinity", create=True, return_value={4, 5})
    setaffinity = mocker.patch.object(bench.os, "sched_setaffinity", create=True)
    report = run_bench(["simple"], ["openai_chat"], iterations=1, registry=registry)
    assert report.pinned_core == 4
    assert setaffinity.call_args_list == [mocker.call(0, {4}), mocker.call(0, {4, 5})]


def test_unpinned_run_never_touches_affinity(mocker):
    setaffinity = mocker.patch.object(bench.os, "sched_setaffinity", create=True)
    with bench.pinned(False) as core:
        assert core is None
    setaffinity.assert_not_called()


@pytest.mark.parametrize("kwargs", [{"iterations": 0}, {"payloads": ["huge"]}])
def test_bad_arguments(kwargs, registry):
    with pytest.raises(ValueError):
        run_bench(**{"formats": ["google"], "iterations": 1, **kwargs}, registry=registry, pin=False)
