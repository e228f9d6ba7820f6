"""Shared fixtures: converter registry, contexts and corpus accessors."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rosetta.converters.context import ConversionContext, MetadataMode  # noqa: E402
from rosetta.converters.registry import default_registry  # noqa: E402
from rosetta.corpus import entry  # noqa: E402


@pytest.fixture(scope="session")
def registry():
    return default_registry()


@pytest.fixture
def strip_ctx():
    return ConversionContext(mode=MetadataMode.STRIP)


@pytest.fixture
def preserve_ctx():
    return ConversionContext(mode=MetadataMode.PRESERVE)


@pytest.fixture
def payload():
    """Fresh copy of a corpus body by ``<format>/<category>/<name>``."""
    def load(key):
        return entry(key).load()
    return load


@pytest.fixture
def round_trip(registry):
    """provider -> IR -> same provider; returns (body, warnings, ir)."""
    def run(body, fmt, kind="request", mode="preserve", model_hint=None):
        there = registry.to_ir(body, fmt, kind, mode, model_hint)
        back = registry.from_ir(there.ir, fmt, kind, mode, source=fmt)
        return back.body, there.warnings + back.warnings, there.ir
    return run
