#!/usr/bin/env python3
"""
Rosetta command line
Convert, detect, round-trip and stream-translate LLM API payloads
"""

import json
import logging
import os
import sys

import click
from rich.console import Console
from rich.logging import RichHandler

from rosetta import __version__, sse
from rosetta.bench import run_bench
from rosetta.config.defaults import BENCH_DEFAULT_ITERATIONS, BENCH_PAYLOADS
from rosetta.converters.context import StreamContext
from rosetta.converters.errors import MalformedInput, RosettaError
from rosetta.converters.registry import as_format, as_mode, default_registry
from rosetta.corpus import corpus, load_corpus, split_trace, write_corpus
from rosetta.corpus.check import check_corpus, report_table
from rosetta.detect import detect_format
from rosetta.ir.serialize import dumps, parse_request, parse_response, to_json
from rosetta.ir.types import ProviderFormat

logger = logging.getLogger("rosetta.cli")

FORMATS = [fmt.value for fmt in ProviderFormat]
KINDS = ["request", "response"]
MODES = ["strip", "preserve"]

stderr = Console(stderr=True)


class ConversionFailed(click.ClickException):
    """A library error surfaced as exit code 1 with its JSON form on stderr."""

    exit_code = 1

    def __init__(self, error):
        super().__init__(str(error))
        self.error = error

    def show(self, file=None):
        body = self.error.to_dict() if isinstance(self.error, RosettaError) else {"error": "failed", "message": str(self.error)}
        click.echo(json.dumps(body, ensure_ascii=False), err=True)


def setup_logging(verbose):
    if verbose:
        level = "DEBUG" if verbose > 1 else "INFO"
    else:
        level = os.environ.get("ROSETTA_LOG_LEVEL", "WARNING").upper()
    handler = RichHandler(console=stderr, show_path=False, markup=False)
    root = logging.getLogger("rosetta")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False


def read_json(stream):
    raw = stream.read()
    try:
        return json.loads(raw)
    except (ValueError, UnicodeDecodeError) as e:
        raise ConversionFailed(MalformedInput(f"input is not valid JSON: {e}", "$"))


def emit_warnings(warnings):
    for warning in warnings:
        click.echo(json.dumps(warning.to_dict(), ensure_ascii=False), err=True)


def write_output(output, text):
    if output == "-":
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)


@click.group()
@click.option("-v", "--verbose", count=True, help="More logging (-vv for debug)")
@click.version_option(__version__, prog_name="rosetta")
def cli(verbose):
    """Translate LLM API payloads between provider formats"""
    setup_logging(verbose)


@cli.command()
@click.argument("input_file", type=click.File("rb"), default="-")
@click.option("--from", "source", type=click.Choice(FORMATS + ["auto", "ir"]), required=True, help="Input format")
@click.option("--to", "target", type=click.Choice(FORMATS + ["ir"]), required=True, help="Output format")
@click.option("--kind", type=click.Choice(KINDS), default="request", show_default=True)
@click.option("--mode", type=click.Choice(MODES), default="strip", show_default=True)
@click.option("--model", "model_hint", help="Model name for formats that carry it outside the body (google)")
@click.option("-o", "--output", default="-", help="Output file (default stdout)")
def convert(input_file, source, target, kind, mode, model_hint, output):
    """Convert one payload read from INPUT_FILE (or stdin)"""
    body = read_json(input_file)
    registry = default_registry()
    try:
        if source == "auto":
            detected = detect_format(body)
            if not detected.known:
                raise ConversionFailed(MalformedInput("could not detect the input format", "$"))
            logger.info("detected %s (%s)", detected.name, ", ".join(detected.signals))
            source = detected.name
        if source == "ir":
            ir = parse_request(body) if kind == "request" else parse_response(body)
            warnings = []
        else:
            translation = registry.to_ir(body, source, kind, mode, model_hint)
            ir, warnings = translation.ir, list(translation.warnings)
        if target == "ir":
            text = dumps(ir)
        else:
            translation = registry.from_ir(ir, target, kind, mode)
            warnings.extend(translation.warnings)
            text = json.dumps(translation.body, indent=2, ensure_ascii=False) + "\n"
    except RosettaError as e:
        raise ConversionFailed(e)
    except ValueError as e:
        # pydantic validation of --from ir input
        raise ConversionFailed(MalformedInput(f"invalid IR: {e}", "$"))
    emit_warnings(warnings)
    write_output(output, text)


@cli.command()
@click.argument("input_file", type=click.File("rb"), default="-")
def detect(input_file):
    """Print the detected provider format of a request body"""
    result = detect_format(read_json(input_file))
    click.echo(json.dumps(result.to_dict()))
    if not result.known:
        sys.exit(1)


@cli.command()
@click.option("--format", "formats", type=click.Choice(FORMATS), multiple=True, help="Only these formats")
@click.option("--mode", type=click.Choice(MODES), default="preserve", show_default=True)
@click.option("--corpus", "corpus_dir", type=click.Path(exists=True, file_okay=False),
              help="Corpus directory (default: the shipped corpus)")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the JSON report here")
def roundtrip(formats, mode, corpus_dir, output):
    """Round-trip every corpus payload and compare with the original"""
    if corpus_dir:
        entries = [item for item in load_corpus(corpus_dir) if not formats or item.format.value in formats]
    else:
        entries = [item for item in corpus() if not formats or item.format.value in formats]
    if not entries:
        raise click.UsageError("no corpus entries selected")
    results = check_corpus(default_registry(), entries, mode)
    for result in results:
        line = f"{result.status.upper():9} {result.entry.key}.{result.entry.kind}"
        if result.warnings:
            line += f"  ({len(result.warnings)} warning(s))"
        if result.detail:
            line += f"  {result.detail}"
        click.echo(line)
    click.echo()
    click.echo(report_table(results))
    passed = sum(result.passed for result in results)
    click.echo(f"\n{passed}/{len(results)} passed in {mode} mode")
    if output:
        report = {"mode": mode, "passed": passed, "total": len(results),
                  "results": [result.to_dict() for result in results]}
        with open(output, "w", encoding="utf-8") as handle:
            json.dump(report, handle, indent=2)
            handle.write("\n")
    if passed != len(results):
        sys.exit(1)


@cli.command(name="corpus")
@click.argument("directory", type=click.Path(file_okay=False))
def export_corpus(directory):
    """Write the shipped corpus and SSE traces to DIRECTORY"""
    written = write_corpus(directory)
    click.echo(f"✅ wrote {len(written)} files to {directory}")


@cli.command()
@click.argument("trace_file", type=click.File("rb"), default="-")
@click.option("--from", "source", type=click.Choice(FORMATS), help="Trace format (default: from the trace header)")
@click.option("--to", "target", type=click.Choice(FORMATS + ["ir"]), required=True, help="Output dialect")
@click.option("--mode", type=click.Choice(MODES), default="strip", show_default=True)
@click.option("--model", "model_hint", help="Model name when the trace does not carry one")
@click.option("--google-stream-mode", type=click.Choice(["accumulated", "incremental"]),
              help="Chunk model of a google trace (default: from the header, else accumulated)")
@click.option("-o", "--output", default="-", help="Output file (default stdout)")
def stream(trace_file, source, target, mode, model_hint, google_stream_mode, output):
    """Translate a recorded SSE trace into another dialect"""
    header, body = split_trace(trace_file.read())
    source = source or header.get("format")
    if source not in FORMATS:
        raise click.UsageError("trace has no format header; pass --from")
    cursor = {}
    stream_mode = google_stream_mode or header.get("google_stream_mode")
    if stream_mode:
        cursor["google_stream_mode"] = stream_mode
    model_hint = model_hint or header.get("model")
    registry = default_registry()
    try:
        payloads = sse.payloads(sse.parse_bytes(body))
        if target == "ir":
            converter = registry.get(source)
            ctx = StreamContext(mode=as_mode(mode), source_format=as_format(source), model_hint=model_hint,
                                provider_cursor=cursor)
            events = list(converter.stream_response_from_provider(payloads, ctx))
            text = "".join(json.dumps(to_json(event), ensure_ascii=False) + "\n" for event in events)
            warnings = ctx.warnings
        else:
            translator = registry.stream_translator(source, target, mode, model_hint, **cursor)
            out = list(translator.run(payloads))
            dialect = registry.get(target).sse_dialect
            text = sse.encode_stream(out, dialect).decode("utf-8")
            warnings = translator.warnings
    except RosettaError as e:
        raise ConversionFailed(e)
    emit_warnings(warnings)
    write_output(output, text)


@cli.command()
@click.option("--payload", "payloads", type=click.Choice(BENCH_PAYLOADS), multiple=True,
              help="Payload rows to time (default: all)")
@click.option("--format", "formats", type=click.Choice(FORMATS), multiple=True, help="Only these formats")
@click.option("--iterations", type=click.IntRange(min=1), default=BENCH_DEFAULT_ITERATIONS, show_default=True)
@click.option("--no-pin", is_flag=True, help="Do not pin the process to one core")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the JSON report here")
def bench(payloads, formats, iterations, no_pin, output):
    """Time provider -> IR -> provider round trips"""
    report = run_bench(payloads or BENCH_PAYLOADS, formats or None, iterations, pin=not no_pin)
    click.echo(report.table())
    machine = report.machine
    click.echo(f"\n{machine['implementation']} {machine['python']} on {machine['platform']}")
    if not report.ok:
        stderr.print("[yellow]⚠️  some cells exceed the latency limits[/yellow]")
    if output:
        report.write(output)
        click.echo(f"📊 report written to {output}")


@cli.command()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), required=True, help="Gateway YAML config")
def serve(config_path):
    """Run the translation gateway"""
    from rosetta.gateway import load_config, run_gateway

    try:
        config = load_config(config_path)
    except RosettaError as e:
        raise ConversionFailed(e)
    run_gateway(config)


def main():
    cli(prog_name="rosetta")


if __name__ == "__main__":
    main()
