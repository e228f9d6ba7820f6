#!/usr/bin/env python3
"""
Stream event grammar and reassembly tests
"""

import pytest

from rosetta.converters.context import StreamContext, WarningCode
from rosetta.converters.errors import ProtocolViolation
from rosetta.ir.events import GrammarError, check_event_grammar, is_grammar_valid, reassemble, reassembled_text
from rosetta.ir.types import (
    ContentBlockEndEvent,
    ContentBlockStartEvent,
    FinishEvent,
    ReasoningDeltaEvent,
    ReasoningPart,
    StreamEndEvent,
    StreamStartEvent,
    TextDeltaEvent,
    TextPart,
    ToolCallDeltaEvent,
    ToolCallPart,
    ToolCallStartEvent,
    UsageEvent,
    UsageInfo,
)

START = StreamStartEvent(response_id="r1", model="m", created=7)
END = StreamEndEvent()


def text_block(index, *chunks):
    return [ContentBlockStartEvent(block_index=index, block_kind="text")] + [
        TextDeltaEvent(block_index=index, text=chunk) for chunk in chunks
    ] + [ContentBlockEndEvent(block_index=index)]


def tool_block(index, *fragments):
    return [
        ContentBlockStartEvent(block_index=index, block_kind="tool_call"),
        ToolCallStartEvent(block_index=index, tool_call_id="call_1", tool_name="get_weather"),
    ] + [ToolCallDeltaEvent(block_index=index, arguments_fragment=f) for f in fragments] + [
        ContentBlockEndEvent(block_index=index),
    ]


def codes(events):
    return [violation.code for violation in check_event_grammar(events)]


class TestGrammar:
    def test_valid_stream(self):
        events = [START, *text_block(0, "Hel", "lo"), *tool_block(1, '{"city":', '"Paris"}'),
                  FinishEvent(finish_reason="tool_calls"),
                  UsageEvent(usage=UsageInfo(prompt_tokens=3, completion_tokens=4)), END]
        assert is_grammar_valid(events)

    def test_missing_start(self):
        assert codes([*text_block(0, "hi"), END]) == [GrammarError.MISSING_START]

    def test_missing_end(self):
        assert codes([START, *text_block(0, "hi")]) == [GrammarError.MISSING_END]

    def test_duplicate_start(self):
        assert GrammarError.DUPLICATE_START in codes([START, START, END])

    def test_event_after_end(self):
        assert codes([START, END, FinishEvent(finish_reason="stop")]) == [GrammarError.EVENT_AFTER_END]

    def test_finish_inside_block(self):
        events = [START, ContentBlockStartEvent(block_index=0, block_kind="text"),
                  FinishEvent(finish_reason="stop"), ContentBlockEndEvent(block_index=0), END]
        assert codes(events) == [GrammarError.FINISH_INSIDE_BLOCK]

    def test_duplicate_finish(self):
        events = [START, FinishEvent(finish_reason="stop"), FinishEvent(finish_reason="stop"), END]
        assert codes(events) == [GrammarError.DUPLICATE_FINISH]

    def test_delta_outside_block(self):
        assert codes([START, TextDeltaEvent(block_index=0, text="x"), END]) == [GrammarError.DELTA_OUTSIDE_BLOCK]

    def test_delta_kind_mismatch(self):
        events = [START, ContentBlockStartEvent(block_index=0, block_kind="text"),
                  ReasoningDeltaEvent(block_index=0, text="hmm"), ContentBlockEndEvent(block_index=0), END]
        assert codes(events) == [GrammarError.DELTA_KIND_MISMATCH]

    def test_block_reopened(self):
        assert GrammarError.BLOCK_REOPENED in codes([START, *text_block(0, "a"), *text_block(0, "b"), END])

    def test_block_not_open(self):
        assert codes([START, ContentBlockEndEvent(block_index=0), END]) == [GrammarError.BLOCK_NOT_OPEN]

    def test_block_unclosed(self):
        events = [START, ContentBlockStartEvent(block_index=0, block_kind="text"), END]
        assert codes(events) == [GrammarError.BLOCK_UNCLOSED]

    def test_index_decreased(self):
        assert GrammarError.INDEX_DECREASED in codes([START, *text_block(1, "a"), *text_block(0, "b"), END])

    def test_tool_arguments_must_form_an_object(self):
        assert codes([START, *tool_block(0, '{"city":'), END]) == [GrammarError.INVALID_TOOL_ARGUMENTS]
        assert codes([START, *tool_block(0, "[1]"), END]) == [GrammarError.INVALID_TOOL_ARGUMENTS]

    def test_empty_tool_arguments_allowed(self):
        assert is_grammar_valid([START, *tool_block(0), END])

    def test_empty_sequence_is_not_a_stream(self):
        assert codes([]) == [GrammarError.MISSING_START, GrammarError.MISSING_END]
        assert not is_grammar_valid([])

    def test_tool_block_needs_tool_call_start(self):
        events = [
            START,
            ContentBlockStartEvent(block_index=0, block_kind="tool_call"),
            ToolCallDeltaEvent(block_index=0, arguments_fragment="{}"),
            ContentBlockEndEvent(block_index=0),
            END,
        ]
        assert codes(events) == [GrammarError.MISSING_TOOL_CALL_START]

    def test_empty_tool_block_needs_tool_call_start(self):
        events = [
            START,
            ContentBlockStartEvent(block_index=0, block_kind="tool_call"),
            ContentBlockEndEvent(block_index=0),
            END,
        ]
        assert codes(events) == [GrammarError.MISSING_TOOL_CALL_START]


class TestReassembly:
    def test_blocks_become_parts(self):
        events = [
            START,
            ContentBlockStartEvent(block_index=0, block_kind="reasoning"),
            ReasoningDeltaEvent(block_index=0, text="Thinking"),
            ContentBlockEndEvent(block_index=0),
            *text_block(1, "Hello", " world"),
            *tool_block(2, '{"city":', '"Paris"}'),
            FinishEvent(finish_reason="tool_calls"),
            UsageEvent(usage=UsageInfo(prompt_tokens=5, completion_tokens=9)),
            END,
        ]
        response = reassemble(events)
        assert (response.id, response.model, response.created) == ("r1", "m", 7)
        choice = response.choices[0]
        assert choice.finish_reason == "tool_calls"
        assert choice.message.content == [
            ReasoningPart(text="Thinking"),
            TextPart(text="Hello world"),
            ToolCallPart(tool_call_id="call_1", tool_name="get_weather", tool_input={"city": "Paris"}),
        ]
        assert response.usage.total_tokens == 14

    def test_missing_finish_defaults_to_other(self):
        assert reassemble([START, *text_block(0, "hi"), END]).choices[0].finish_reason == "other"

    def test_reassembled_text_ignores_other_blocks(self):
        events = [START, *text_block(0, "Let me ", "check."), *tool_block(1, "{}"), END]
        assert reassembled_text(events) == "Let me check."


def kinds(events):
    return [event.type for event in events]


class TestStreamContext:
    def test_open_delta_close(self):
        ctx = StreamContext(model_hint="m")
        index = ctx.open_block("text")
        ctx.emit_text(index, "He")
        ctx.emit_text(index, "llo")
        ctx.close_block(index)
        events = ctx.take()
        assert kinds(events) == ["stream_start", "content_block_start", "text_delta", "text_delta", "content_block_end"]
        assert ctx.take() == []

    def test_tool_arguments_are_buffered(self):
        ctx = StreamContext(model_hint="m")
        index = ctx.open_block("tool_call", tool_call_id="call_1", tool_name="get_weather")
        for fragment in ('{"loc', 'ation":"SF"}'):
            ctx.append_tool_args(index, fragment)
        assert ctx.tool_arg_buffers[index] == '{"location":"SF"}'
        assert ctx.tool_call_names == {"call_1": "get_weather"}
        ctx.defer_finish("tool_calls")
        ctx.end_stream()
        events = ctx.take()
        assert is_grammar_valid(events)
        [part] = reassemble(events).choices[0].message.content
        assert part.tool_input == {"location": "SF"}
        assert not ctx.tool_arg_buffers

    def test_finish_mid_block_is_deferred(self):
        ctx = StreamContext(model_hint="m")
        index = ctx.open_block("text")
        ctx.emit_text(index, "Hi")
        ctx.defer_finish("stop")
        ctx.defer_usage(UsageInfo(prompt_tokens=1, completion_tokens=2))
        assert ctx.drain_deferred() == []
        ctx.emit_text(index, "!")
        ctx.end_stream()
        events = ctx.take()
        assert kinds(events)[-5:] == ["text_delta", "content_block_end", "finish", "usage", "stream_end"]
        assert is_grammar_valid(events)
        assert [warning.code for warning in ctx.warnings] == [WarningCode.DEFERRED_REORDER]

    def test_deferred_events_drain_once(self):
        ctx = StreamContext(model_hint="m")
        ctx.defer_finish("stop")
        assert kinds(ctx.drain_deferred()) == ["finish"]
        assert ctx.drain_deferred() == []
        ctx.end_stream()
        assert kinds(ctx.take()).count("finish") == 1

    def test_close_unopened_block(self):
        ctx = StreamContext(model_hint="m")
        with pytest.raises(ProtocolViolation):
            ctx.close_block(3)

    def test_double_close(self):
        ctx = StreamContext(model_hint="m")
        index = ctx.open_block("text")
        ctx.close_block(index)
        with pytest.raises(ProtocolViolation):
            ctx.close_block(index)

    def test_delta_for_unopened_block(self):
        ctx = StreamContext(model_hint="m")
        with pytest.raises(ProtocolViolation):
            ctx.emit_text(0, "x")

    def test_bad_tool_arguments(self):
        ctx = StreamContext(model_hint="m")
        index = ctx.open_block("tool_call", tool_call_id="call_1", tool_name="f")
        ctx.append_tool_args(index, "[1, 2]")
        with pytest.raises(ProtocolViolation):
            ctx.close_block(index)

    def test_nothing_after_end(self):
        ctx = StreamContext(model_hint="m")
        ctx.end_stream()
        assert kinds(ctx.take()) == ["stream_start", "stream_end"]
        with pytest.raises(ProtocolViolation):
            ctx.open_block("text")
