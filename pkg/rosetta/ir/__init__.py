"""Provider-neutral intermediate representation."""

from rosetta.ir.types import *  # noqa: F401,F403
from rosetta.ir.types import __all__ as _types_all
from rosetta.ir.compare import first_difference, semantic_projection, structural_equal
from rosetta.ir.events import check_event_grammar, is_grammar_valid, reassemble
from rosetta.ir.serialize import dumps, parse_event, parse_request, parse_response, to_json
from rosetta.ir.validate import ValidationReport, Violation, validate_ir_request, validate_ir_response

__all__ = list(_types_all) + [
    "ValidationReport",
    "Violation",
    "check_event_grammar",
    "dumps",
    "first_difference",
    "is_grammar_valid",
    "parse_event",
    "parse_request",
    "parse_response",
    "reassemble",
    "semantic_projection",
    "structural_equal",
    "to_json",
    "validate_ir_request",
    "validate_ir_response",
]
