"""Composition engines: rule closure (PS1), offsets (PS2/PS3), inequalities (PS4)."""

from .inequalities import (
    InconsistencyError, InequalityStore, assert_context_inequalities,
    compose_inequalities, context_inequalities, entailed_relations, overlap_inequalities,
    primary_inequality,
)
from .offsets import (
    ChainBreakError, EmptyAnswerError, OffsetVector, compose_offsets, fold_offsets,
    offset_to_relations, relations_to_offset,
)
from .rules import RuleFact, check_not_rule, facts_from_relations, relations_between, spartun_closure, spartun_step

__all__ = [
    "ChainBreakError", "EmptyAnswerError", "InconsistencyError", "InequalityStore",
    "OffsetVector", "RuleFact", "assert_context_inequalities", "check_not_rule", "compose_inequalities",
    "context_inequalities", "overlap_inequalities",
    "compose_offsets", "entailed_relations", "facts_from_relations", "fold_offsets",
    "offset_to_relations", "primary_inequality", "relations_between", "relations_to_offset",
    "spartun_closure", "spartun_step",
]
