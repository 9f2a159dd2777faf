"""Spatial reasoning paths: composition engines, path derivation, verbalization and scoring."""

from .composition import EmptyAnswerError
from .context import SymbolicContext, build_graph, ingest_annotated, parse_story
from .pathgen import QAInstance, ReasoningLink, ReasoningPath, build_instance, derive_answer, find_path
from .relations import PROPERTY_SETS, RelationSet, get_property_set
from .verbalize import extract_final_answer, parse_reasoning_text, verbalize_path
from .verifier import verify_path

__version__ = "0.1.0"

__all__ = [
    "EmptyAnswerError", "PROPERTY_SETS", "QAInstance", "ReasoningLink", "ReasoningPath", "RelationSet",
    "SymbolicContext", "build_graph", "build_instance", "derive_answer", "extract_final_answer", "find_path",
    "get_property_set", "ingest_annotated", "parse_reasoning_text", "parse_story", "verbalize_path",
    "verify_path",
]
