"""Extract the software identifiers map of object-oriented product variants.

Pipeline: parse each variant's Java sources into a :class:`CodeModel`, build a
formal context of variants x identifiers, compute its AOC-poset, and read off
the common and unique identifiers per kind.
"""

__version__ = "0.1.0"

from .code_model import (
    CodeModel,
    Identifier,
    IdentifierKind,
    Inheritance,
    SourceStats,
    filter_by_kind,
    read_xml,
    write_xml,
)
from .evaluation import GroundTruth, MetricsReport, evaluate_map, precision, recall
from .fca import AOCPoset, Concept, FormalContext, build_aoc_poset, build_context
from .javaparse import extract_variant, tokenize
from .maps import EvolutionReport, IdentifiersMap, build_all_maps, classify_evolution, extract_map

__all__ = [
    "AOCPoset",
    "CodeModel",
    "Concept",
    "EvolutionReport",
    "FormalContext",
    "GroundTruth",
    "Identifier",
    "IdentifierKind",
    "IdentifiersMap",
    "Inheritance",
    "MetricsReport",
    "SourceStats",
    "build_all_maps",
    "build_aoc_poset",
    "build_context",
    "classify_evolution",
    "evaluate_map",
    "extract_map",
    "extract_variant",
    "filter_by_kind",
    "precision",
    "read_xml",
    "recall",
    "tokenize",
    "write_xml",
]
