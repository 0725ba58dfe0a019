"""Biomedical knowledge graph toolkit.

Builds a concept graph from UMLS-style RRF tables, renders it as text,
exports Neo4j bulk-import files, and answers questions through
graph-grounded retrieval. The heavy lifting lives in the compiled
``biokg._core`` extension.
"""

from biokg._core import (
    BiokgError,
    EmbeddingModel,
    IndexSource,
    LlmEndpointConfig,
    MockLlmServer,
    RetrievalConfig,
    Snapshot,
    SubgraphContext,
    VectorIndex,
    answer_baseline,
    answer_question,
    build_prompt,
    build_snapshot,
    expand_subgraph,
    load_dataset,
    parse_answer,
    render_concept_block,
    render_triple,
    retrieve_seeds,
    verbalize_label,
    write_corpus,
)

__all__ = [
    "BiokgError",
    "EmbeddingModel",
    "IndexSource",
    "LlmEndpointConfig",
    "MockLlmServer",
    "RetrievalConfig",
    "Snapshot",
    "SubgraphContext",
    "VectorIndex",
    "answer_baseline",
    "answer_question",
    "build_prompt",
    "build_snapshot",
    "expand_subgraph",
    "load_dataset",
    "parse_answer",
    "render_concept_block",
    "render_triple",
    "retrieve_seeds",
    "verbalize_label",
    "write_corpus",
]

__version__ = "0.1.0"
