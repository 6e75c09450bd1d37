"""Question-schema relation matrices and exact-match SQL evaluation for
Spider-format text-to-SQL corpora, including cross-lingual cosine linking."""

from .data import (
    Column,
    CorpusStats,
    Example,
    Schema,
    SplitReport,
    Table,
    check_split_disjoint,
    corpus_stats,
    dump_schemas,
    load_examples,
    load_schemas,
)
from .embed import FileVectorStore, RemoteEmbeddingClient, cosine_similarity
from .linking import LinkingConfig, RelationMatrix, RelationType, build_matrix, link_corpus
from .sql import EvalReport, Hardness, evaluate, exact_match, hardness, parse_sql
from .textnorm import normalize, tokenize

__version__ = "0.1.0"

__all__ = [
    "Column",
    "CorpusStats",
    "EvalReport",
    "Example",
    "FileVectorStore",
    "Hardness",
    "LinkingConfig",
    "RelationMatrix",
    "RelationType",
    "RemoteEmbeddingClient",
    "Schema",
    "SplitReport",
    "Table",
    "build_matrix",
    "check_split_disjoint",
    "corpus_stats",
    "cosine_similarity",
    "dump_schemas",
    "evaluate",
    "exact_match",
    "hardness",
    "link_corpus",
    "load_examples",
    "load_schemas",
    "normalize",
    "parse_sql",
    "tokenize",
]
