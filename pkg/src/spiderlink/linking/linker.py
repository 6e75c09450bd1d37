"""Question-schema linking: string matching, cosine matching, matrix assembly.

String linking compares normalized token spans with schema-item display
names (exact = the full word sequence, partial = a strict contiguous piece
of it; the longest span wins and exact beats partial). Cosine linking
embeds question spans and full item-name phrases and relates them when
cosine similarity reaches the inclusive threshold, never overwriting a
string match.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..data import Example, Schema, as_schema_map
from ..errors import ProtocolError, SpiderlinkError, TransportError, ValidationError
from ..textnorm import normalize, words
from .config import LinkingConfig
from .matrix import RelationMatrix
from .relations import RelationType as R


class Link(Enum):
    EXACT = "exact"
    PARTIAL = "partial"
    COSINE = "cosine"


@dataclass
class LinkMap:
    """Sparse question-schema links: (token index, table/column index) -> Link."""

    tables: dict[tuple[int, int], Link] = field(default_factory=dict)
    columns: dict[tuple[int, int], Link] = field(default_factory=dict)

    def cosine_cells(self) -> tuple[set[tuple[int, int]], set[tuple[int, int]]]:
        return (
            {k for k, v in self.tables.items() if v is Link.COSINE},
            {k for k, v in self.columns.items() if v is Link.COSINE},
        )


@dataclass(frozen=True)
class LinkStats:
    n_examples: int
    n_table_cosine: int
    n_column_cosine: int
    total_relations: int
    per_example_avg_table: float
    per_example_avg_column: float
    n_provider_misses: int = 0
    failures: tuple[tuple[int, str], ...] = ()


def _item_words(schema: Schema) -> tuple[list[list[str]], list[list[str]]]:
    table_words = [words(t.name_display) for t in schema.tables]
    column_words = [
        words(c.name_display) if c.table_index >= 0 else [] for c in schema.columns
    ]
    return table_words, column_words


def _is_strict_piece(span: list[str], item: list[str]) -> bool:
    if not span or len(span) >= len(item):
        return False
    return any(item[k : k + len(span)] == span for k in range(len(item) - len(span) + 1))


def string_link(tokens: Sequence[str], schema: Schema) -> LinkMap:
    """Exact/partial links from a greedy longest-span scan of the question."""
    norm = [normalize(t) for t in tokens]
    table_words, column_words = _item_words(schema)
    max_len = max(
        (len(w) for w in table_words + column_words if w),
        default=0,
    )
    links = LinkMap()
    n = len(norm)
    i = 0
    while i < n and max_len:
        matched_len = 0
        for kind in (Link.EXACT, Link.PARTIAL):
            for length in range(min(max_len, n - i), 0, -1):
                span = norm[i : i + length]
                if kind is Link.EXACT:
                    t_hits = [t for t, w in enumerate(table_words) if w and w == span]
                    c_hits = [c for c, w in enumerate(column_words) if w and w == span]
                else:
                    t_hits = [t for t, w in enumerate(table_words) if _is_strict_piece(span, w)]
                    c_hits = [c for c, w in enumerate(column_words) if _is_strict_piece(span, w)]
                if t_hits or c_hits:
                    for q in range(i, i + length):
                        for t in t_hits:
                            links.tables[(q, t)] = kind
                        for c in c_hits:
                            links.columns[(q, c)] = kind
                    matched_len = length
                    break
            if matched_len:
                break
        i += matched_len or 1
    return links


def _embed_unit(provider, texts: Sequence[str]) -> tuple[dict[str, np.ndarray], int]:
    """Unit-normalized vector per unique text; the count of unavailable texts."""
    unique = []
    seen = set()
    for text in texts:
        if text and text not in seen:
            seen.add(text)
            unique.append(text)
    vectors = provider.embed_batch(unique)
    out: dict[str, np.ndarray] = {}
    misses = 0
    for text, vec in zip(unique, vectors):
        if vec is None:
            misses += 1
            continue
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            misses += 1
            continue
        out[text] = vec / norm
    return out, misses


def csr_link(
    tokens: Sequence[str],
    schema: Schema,
    provider,
    config: LinkingConfig,
    occupied: LinkMap | None = None,
) -> tuple[LinkMap, int]:
    """Cosine-match links for every free question-schema cell.

    Spans of up to `config.span_k` tokens and full item-name phrases are
    embedded as single units; vectors are unit-normalized once so cosine is
    a dot product. Texts the provider cannot embed are skipped and counted.
    """
    if not config.csr_enabled:
        raise ValueError("csr_link called with csr_enabled=False")
    occupied = occupied or LinkMap()
    norm_tokens = [normalize(t) for t in tokens]

    def item_text(display: str, original: str) -> str:
        if config.embed_display_names:
            return normalize(display)
        return normalize(original.replace("_", " "))

    table_texts = [item_text(t.name_display, t.name_original) for t in schema.tables]
    column_texts = [
        item_text(c.name_display, c.name_original) if c.table_index >= 0 else ""
        for c in schema.columns
    ]

    spans: list[tuple[int, int, str]] = []  # (start, length, text)
    n = len(norm_tokens)
    for i in range(n):
        for length in range(1, min(config.span_k, n - i) + 1):
            text = " ".join(norm_tokens[i : i + length]).strip()
            spans.append((i, length, text))

    all_texts = [s[2] for s in spans] + table_texts + column_texts
    vectors, misses = _embed_unit(provider, all_texts)

    links = LinkMap()
    for start, length, text in spans:
        span_vec = vectors.get(text)
        if span_vec is None:
            continue
        for t, t_text in enumerate(table_texts):
            item_vec = vectors.get(t_text)
            if item_vec is None:
                continue
            if float(np.dot(span_vec, item_vec)) >= config.tau:
                for q in range(start, start + length):
                    if (q, t) not in occupied.tables:
                        links.tables[(q, t)] = Link.COSINE
        for c, c_text in enumerate(column_texts):
            item_vec = vectors.get(c_text)
            if item_vec is None:
                continue
            if float(np.dot(span_vec, item_vec)) >= config.tau:
                for q in range(start, start + length):
                    if (q, c) not in occupied.columns:
                        links.columns[(q, c)] = Link.COSINE
    return links, misses


_LINK_TO_QT = {
    Link.EXACT: R.QT_EXACT_MATCH,
    Link.PARTIAL: R.QT_PARTIAL_MATCH,
    Link.COSINE: R.QT_COSINE_MATCH,
}
_LINK_TO_QC = {
    Link.EXACT: R.QC_EXACT_MATCH,
    Link.PARTIAL: R.QC_PARTIAL_MATCH,
    Link.COSINE: R.QC_COSINE_MATCH,
}
_QT_INVERSE = {
    R.QT_EXACT_MATCH: R.TQ_EXACT_MATCH,
    R.QT_PARTIAL_MATCH: R.TQ_PARTIAL_MATCH,
    R.QT_COSINE_MATCH: R.TQ_COSINE_MATCH,
}
_QC_INVERSE = {
    R.QC_EXACT_MATCH: R.CQ_EXACT_MATCH,
    R.QC_PARTIAL_MATCH: R.CQ_PARTIAL_MATCH,
    R.QC_COSINE_MATCH: R.CQ_COSINE_MATCH,
}


def _assemble(
    example: Example,
    schema: Schema,
    string_links: LinkMap,
    cosine_links: LinkMap,
    deps: Sequence[Sequence] | None,
) -> RelationMatrix:
    n_q = len(example.question_tokens)
    n_t = len(schema.tables)
    n_c = len(schema.columns)
    side = n_q + n_t + n_c
    cells = np.empty((side, side), dtype=np.int16)

    # question - question: adjacency, then optional dependency edges
    q = np.arange(n_q)
    diff = q[None, :] - q[:, None]  # column index minus row index
    qq = np.full((n_q, n_q), int(R.QQ_DISTANT), dtype=np.int16)
    qq[diff == 0] = int(R.QQ_SELF)
    qq[diff == 1] = int(R.QQ_ADJACENT_FORWARD)
    qq[diff == -1] = int(R.QQ_ADJACENT_BACKWARD)
    cells[:n_q, :n_q] = qq
    for edge in deps or ():
        head, dependent = int(edge[0]), int(edge[1])
        if not (0 <= head < n_q and 0 <= dependent < n_q) or head == dependent:
            raise ValidationError(f"dependency edge {edge!r} out of range for {n_q} tokens")
        cells[head, dependent] = int(R.QQ_DEPENDENCY_FORWARD)
        cells[dependent, head] = int(R.QQ_DEPENDENCY_BACKWARD)

    t0 = n_q
    c0 = n_q + n_t

    # table - table
    linked_tables: set[tuple[int, int]] = set()
    for a, b in schema.foreign_keys:
        ta = schema.columns[a].table_index
        tb = schema.columns[b].table_index
        if ta != tb:
            linked_tables.add((ta, tb))
            linked_tables.add((tb, ta))
    for i in range(n_t):
        for j in range(n_t):
            if i == j:
                rel = R.TT_SELF
            elif (i, j) in linked_tables:
                rel = R.TT_FOREIGN_KEY_LINK
            else:
                rel = R.TT_NONE
            cells[t0 + i, t0 + j] = int(rel)

    # table - column and inverses
    primary = set(schema.primary_keys)
    for t in range(n_t):
        for c, col in enumerate(schema.columns):
            if col.table_index == t:
                tc, ct = (
                    (R.TC_PRIMARY_KEY, R.CT_PRIMARY_KEY_OF)
                    if c in primary
                    else (R.TC_HAS_COLUMN, R.CT_BELONGS_TO)
                )
            else:
                tc, ct = R.TC_NONE, R.CT_NONE
            cells[t0 + t, c0 + c] = int(tc)
            cells[c0 + c, t0 + t] = int(ct)

    # column - column
    fk_cells: dict[tuple[int, int], R] = {}
    for a, b in schema.foreign_keys:
        fk_cells[(a, b)] = R.CC_FOREIGN_KEY_FORWARD
        fk_cells[(b, a)] = R.CC_FOREIGN_KEY_BACKWARD
    for i, ci in enumerate(schema.columns):
        for j, cj in enumerate(schema.columns):
            if i == j:
                rel = R.CC_SELF
            elif (i, j) in fk_cells:
                rel = fk_cells[(i, j)]
            elif ci.table_index >= 0 and ci.table_index == cj.table_index:
                rel = R.CC_SAME_TABLE
            else:
                rel = R.CC_NONE
            cells[c0 + i, c0 + j] = int(rel)

    # question - schema: no-match default, then string and cosine overlays
    cells[:n_q, t0 : t0 + n_t] = int(R.QT_NO_MATCH)
    cells[t0 : t0 + n_t, :n_q] = int(R.TQ_NO_MATCH)
    cells[:n_q, c0:] = int(R.QC_NO_MATCH)
    cells[c0:, :n_q] = int(R.CQ_NO_MATCH)
    for links in (string_links, cosine_links):
        for (qi, ti), kind in links.tables.items():
            rel = _LINK_TO_QT[kind]
            cells[qi, t0 + ti] = int(rel)
            cells[t0 + ti, qi] = int(_QT_INVERSE[rel])
        for (qi, ci), kind in links.columns.items():
            rel = _LINK_TO_QC[kind]
            cells[qi, c0 + ci] = int(rel)
            cells[c0 + ci, qi] = int(_QC_INVERSE[rel])

    labels = (
        tuple(example.question_tokens)
        + tuple(t.name_original for t in schema.tables)
        + tuple(schema.column_label(c) for c in range(n_c))
    )
    return RelationMatrix(n_q, n_t, n_c, cells, labels)


def _link_one(
    example: Example,
    schema: Schema,
    provider,
    config: LinkingConfig,
    deps: Sequence[Sequence] | None,
) -> tuple[RelationMatrix, int]:
    string_links = string_link(example.question_tokens, schema)
    cosine_links = LinkMap()
    misses = 0
    if config.csr_enabled and provider is not None:
        cosine_links, misses = csr_link(
            example.question_tokens, schema, provider, config, occupied=string_links
        )
    return _assemble(example, schema, string_links, cosine_links, deps), misses


def build_matrix(
    example: Example,
    schema: Schema,
    provider=None,
    config: LinkingConfig | None = None,
    deps: Sequence[Sequence] | None = None,
) -> RelationMatrix:
    """The full typed-relation matrix for one example."""
    matrix, _ = _link_one(example, schema, provider, config or LinkingConfig(), deps)
    return matrix


def link_corpus(
    examples: Sequence[Example],
    schemas: Sequence[Schema] | Mapping[str, Schema],
    provider=None,
    config: LinkingConfig | None = None,
    jobs: int = 1,
    deps: Sequence[Sequence[Sequence] | None] | None = None,
) -> tuple[list[RelationMatrix | None], LinkStats]:
    """Matrices for a whole corpus plus cosine-relation statistics.

    The matrix list stays aligned with `examples`; an example that fails
    keeps a None slot and is listed in the stats. Transport failures are
    fatal: without the provider there is nothing meaningful to report.
    """
    config = config or LinkingConfig()
    by_id = as_schema_map(schemas)
    if deps is not None and len(deps) != len(examples):
        raise ValidationError("dependency edge list not aligned with the examples")

    def work(i: int):
        example = examples[i]
        example_deps = deps[i] if deps is not None else None
        return _link_one(example, by_id[example.db_id], provider, config, example_deps)

    def safe(i: int):
        # the provider being down is fatal; per-example problems are collected
        try:
            return work(i)
        except (TransportError, ProtocolError):
            raise
        except SpiderlinkError as e:
            return e

    indices = range(len(examples))
    if jobs > 1 and len(examples) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(safe, indices))
    else:
        results = [safe(i) for i in indices]

    matrices: list[RelationMatrix | None] = []
    failures: list[tuple[int, str]] = []
    n_table = n_column = total_misses = 0
    for i, result in enumerate(results):
        if isinstance(result, SpiderlinkError):
            failures.append((i, str(result)))
            matrices.append(None)
            continue
        matrix, misses = result
        total_misses += misses
        counts = matrix.question_schema_counts()
        n_table += counts.get(R.QT_COSINE_MATCH, 0)
        n_column += counts.get(R.QC_COSINE_MATCH, 0)
        matrices.append(matrix)

    n = len(examples)
    stats = LinkStats(
        n_examples=n,
        n_table_cosine=n_table,
        n_column_cosine=n_column,
        total_relations=n_table + n_column,
        per_example_avg_table=n_table / n if n else 0.0,
        per_example_avg_column=n_column / n if n else 0.0,
        n_provider_misses=total_misses,
        failures=tuple(failures),
    )
    return matrices, stats
