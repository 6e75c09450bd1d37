"""Cross-provider cosine-similarity comparison tables for word pairs."""

from collections.abc import Sequence
from dataclasses import dataclass

from ..errors import SpiderlinkError
from .providers import EmbeddingProvider
from .vectors import cosine_similarity


@dataclass(frozen=True)
class SimilarityRow:
    provider: str
    label: str
    similarity: float | None  # percentage in [-100, 100]; None when failed
    error: str | None = None


@dataclass(frozen=True)
class SimilarityReport:
    rows: tuple[SimilarityRow, ...]


def similarity_matrix_report(
    providers: Sequence[EmbeddingProvider],
    pairs: Sequence[tuple[str, str]],
) -> SimilarityReport:
    """One row per (provider, pair) with 100 x cosine; failures become
    rows carrying the reason instead of a number."""
    rows = []
    for provider in providers:
        for a, b in pairs:
            label = f"{a} / {b}"
            try:
                va, vb = provider.embed_batch([a, b])
                if va is None or vb is None:
                    missing = a if va is None else b
                    raise SpiderlinkError(f"no vector for {missing!r}")
                rows.append(SimilarityRow(provider.name, label, 100.0 * cosine_similarity(va, vb)))
            except (SpiderlinkError, ValueError) as e:
                rows.append(SimilarityRow(provider.name, label, None, error=str(e)))
    return SimilarityReport(tuple(rows))


def format_similarity_report(report: SimilarityReport) -> str:
    width = max((len(r.label) for r in report.rows), default=10)
    lines = [f"{'provider':<12} {'pair':<{width}} {'similarity':>10}"]
    for row in report.rows:
        if row.similarity is None:
            lines.append(f"{row.provider:<12} {row.label:<{width}} {'n/a':>10}  ({row.error})")
        else:
            lines.append(f"{row.provider:<12} {row.label:<{width}} {row.similarity:>9.2f}%")
    return "\n".join(lines)
