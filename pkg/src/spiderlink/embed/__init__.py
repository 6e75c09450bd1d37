from .providers import EmbeddingProvider, FileVectorStore, RemoteEmbeddingClient
from .simcheck import SimilarityReport, SimilarityRow, format_similarity_report, similarity_matrix_report
from .vectors import cosine_similarity, unit

__all__ = [
    "EmbeddingProvider",
    "FileVectorStore",
    "RemoteEmbeddingClient",
    "SimilarityReport",
    "SimilarityRow",
    "cosine_similarity",
    "format_similarity_report",
    "similarity_matrix_report",
    "unit",
]
