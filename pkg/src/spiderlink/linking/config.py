"""Linking configuration."""

from dataclasses import dataclass


@dataclass(frozen=True)
class LinkingConfig:
    """Knobs for question-schema linking.

    tau: inclusive cosine threshold for a cosine-match relation.
    csr_enabled: compute cosine-match relations at all.
    span_k: longest question span (in tokens) embedded for cosine matching;
        1 compares single tokens only.
    embed_display_names: embed the human-readable item name; when False the
        original identifier (underscores spaced out) is embedded instead.

    Relation priority is fixed: exact > partial > cosine.
    """

    tau: float = 0.78
    csr_enabled: bool = True
    span_k: int = 1
    embed_display_names: bool = True

    def __post_init__(self):
        if not 0.0 < self.tau <= 1.0:
            raise ValueError(f"tau must be in (0, 1], got {self.tau}")
        if self.span_k < 1:
            raise ValueError(f"span_k must be >= 1, got {self.span_k}")
