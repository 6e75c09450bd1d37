"""Sentence encoder backends.

Every backend exposes `name`, `dim`, and `encode(texts) -> (n, dim) array`,
deterministic per model version. Real multilingual models (sentence-
transformers, LASER) are imported lazily so the service and its tests run
without them; the hash backend is a deterministic stand-in for plumbing and
CI, not a semantic model.
"""

from __future__ import annotations

import hashlib
from collections.abc import Sequence
from typing import Protocol, runtime_checkable

import numpy as np


@runtime_checkable
class Encoder(Protocol):
    name: str
    dim: int

    def encode(self, texts: Sequence[str]) -> np.ndarray: ...


class HashEncoder:
    """Deterministic pseudo-embeddings seeded from a text digest.

    Identical texts always map to identical unit vectors; there is no
    semantic neighborhood structure. Useful for exercising the wire
    contract and the client pipeline offline.
    """

    def __init__(self, dim: int = 256):
        self.name = f"test-hash-{dim}"
        self.dim = dim

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        out = np.empty((len(texts), self.dim))
        for i, text in enumerate(texts):
            seed = int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")
            rng = np.random.default_rng(seed)
            vec = rng.standard_normal(self.dim)
            out[i] = vec / np.linalg.norm(vec)
        return out


class SentenceTransformerEncoder:
    """Multilingual sentence-transformers checkpoint."""

    def __init__(self, model_name: str, device: str = "cpu"):
        from sentence_transformers import SentenceTransformer

        self._model = SentenceTransformer(model_name, device=device)
        self.name = f"st:{model_name}"
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        return np.asarray(
            self._model.encode(list(texts), convert_to_numpy=True, show_progress_bar=False)
        )


def _looks_arabic(text: str) -> bool:
    return any("؀" <= c <= "ۿ" for c in text)


class LaserEncoder:
    """Language-agnostic sentence representations (1024-d)."""

    def __init__(self, device: str = "cpu"):
        from laserembeddings import Laser

        self._laser = Laser()
        self.name = "laser"
        self.dim = 1024

    def encode(self, texts: Sequence[str]) -> np.ndarray:
        langs = ["ar" if _looks_arabic(t) else "en" for t in texts]
        return np.asarray(self._laser.embed_sentences(list(texts), lang=langs))


def build_encoder(spec: str, device: str = "cpu") -> Encoder:
    """Encoder from a spec string: hash[:dim] | st:<model-name> | laser."""
    if spec == "hash" or spec.startswith("hash:"):
        dim = int(spec.split(":", 1)[1]) if ":" in spec else 256
        return HashEncoder(dim)
    if spec.startswith("st:"):
        return SentenceTransformerEncoder(spec.split(":", 1)[1], device=device)
    if spec == "laser":
        return LaserEncoder(device=device)
    raise ValueError(f"unknown encoder spec {spec!r} (expected hash[:dim], st:<name>, or laser)")
