"""Vector math for embedding similarity."""

import numpy as np


def _as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"expected a 1-d vector, got shape {arr.shape}")
    return arr


def cosine_similarity(a, b) -> float:
    """dot(a, b) / (|a| |b|); symmetric and scale-invariant."""
    va, vb = _as_vector(a), _as_vector(b)
    if va.shape != vb.shape:
        raise ValueError(f"dimension mismatch: {va.shape[0]} vs {vb.shape[0]}")
    na = np.linalg.norm(va)
    nb = np.linalg.norm(vb)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine similarity is undefined for a zero vector")
    return float(np.dot(va, vb) / (na * nb))


def unit(v) -> np.ndarray:
    """L2-normalized copy; errors on zero vectors."""
    arr = _as_vector(v)
    norm = np.linalg.norm(arr)
    if norm == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return arr / norm
