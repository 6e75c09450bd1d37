"""Embedding providers: a file-backed store and a remote HTTP client.

Both expose the same surface: `name`, `dim`, and `embed_batch(texts)`
returning one vector (or None for an unavailable text) per input, keyed by
normalized text. They are interchangeable behind the linker.
"""

from __future__ import annotations

import threading
import time
from collections.abc import Sequence
from pathlib import Path
from typing import Protocol, runtime_checkable

import numpy as np
import requests

from ..errors import DataFormatError, ProtocolError, TransportError
from ..textnorm import normalize


@runtime_checkable
class EmbeddingProvider(Protocol):
    name: str
    dim: int

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray | None]: ...


class FileVectorStore:
    """Immutable text->vector store loaded from a TSV fixture file.

    File format: first line is the dimension; every other line is
    `key<TAB>v1 v2 ... vd`. Keys are stored normalized; lookups normalize
    the query text, and a miss is an absent result, not an error.
    """

    def __init__(self, vectors: dict[str, np.ndarray], dim: int, name: str = "file"):
        self.name = name
        self.dim = dim
        self._vectors = vectors

    @classmethod
    def from_mapping(cls, mapping: dict[str, Sequence[float]], name: str = "file") -> FileVectorStore:
        vectors = {}
        dim = None
        for key, values in mapping.items():
            vec = np.asarray(values, dtype=np.float64)
            if dim is None:
                dim = int(vec.shape[0])
            elif vec.shape[0] != dim:
                raise ValueError(f"vector for {key!r} has dim {vec.shape[0]}, expected {dim}")
            vectors[normalize(key)] = vec
        if dim is None:
            raise ValueError("empty vector mapping")
        return cls(vectors, dim, name)

    @classmethod
    def load(cls, path: str | Path, name: str | None = None) -> FileVectorStore:
        path = Path(path)
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
        if not lines:
            raise DataFormatError(f"{path}: empty vector file")
        try:
            dim = int(lines[0].strip())
        except ValueError as e:
            raise DataFormatError(f"{path}: first line must be the vector dimension") from e
        vectors = {}
        for i, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            key, sep, rest = line.partition("\t")
            if not sep:
                raise DataFormatError(f"{path}:{i}: expected 'key<TAB>values'")
            try:
                values = np.array([float(x) for x in rest.split()], dtype=np.float64)
            except ValueError as e:
                raise DataFormatError(f"{path}:{i}: bad vector value: {e}") from e
            if values.shape[0] != dim:
                raise DataFormatError(f"{path}:{i}: expected {dim} values, got {values.shape[0]}")
            vectors[normalize(key)] = values
        return cls(vectors, dim, name or path.stem)

    def write(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{self.dim}\n")
            for key in sorted(self._vectors):
                values = " ".join(repr(float(x)) for x in self._vectors[key])
                f.write(f"{key}\t{values}\n")

    def lookup(self, text: str) -> np.ndarray | None:
        return self._vectors.get(normalize(text))

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray | None]:
        return [self.lookup(t) for t in texts]

    def __len__(self) -> int:
        return len(self._vectors)


class RemoteEmbeddingClient:
    """Client for the embedding wire contract.

    POSTs {"texts": [...]} to `<endpoint>/embed` and expects
    {"dim": n, "vectors": [[...] or null, ...]}. Responses are cached
    in-process keyed by normalized text, so repeated corpus runs are
    deterministic and cheap; the cache can be written out as a vector file.
    """

    def __init__(
        self,
        endpoint: str,
        name: str = "remote",
        timeout: float = 30.0,
        retries: int = 3,
        backoff: float = 0.5,
        session: requests.Session | None = None,
    ):
        self.endpoint = endpoint.rstrip("/")
        self.name = name
        self.dim = 0  # learned from the first response
        self.timeout = timeout
        self.retries = retries
        self.backoff = backoff
        self._session = session or requests.Session()
        self._cache: dict[str, np.ndarray | None] = {}
        self._lock = threading.Lock()
        self.request_count = 0

    def _post(self, texts: list[str]) -> list[np.ndarray | None]:
        payload = {"texts": texts}
        last_error: Exception | None = None
        for attempt in range(self.retries):
            try:
                self.request_count += 1
                response = self._session.post(
                    f"{self.endpoint}/embed", json=payload, timeout=self.timeout
                )
                response.raise_for_status()
                break
            except (requests.ConnectionError, requests.Timeout, requests.HTTPError) as e:
                last_error = e
                if attempt + 1 < self.retries:
                    time.sleep(self.backoff * 2**attempt)
        else:
            raise TransportError(f"embedding endpoint {self.endpoint} unreachable: {last_error}")

        try:
            body = response.json()
            dim = int(body["dim"])
            raw = body["vectors"]
        except (ValueError, KeyError, TypeError) as e:
            raise ProtocolError(f"malformed embedding response: {e}") from e
        if not isinstance(raw, list) or len(raw) != len(texts):
            raise ProtocolError(
                f"embedding response has {len(raw) if isinstance(raw, list) else 'no'}"
                f" vectors for {len(texts)} texts"
            )
        vectors: list[np.ndarray | None] = []
        for entry in raw:
            if entry is None:
                vectors.append(None)
                continue
            vec = np.asarray(entry, dtype=np.float64)
            if vec.ndim != 1 or vec.shape[0] != dim:
                raise ProtocolError(f"vector of dim {vec.shape} where {dim} was declared")
            vectors.append(vec)
        if self.dim and dim != self.dim:
            raise ProtocolError(f"provider dim changed from {self.dim} to {dim}")
        self.dim = dim
        return vectors

    def embed_batch(self, texts: Sequence[str]) -> list[np.ndarray | None]:
        keys = [normalize(t) for t in texts]
        with self._lock:
            missing = []
            for key in keys:
                if key not in self._cache and key not in missing:
                    missing.append(key)
        if missing:
            fetched = self._post(missing)
            with self._lock:
                for key, vec in zip(missing, fetched):
                    self._cache[key] = vec
        with self._lock:
            return [self._cache[key] for key in keys]

    def write_cache(self, path: str | Path) -> None:
        """Freeze the session's responses into a vector-file fixture."""
        with self._lock:
            vectors = {k: v for k, v in self._cache.items() if v is not None}
        if not vectors:
            raise ValueError("nothing cached yet")
        FileVectorStore(vectors, self.dim, self.name).write(path)
