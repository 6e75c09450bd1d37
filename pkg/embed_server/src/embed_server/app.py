"""HTTP service for the embedding wire contract.

POST /embed  {"texts": [...]} -> {"dim": n, "vectors": [[...] or null, ...]}
GET  /health -> {"status": "ok", "model": name, "dim": n}   (503 until loaded)

Vector count always equals text count; an over-long text yields a null
vector plus an entry in "errors" instead of failing the batch. Encoding is
serialized behind a lock, so concurrent identical requests return
identical vectors regardless of arrival order.
"""

import threading
from contextlib import asynccontextmanager

from fastapi import FastAPI, Response
from pydantic import BaseModel, Field

from .config import MAX_TEXT_CHARS, ServerConfig
from .encoders import Encoder, build_encoder


class EmbedRequest(BaseModel):
    texts: list[str] = Field(min_length=1)


def create_app(config: ServerConfig | None = None, encoder: Encoder | None = None) -> FastAPI:
    """App factory; pass a pre-built encoder to skip model loading."""
    config = config or ServerConfig()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        if app.state.encoder is None:
            app.state.encoder = build_encoder(config.model, device=config.device)
        yield

    app = FastAPI(title="embed-server", lifespan=lifespan)
    app.state.encoder = encoder
    app.state.config = config
    app.state.lock = threading.Lock()

    @app.get("/health")
    def health(response: Response):
        if app.state.encoder is None:
            response.status_code = 503
            return {"status": "loading"}
        return {
            "status": "ok",
            "model": app.state.encoder.name,
            "dim": app.state.encoder.dim,
        }

    @app.post("/embed")
    def embed(request: EmbedRequest, response: Response):
        encoder = app.state.encoder
        if encoder is None:
            response.status_code = 503
            return {"error": "model not loaded"}

        errors = []
        to_encode = []
        positions = []
        for i, text in enumerate(request.texts):
            if len(text) > MAX_TEXT_CHARS:
                errors.append({"index": i, "reason": f"text longer than {MAX_TEXT_CHARS} characters"})
            else:
                to_encode.append(text)
                positions.append(i)

        vectors: list[list[float] | None] = [None] * len(request.texts)
        if to_encode:
            chunk = app.state.config.max_batch
            with app.state.lock:
                encoded = []
                for start in range(0, len(to_encode), chunk):
                    encoded.extend(encoder.encode(to_encode[start : start + chunk]))
            for i, vec in zip(positions, encoded):
                vectors[i] = [float(x) for x in vec]

        body = {"dim": encoder.dim, "vectors": vectors}
        if errors:
            body["errors"] = errors
        return body

    return app
