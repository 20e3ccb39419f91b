"""HTTP service exposing the embedding wire contract.

    POST /embed   {"texts": [str, ...]} -> {"vectors": [[float, ...]], "dim": int}
    GET  /health  -> {"status": "ok", "model": str}   (503 while loading)

Errors: 400 for malformed JSON or an empty texts entry, 413 for batches over
256 texts, 503 before the model is ready. Request handling is stateless; the
single encoder instance is shared read-only across requests.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .encoders import load_encoder

BATCH_LIMIT = 256
DEFAULT_MODEL = "hash"
DEFAULT_PORT = 8400


class EmbedRequest(BaseModel):
    texts: list[str]


def create_app(model_spec: str | None = None, load_on_startup: bool = True) -> FastAPI:
    """Build the service; with load_on_startup=False it stays in the 503 state."""
    spec = model_spec or os.environ.get("EMBED_MODEL", DEFAULT_MODEL)
    app = FastAPI(title="embed-service")
    app.state.encoder = None
    app.state.model_spec = spec

    if load_on_startup:
        app.state.encoder = load_encoder(spec)

    @app.exception_handler(RequestValidationError)
    async def validation_as_400(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": "malformed request"})

    @app.get("/health")
    async def health():
        encoder = app.state.encoder
        if encoder is None:
            return JSONResponse(
                status_code=503, content={"status": "loading", "model": spec}
            )
        return {"status": "ok", "model": encoder.name}

    @app.post("/embed")
    async def embed(request: EmbedRequest):
        encoder = app.state.encoder
        if encoder is None:
            return JSONResponse(status_code=503, content={"error": "model not ready"})
        texts = request.texts
        if not texts or any(t == "" for t in texts):
            return JSONResponse(
                status_code=400, content={"error": "texts must be non-empty strings"}
            )
        if len(texts) > BATCH_LIMIT:
            return JSONResponse(
                status_code=413,
                content={"error": f"batch of {len(texts)} exceeds limit {BATCH_LIMIT}"},
            )
        vectors = encoder.encode(texts)
        return {"vectors": vectors.tolist(), "dim": int(vectors.shape[1])}

    return app


def main() -> None:
    import uvicorn

    port = int(os.environ.get("EMBED_PORT", DEFAULT_PORT))
    uvicorn.run(create_app(), host="0.0.0.0", port=port)


if __name__ == "__main__":
    main()
