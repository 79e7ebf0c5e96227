"""HTTP inference service backing the live translation UI.

Endpoints (all JSON):

* GET  /health            -> {"status": "ok", "model": "<id>"}
* GET  /labels            -> ordered class label array
* POST /predict?k=3       -> {"model", "predictions": [{label, probability}...]}
  Body: raw PNG/JPEG bytes, or application/json {"image_b64": "..."}.
  Optional ?timings=1 adds per-stage preprocessing times in milliseconds;
  it defaults to off so identical bodies yield byte-identical responses.

Errors come back as {"error": "<code>", "detail": "..."} with 400 for a
malformed body and 413 when the body exceeds the configured limit. The
loaded model is immutable shared state; prediction work runs in the
threadpool, so concurrent requests never touch each other.
"""
from __future__ import annotations

import base64
import binascii
import io
from dataclasses import dataclass

import numpy as np
from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .errors import IslError
from .model.network import Model
from .model.serialize import model_id
from .preproc.pipeline import PipelineConfig, run_pipeline

DEFAULT_MAX_BODY = 5 * 1024 * 1024


@dataclass
class PredictionResponse:
    top: list                    # (label, probability), descending
    model: str
    timings_ms: dict

    def to_dict(self, include_timings: bool) -> dict:
        doc = {
            "model": self.model,
            "predictions": [{"label": lab, "probability": p} for lab, p in self.top],
        }
        if include_timings:
            doc["timings_ms"] = self.timings_ms
        return doc


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse({"error": code, "detail": detail}, status_code=status)


def _decode_image(body: bytes, content_type: str) -> np.ndarray:
    from PIL import Image, UnidentifiedImageError

    if content_type.startswith("application/json"):
        import json
        try:
            doc = json.loads(body)
            encoded = doc["image_b64"]
            raw = base64.b64decode(encoded, validate=True)
        except (ValueError, KeyError, TypeError, binascii.Error) as e:
            raise ValueError(f"bad JSON image payload: {e}") from e
    else:
        raw = body
    try:
        with Image.open(io.BytesIO(raw)) as im:
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError, ValueError) as e:
        raise ValueError(f"body is not a decodable PNG/JPEG image: {e}") from e


def create_app(model: Model, pipeline: PipelineConfig,
               max_body_bytes: int = DEFAULT_MAX_BODY) -> FastAPI:
    if model.mode != "infer":
        model.set_mode("infer")
    ident = model_id(model)
    labels = model.manifest.labels
    app = FastAPI(title="islnet inference service")
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    def _predict_sync(img: np.ndarray, k: int) -> PredictionResponse:
        timings: dict = {}
        tensor = run_pipeline(img, pipeline, timings=timings)
        probs, _ = model.predict(tensor)
        order = np.argsort(probs.array)[::-1][:k]
        top = [(labels[i], float(probs.array[i])) for i in order]
        return PredictionResponse(top=top, model=ident, timings_ms=timings)

    @app.get("/health")
    def health():
        return {"status": "ok", "model": ident}

    @app.get("/labels")
    def get_labels():
        return list(labels)

    @app.post("/predict")
    async def predict(request: Request,
                      k: int = Query(default=3, ge=1),
                      timings: int = Query(default=0)):
        body = await request.body()
        if len(body) > max_body_bytes:
            return _error(413, "body_too_large",
                          f"body of {len(body)} bytes exceeds limit {max_body_bytes}")
        if not body:
            return _error(400, "empty_body", "request body is empty")
        try:
            img = _decode_image(body, request.headers.get("content-type", ""))
        except ValueError as e:
            return _error(400, "bad_image", str(e))
        k = min(k, len(labels))
        try:
            result = await run_in_threadpool(_predict_sync, img, k)
        except IslError as e:
            # decodable image the configured pipeline cannot process (e.g. too small)
            return _error(400, "unprocessable_image", str(e))
        return JSONResponse(result.to_dict(include_timings=bool(timings)))

    return app
