"""HTTP facade over a loaded index for the interactive query console.

Endpoints:
    GET  /api/stats               index size and composition
    POST /api/query?k=5           multipart field "image"; top-K results plus curves
    GET  /api/images/{id}         original image bytes of an indexed entry
    GET  /api/entries/{id}/curves one entry's Betti curve values
    GET  /                        the built console, when present

Errors are JSON bodies {"error", "message"}: 400 for undecodable uploads or a
bad k, 404 for unknown ids, 413 for uploads over 20 MB, 500 otherwise.
"""

import io
import mimetypes
import os
from pathlib import Path

import numpy as np
from fastapi import FastAPI, File, Query, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from PIL import Image, UnidentifiedImageError
from starlette.exceptions import HTTPException as StarletteHTTPException

from .errors import DecodeError
from .index import Index, stats as index_stats
from .search import query_response

__all__ = ["MAX_UPLOAD_BYTES", "create_app", "default_console_dir"]

MAX_UPLOAD_BYTES = 20 * 1024 * 1024

_ERROR_NAMES = {400: "bad-request", 404: "not-found", 413: "payload-too-large", 500: "internal"}

_PLACEHOLDER = """<!doctype html>
<html><head><title>thir</title></head>
<body><h1>thir retrieval service</h1>
<p>The query console is not built. API endpoints live under <code>/api</code>.</p>
</body></html>
"""


def default_console_dir():
    """Console build directory: $THIR_CONSOLE, or ./frontend/dist when present."""
    env = os.environ.get("THIR_CONSOLE")
    if env:
        return Path(env)
    local = Path("frontend") / "dist"
    return local if local.is_dir() else None


def _decode_upload(data: bytes) -> np.ndarray:
    try:
        with Image.open(io.BytesIO(data)) as im:
            return np.asarray(im.convert("RGB"), dtype=np.uint8)
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(f"cannot decode uploaded image: {exc}") from exc


def _error_body(status: int, message: str) -> dict:
    return {"error": _ERROR_NAMES.get(status, "error"), "message": message}


def create_app(index: Index, data_root, console_dir=None) -> FastAPI:
    """Build the FastAPI app serving ``index``; image bytes resolve against
    ``data_root`` when indexed paths are relative or have moved."""
    data_root = Path(data_root)
    app = FastAPI(title="thir retrieval service")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"https?://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(StarletteHTTPException)
    async def http_error(_request, exc):
        return JSONResponse(status_code=exc.status_code, content=_error_body(exc.status_code, str(exc.detail)))

    @app.exception_handler(RequestValidationError)
    async def validation_error(_request, exc):
        return JSONResponse(status_code=400, content=_error_body(400, str(exc)))

    @app.exception_handler(Exception)
    async def internal_error(_request, exc):
        return JSONResponse(status_code=500, content=_error_body(500, f"{type(exc).__name__}: {exc}"))

    def _entry_or_404(entry_id: int):
        if entry_id < 0 or entry_id >= len(index):
            raise StarletteHTTPException(status_code=404, detail=f"no entry with id {entry_id}")
        return index.records[entry_id]

    def _image_path(record) -> Path:
        p = Path(record.path)
        for candidate in (p, data_root / p, data_root / p.name):
            if candidate.is_file():
                return candidate
        raise StarletteHTTPException(status_code=404, detail=f"image file not found for entry {record.id}")

    @app.get("/api/stats")
    def get_stats():
        s = index_stats(index)
        return {
            "entries": s.total,
            "resolution": s.resolution,
            "dim": s.dim,
            "labels": s.labels,
            "magnifications": {str(k): v for k, v in s.magnifications.items()},
            "resize": list(s.resize_dims),
            "range_policy": s.range_policy,
        }

    @app.post("/api/query")
    async def post_query(image: UploadFile = File(...), k: int = Query(5)):
        if k < 1:
            raise StarletteHTTPException(status_code=400, detail=f"k must be >= 1, got {k}")
        data = await image.read()
        if len(data) > MAX_UPLOAD_BYTES:
            raise StarletteHTTPException(
                status_code=413,
                detail=f"upload of {len(data)} bytes exceeds the {MAX_UPLOAD_BYTES} byte limit",
            )
        try:
            arr = _decode_upload(data)
        except DecodeError as exc:
            raise StarletteHTTPException(status_code=400, detail=str(exc))
        return query_response(index, arr, k)

    @app.get("/api/images/{entry_id}")
    def get_image(entry_id: int):
        record = _entry_or_404(entry_id)
        path = _image_path(record)
        media, _ = mimetypes.guess_type(path.name)
        return Response(content=path.read_bytes(), media_type=media or "application/octet-stream")

    @app.get("/api/entries/{entry_id}/curves")
    def get_entry_curves(entry_id: int):
        record = _entry_or_404(entry_id)
        return {
            "id": record.id,
            "resolution": index.spec.resolution,
            "values": [float(x) for x in index.descriptors[record.id]],
        }

    if console_dir is not None and Path(console_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(console_dir), html=True), name="console")
    else:

        @app.get("/")
        def placeholder():
            return HTMLResponse(content=_PLACEHOLDER)

    return app
