"""HTTP facade for the designer UI.

Serves a loaded, immutable model archive: score one upload, compare two
variants, and summarize clusters.  All responses are pure functions of the
archive and the payload, so repeated identical uploads get identical bodies.
"""

import hashlib
import json

from fastapi import FastAPI, File, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import dss
from .archive import ModelArchive, archive_payload
from .errors import ScoringError

MAX_UPLOAD_BYTES = 20 * 1024 * 1024


def _score_body(report: dss.ScoreReport, model_version: str) -> dict:
    return {
        "theta": [
            {"cluster": k, "label": report.labels[k], "probability": p}
            for k, p in enumerate(report.theta)
        ],
        "expected_activity": report.expected_activity,
        "viral_probability": report.viral_probability,
        "model_version": model_version,
    }


def create_app(archive: ModelArchive | None, model_version: str | None = None) -> FastAPI:
    """Build the API app around one archive (None = not loaded, all 503)."""
    if model_version is None and archive is not None:
        canonical = json.dumps(archive_payload(archive), sort_keys=True)
        model_version = hashlib.sha256(canonical.encode()).hexdigest()[:12]

    app = FastAPI(title="viralens scoring service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def _no_archive() -> JSONResponse:
        return JSONResponse(status_code=503, content={"detail": "no model archive loaded"})

    async def _read_limited(upload: UploadFile, field: str):
        data = await upload.read()
        if len(data) > MAX_UPLOAD_BYTES:
            return None, JSONResponse(
                status_code=413,
                content={"detail": f"{field} exceeds {MAX_UPLOAD_BYTES} bytes"},
            )
        return data, None

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok", "archive_loaded": archive is not None}

    @app.get("/api/clusters")
    async def clusters():
        if archive is None:
            return _no_archive()
        return [
            {
                "cluster": s.cluster,
                "frequency": s.frequency,
                "average": s.mean,
                "variance": s.variance,
                "label": s.label,
                "viral": s.cluster in archive.viral,
            }
            for s in archive.cluster_stats
        ]

    @app.post("/api/score")
    async def score(image: UploadFile = File(...)):
        if archive is None:
            return _no_archive()
        data, too_big = await _read_limited(image, "image")
        if too_big is not None:
            return too_big
        try:
            report = dss.score(archive, data)
        except ScoringError as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        return _score_body(report, model_version)

    @app.post("/api/compare")
    async def compare(image_a: UploadFile = File(...), image_b: UploadFile = File(...)):
        if archive is None:
            return _no_archive()
        data_a, too_big = await _read_limited(image_a, "image_a")
        if too_big is not None:
            return too_big
        data_b, too_big = await _read_limited(image_b, "image_b")
        if too_big is not None:
            return too_big
        try:
            delta = dss.compare(archive, data_a, data_b)
        except ScoringError as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        return {
            "a": _score_body(delta.report_a, model_version),
            "b": _score_body(delta.report_b, model_version),
            "delta_theta": list(delta.delta_theta),
            "delta_expected_activity": delta.delta_expected_activity,
            "delta_viral_probability": delta.delta_viral_probability,
            "model_version": model_version,
        }

    return app
