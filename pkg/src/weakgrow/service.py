"""Stateless HTTP preview service for the annotation UI.

POST /v1/preview takes a base64 slice plus inline weak labels and returns
the generated pseudo-label mask; GET /v1/health reports the defaults.
Every request is an isolated pure computation.
"""

import base64
import binascii
import json
import time
from dataclasses import asdict, replace

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__, imageio
from .errors import (
    ConstraintGeometryError,
    ContractError,
    ParameterError,
    WeakLabelError,
)
from .evaluation import dice
from .pseudolabel import GrowConfig, generate_pseudo_label
from .weaklabel import WeakLabelSet, parse_weak_labels

MAX_BODY_BYTES = 8 * 1024 * 1024

_CONFIG_KEYS = {
    "epsilon",
    "smooth_kernel",
    "close_kernel",
    "bezier_offset",
    "connectivity",
    "use_backbone",
    "use_fill",
    "use_edge_limit",
    "include_line_in_backbone",
    "midpoint",
    "close_iterations",
}


class PreviewRequest(BaseModel):
    image: str
    labels: dict
    config: dict | None = None
    reference: str | None = None


def _bad_request(message):
    return JSONResponse(status_code=400, content={"detail": message})


def _decode_b64(value, what):
    try:
        return base64.b64decode(value, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise ParameterError(f"{what} is not valid base64: {exc}") from exc


def create_app(allowed_origins=("*",)):
    app = FastAPI(title="weakgrow preview service", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(allowed_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def limit_body(request: Request, call_next):
        length = request.headers.get("content-length")
        if length and int(length) > MAX_BODY_BYTES:
            return JSONResponse(status_code=413, content={"detail": "payload too large"})
        return await call_next(request)

    @app.get("/v1/health")
    def health():
        return {
            "status": "ok",
            "version": __version__,
            "defaults": asdict(GrowConfig()),
        }

    @app.post("/v1/preview")
    def preview(req: PreviewRequest):
        try:
            img = imageio.decode_gray(_decode_b64(req.image, "image"))
        except ParameterError as exc:
            return _bad_request(str(exc))
        try:
            labels = parse_weak_labels(json.dumps(req.labels))
        except WeakLabelError as exc:
            return _bad_request(str(exc))
        if img.shape != (labels.height, labels.width):
            return _bad_request(
                f"image shape {img.shape} does not match label dims "
                f"({labels.height}, {labels.width})"
            )
        cfg = GrowConfig()
        if req.config:
            unknown = set(req.config) - _CONFIG_KEYS
            if unknown:
                return _bad_request(f"unknown config keys: {sorted(unknown)}")
            try:
                cfg = replace(cfg, **req.config)
            except ParameterError as exc:
                return _bad_request(str(exc))
        reference = None
        if req.reference is not None:
            try:
                reference = imageio.decode_gray(_decode_b64(req.reference, "reference")) > 0
            except ParameterError as exc:
                return _bad_request(str(exc))
            if reference.shape != img.shape:
                return _bad_request("reference mask dims do not match the image")
        t0 = time.perf_counter()
        try:
            result = generate_pseudo_label(img, labels, cfg)
        except ConstraintGeometryError as exc:
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        except ContractError as exc:
            # geometry that breaches the growth contract is a client problem
            return JSONResponse(status_code=422, content={"detail": str(exc)})
        timings = dict(result.timings_ms)
        timings["total"] = (time.perf_counter() - t0) * 1000.0
        body = {
            "mask": base64.b64encode(imageio.encode_mask_png(result.mask)).decode("ascii"),
            "empty": result.empty,
            "timings_ms": timings,
        }
        if reference is not None:
            per_region = {}
            for region in labels.regions:
                single = WeakLabelSet(
                    image=labels.image,
                    height=labels.height,
                    width=labels.width,
                    regions=(region,),
                )
                try:
                    region_mask = generate_pseudo_label(img, single, cfg).mask
                except (ConstraintGeometryError, ContractError) as exc:
                    return JSONResponse(status_code=422, content={"detail": str(exc)})
                per_region[region.kind] = dice(region_mask, reference)
            body["dice_per_region"] = per_region
        return body

    return app
