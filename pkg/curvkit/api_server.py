"""HTTP JSON surface over the same pipeline as the command line."""
from __future__ import annotations

import logging
from typing import Any, Dict, Optional, Tuple

from flask import Flask, Response, jsonify, request
from flask_cors import CORS

from . import settings
from .analysis import jacobi_check
from .errors import CurvkitError, DimensionLimitExceeded, InputError, TheoremViolation
from .generators import GeneratorSpec, generate, spec_dimension
from .instance import build_report, load_document, serialize_instance

logger = logging.getLogger(__name__)

app = Flask(__name__)
# CORS for API endpoints so notebooks served elsewhere can call in
CORS(app, resources={r"/api/*": {"origins": "*"}})

MAX_SEED = (1 << 64) - 1


def _query_int(name: str, default: int, maximum: int) -> int:
    """
    Non-negative integer query parameter, clamped to maximum.

    Raises:
        InputError: the parameter is present but not an integer
    """
    value = request.args.get(name)
    if value is None or value == "":
        return default
    try:
        parsed = int(value)
    except ValueError:
        raise InputError(f"query parameter {name!r} must be an integer, got {value!r}") from None
    return max(0, min(parsed, maximum))


def _query_signature() -> Optional[Any]:
    value = request.args.get("signature")
    if not value:
        return None
    try:
        return [int(x) for x in value.split(",")]
    except ValueError:
        # GeneratorSpec validation reports the malformed value
        return value


def _max_dim() -> int:
    configured = app.config.get("CURVKIT_MAX_DIM")
    return settings.max_dim() if configured is None else configured


def _error(exc: Exception) -> Tuple[Response, int]:
    if isinstance(exc, InputError):
        status = 400
    elif isinstance(exc, TheoremViolation):
        status = 422
    else:
        status = 500
    logger.error("%s: %s", type(exc).__name__, exc)
    return jsonify({"error": str(exc), "kind": type(exc).__name__}), status


@app.route("/")
def index() -> Response:
    return Response(
        "curvkit exact curvature certification service.\n"
        "Available endpoints:\n"
        "  POST /api/analyze  - Full report for an instance (JSON body in the instance format)\n"
        "  POST /api/verify   - Report plus ok/exit_code (2 when a certificate fails)\n"
        "  POST /api/jacobi   - Jacobi identity breakdown on h(K) + V\n"
        "  GET  /api/generate - Generated instance; query: kind, seed, signature=p,q, curvature=p/q\n"
        "  POST /api/generate - Generated instance from a JSON generator spec\n"
        f"Instances above dimension {_max_dim()} are refused.",
        mimetype="text/plain",
    )


@app.route("/api/analyze", methods=["POST"])
def api_analyze():
    try:
        instance = load_document(request.get_data(as_text=True), max_dim=_max_dim())
        return jsonify(build_report(instance))
    except CurvkitError as exc:
        return _error(exc)


@app.route("/api/verify", methods=["POST"])
def api_verify():
    try:
        instance = load_document(request.get_data(as_text=True), max_dim=_max_dim())
        report = build_report(instance)
    except CurvkitError as exc:
        return _error(exc)
    ok = report["semisymmetry"]["semisymmetric"] and not report["violations"]
    report["ok"] = ok
    report["exit_code"] = 0 if ok else 2
    return jsonify(report)


@app.route("/api/jacobi", methods=["POST"])
def api_jacobi():
    try:
        instance = load_document(request.get_data(as_text=True), max_dim=_max_dim())
        return jsonify(jacobi_check(instance.tensor).to_dict())
    except CurvkitError as exc:
        return _error(exc)


@app.route("/api/generate", methods=["GET", "POST"])
def api_generate():
    try:
        if request.method == "POST":
            raw: Dict[str, Any] = request.get_json(silent=True) or {}
        else:
            params: Dict[str, Any] = {}
            signature = _query_signature()
            if signature is not None:
                params["signature"] = signature
            if request.args.get("curvature"):
                params["curvature"] = request.args["curvature"]
            raw = {
                "kind": request.args.get("kind", "constant"),
                "seed": _query_int("seed", 0, MAX_SEED),
                "params": params,
            }
        spec = GeneratorSpec.from_dict(raw)
        dim, limit = spec_dimension(spec), _max_dim()
        if dim > limit:
            raise DimensionLimitExceeded(dim, limit)
        generated = generate(spec)
    except CurvkitError as exc:
        return _error(exc)
    text = serialize_instance(generated.space, generated.tensor, generated.meta)
    return Response(text, mimetype="application/json")


def create_app(max_dim: Optional[int] = None) -> Flask:
    app.config["CURVKIT_MAX_DIM"] = max_dim
    return app


__all__ = ["app", "create_app"]
