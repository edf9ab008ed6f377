"""
Instance file format and report schema.

An instance is a JSON object:

    {
      "gram":   [["1", "0"], ["0", "1"]],
      "tensor": {"basis": "lex-bivector", "matrix": [["3"]]},
      "meta":   {"name": "...", "generator_spec": {...}}
    }

Rationals are "p/q" strings or bare integers. Floats and decimal strings
are rejected with their position in the text.
"""
from __future__ import annotations

import hashlib
import json
import logging
import re
import sys
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Dict, Optional, Tuple

import requests

from . import __version__, settings
from .analysis import analyze_instance, fmt_matrix
from .curvature import CurvatureTensor, make_curvature
from .errors import (
    DegenerateMetric,
    DimensionLimitExceeded,
    InputError,
    NotSymmetric,
    ParseError,
    ValidationError,
)
from .exactnum import parse_rational
from .space import MetricSpace, make_space

logger = logging.getLogger(__name__)

BIVECTOR_BASIS = "lex-bivector"


@dataclass(frozen=True)
class Instance:
    space: MetricSpace
    tensor: CurvatureTensor
    meta: Dict[str, Any] = field(default_factory=dict)


class _FloatLiteral(Exception):
    def __init__(self, token: str) -> None:
        self.token = token
        super().__init__(token)


def _reject_float(token: str):
    raise _FloatLiteral(token)


def _locate(text: str, token: str) -> Tuple[Optional[int], Optional[int]]:
    """1-based (line, col) of the first standalone occurrence of token."""
    match = re.search(r"(?<![\w.\-])" + re.escape(token) + r"(?![\w.])", text)
    if not match:
        return None, None
    before = text[: match.start()]
    line = before.count("\n") + 1
    col = match.start() - (before.rfind("\n") + 1) + 1
    return line, col


def _entry(text: str, raw: Any, where: str):
    if isinstance(raw, bool) or not isinstance(raw, (int, str)):
        line, col = _locate(text, json.dumps(raw))
        raise ParseError(f"{where}: expected a rational string or integer, got {raw!r}", line, col)
    if isinstance(raw, int):
        return parse_rational(str(raw))
    try:
        return parse_rational(raw)
    except ParseError:
        line, col = _locate(text, json.dumps(raw))
        raise ParseError(f"{where}: {raw!r} is not an exact rational", line, col) from None


def _matrix(text: str, raw: Any, where: str):
    if not isinstance(raw, list) or not all(isinstance(row, list) for row in raw):
        raise ParseError(f"{where} must be a list of rows")
    width = len(raw[0]) if raw else 0
    if any(len(row) != width for row in raw):
        raise ValidationError(f"{where} is rectangular", [len(row) for row in raw])
    return [[_entry(text, x, f"{where}[{i}][{j}]") for j, x in enumerate(row)] for i, row in enumerate(raw)]


def load_document(text: str, max_dim: Optional[int] = None) -> Instance:
    """
    Parse and validate an instance document.

    Args:
        text: JSON instance text
        max_dim: Dimension guard; defaults to settings.max_dim()

    Returns:
        Instance with validated space, tensor and meta
    """
    try:
        doc = json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
    except _FloatLiteral as exc:
        line, col = _locate(text, exc.token)
        raise ParseError(f"floating point literal {exc.token} is not allowed; write \"p/q\"", line, col) from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None

    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object", 1, 1)
    for key in ("gram", "tensor"):
        if key not in doc:
            raise ParseError(f"missing required key {key!r}")

    gram = _matrix(text, doc["gram"], "gram")
    limit = settings.max_dim() if max_dim is None else max_dim
    if len(gram) > limit:
        raise DimensionLimitExceeded(len(gram), limit)
    try:
        space = make_space(gram)
    except NotSymmetric as exc:
        raise ValidationError("gram symmetry", str(exc)) from None
    except DegenerateMetric as exc:
        raise ValidationError("gram nondegeneracy", str(exc)) from None

    tensor = doc["tensor"]
    if not isinstance(tensor, dict) or "matrix" not in tensor:
        raise ParseError("tensor must be an object with a matrix")
    if tensor.get("basis", BIVECTOR_BASIS) != BIVECTOR_BASIS:
        raise ValidationError("bivector basis", tensor.get("basis"))
    rows = _matrix(text, tensor["matrix"], "tensor.matrix")
    Kt = make_curvature(space, rows)
    meta = doc.get("meta") or {}
    if not isinstance(meta, dict):
        raise ParseError("meta must be an object")
    logger.debug("parsed instance of dimension %d, signature %s", space.n, space.signature)
    return Instance(space=space, tensor=Kt, meta=meta)


def parse_instance(text: str, max_dim: Optional[int] = None) -> Tuple[MetricSpace, CurvatureTensor]:
    instance = load_document(text, max_dim)
    return instance.space, instance.tensor


def serialize_instance(space: MetricSpace, Kt: CurvatureTensor, meta: Optional[Dict[str, Any]] = None) -> str:
    """Canonical JSON: sorted keys, 2-space indent, trailing newline."""
    doc: Dict[str, Any] = {
        "gram": fmt_matrix(space.G),
        "tensor": {"basis": BIVECTOR_BASIS, "matrix": fmt_matrix(Kt.matrix)},
    }
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def input_digest(space: MetricSpace, Kt: CurvatureTensor) -> str:
    return hashlib.sha256(serialize_instance(space, Kt).encode("utf-8")).hexdigest()


def load_instance_source(source: str) -> str:
    """Read instance text from a path, "-" for stdin, or an http(s) URL."""
    if source == "-":
        return sys.stdin.read()
    if source.startswith(("http://", "https://")):
        logger.info("Fetching instance from %s", source)
        try:
            resp = requests.get(source, timeout=settings.http_timeout())
            resp.raise_for_status()
        except requests.RequestException as exc:
            raise InputError(f"could not fetch {source}: {exc}") from exc
        return resp.text
    try:
        with open(source, encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise InputError(f"could not read {source}: {exc}") from exc


def build_report(instance: Instance, timestamp: bool = True) -> Dict[str, Any]:
    """analyze_instance plus tool version, input digest and (optionally) a timestamp."""
    report = analyze_instance(instance.tensor)
    report["tool"] = {"name": "curvkit", "version": __version__}
    report["input_digest"] = input_digest(instance.space, instance.tensor)
    if instance.meta:
        report["meta"] = instance.meta
    if timestamp:
        report["generated_at"] = datetime.now(settings.report_timezone()).isoformat(timespec="seconds")
    return report


def render_report(report: Dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def report_summary(report: Dict[str, Any]) -> str:
    """Short human-readable form of a report."""
    lines = [
        f"dimension {report['dimension']}, signature {tuple(report['signature'])}"
        + (" (Lorentzian)" if report["lorentzian"] else ""),
        f"semi-symmetric: {report['semisymmetry']['semisymmetric']}",
    ]
    witness = report["semisymmetry"]["witness"]
    if witness:
        lines.append(f"  witness (u, v, a, b): {tuple(witness)}")
    lines.append(f"ricci: {report['ricci']['class']}, minimal polynomial {report['ricci']['minpoly']}")
    lines.append(f"holonomy dimension: {report['holonomy_dim']}")
    lines.append(f"jacobi identity: {'holds' if report['jacobi']['holds'] else 'fails'}")
    rdec = report.get("ricci_decomposition")
    if rdec:
        tags = ", ".join(f"{b['tag']}[{b['dim']}]" for b in rdec["blocks"])
        lines.append(f"ricci blocks: {tags}" + (" (coarse)" if rdec["flags"]["coarse"] else ""))
    pdec = report.get("primitive_decomposition")
    if pdec:
        tags = ", ".join(f"{b['tag']}[{b['dim']}]" for b in pdec["blocks"])
        lines.append(f"primitive blocks: {tags}" + (" (heuristic)" if pdec["flags"]["heuristic"] else ""))
    lor = report.get("lorentzian_report")
    if lor:
        lines.append(f"lorentzian case {lor['case']}, all eigenvalues real: {lor['all_real']}, leaf shape {lor['leaf_shape']}")
    if report["violations"]:
        lines.append(f"VIOLATIONS: {len(report['violations'])}")
        lines.extend(f"  - {v.get('certificate')}" for v in report["violations"])
    return "\n".join(lines) + "\n"


__all__ = [
    "BIVECTOR_BASIS",
    "Instance",
    "build_report",
    "input_digest",
    "load_document",
    "load_instance_source",
    "parse_instance",
    "render_report",
    "report_summary",
    "serialize_instance",
]
