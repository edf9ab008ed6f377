"""
Command line surface.

Exit codes: 0 ok, 1 usage or input error, 2 theorem violation,
3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

from . import __version__, settings
from .analysis import jacobi_check
from .errors import (
    CurvkitError,
    DimensionLimitExceeded,
    GaveUp,
    InputError,
    InternalInvariantError,
    NotSemisymmetric,
    SpecInvalid,
    TheoremViolation,
)
from .generators import GeneratorSpec, SplitMix64, generate, random_isometry, spec_dimension, suite_specs
from .holonomy import act_group
from .instance import (
    Instance,
    build_report,
    load_document,
    load_instance_source,
    render_report,
    report_summary,
    serialize_instance,
)

logger = logging.getLogger("curvkit")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2
EXIT_INTERNAL = 3


def _load(args: argparse.Namespace) -> Instance:
    text = load_instance_source(args.source)
    instance = load_document(text, max_dim=args.max_dim)
    logger.info("Loaded %s: dimension %d, signature %s", args.source, instance.space.n, instance.space.signature)
    return instance


def _emit(args: argparse.Namespace, report: Dict[str, Any]) -> None:
    sys.stdout.write(render_report(report) if args.json else report_summary(report))


# === Subcommands ===
def cmd_analyze(args: argparse.Namespace) -> int:
    _emit(args, build_report(_load(args)))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    report = build_report(_load(args))
    _emit(args, report)
    if not report["semisymmetry"]["semisymmetric"]:
        logger.error("Instance is not semi-symmetric; witness %s", report["semisymmetry"]["witness"])
        return EXIT_VIOLATION
    if report["violations"]:
        logger.error("%d certificate(s) failed", len(report["violations"]))
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_jacobi(args: argparse.Namespace) -> int:
    instance = _load(args)
    result = jacobi_check(instance.tensor)
    if args.json:
        sys.stdout.write(json.dumps(result.to_dict(), sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(f"jacobi identity: {'holds' if result.holds else 'fails'}\n")
        for kind, counts in result.by_type.items():
            sys.stdout.write(f"  {kind}: {counts['failed']} failed of {counts['checked']}\n")
        if result.closure_grew:
            sys.stdout.write(f"  holonomy span grew from {result.span_dim} to {result.closure_dim} under closure\n")
    return EXIT_OK


def _spec_from_args(args: argparse.Namespace) -> GeneratorSpec:
    if args.spec:
        raw = args.spec
        if not raw.lstrip().startswith("{"):
            raw = load_instance_source(raw)
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SpecInvalid(f"generator spec is not valid JSON: {exc.msg}") from None
        return GeneratorSpec.from_dict(data)
    if not args.kind:
        raise SpecInvalid("generate needs --spec or --kind")
    params: Dict[str, Any] = {}
    if args.signature:
        try:
            params["signature"] = [int(x) for x in args.signature.split(",")]
        except ValueError:
            raise SpecInvalid(f"--signature must be p,q, got {args.signature!r}") from None
    if args.curvature:
        params["curvature"] = args.curvature
    return GeneratorSpec.from_dict({"kind": args.kind, "seed": args.seed, "params": params})


def cmd_generate(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    limit = settings.max_dim() if args.max_dim is None else args.max_dim
    dim = spec_dimension(spec)
    if dim > limit:
        raise DimensionLimitExceeded(dim, limit)
    generated = generate(spec)
    text = serialize_instance(generated.space, generated.tensor, generated.meta)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("Wrote %s instance to %s", spec.kind, args.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _block_dims(decomposition: Optional[Dict[str, Any]]) -> List[int]:
    if not decomposition:
        return []
    return sorted(block["dim"] for block in decomposition["blocks"])


def isometry_invariants(report: Dict[str, Any]) -> Dict[str, Any]:
    """The parts of a report that conjugating K by an isometry must leave unchanged."""
    return {
        "semi-symmetry": report["semisymmetry"]["semisymmetric"],
        "Ricci minimal polynomial": report["ricci"]["minpoly"],
        "Ricci class": report["ricci"]["class"],
        "holonomy dimension": report["holonomy_dim"],
        "Jacobi verdict": report["jacobi"]["holds"],
        "Ricci block dimensions": _block_dims(report["ricci_decomposition"]),
        "primitive block dimensions": _block_dims(report["primitive_decomposition"]),
        "violations": sorted(str(v.get("certificate")) for v in report["violations"]),
    }


def run_suite_entry(spec_dict: Dict[str, Any]) -> Dict[str, Any]:
    """Generate, analyze and cross-check one suite instance. Top-level so workers can pickle it."""
    spec = GeneratorSpec.from_dict(spec_dict)
    generated = generate(spec)
    instance = Instance(space=generated.space, tensor=generated.tensor, meta=generated.meta)
    report = build_report(instance, timestamp=False)
    semisym = report["semisymmetry"]["semisymmetric"]
    problems: List[str] = [v.get("certificate", "?") for v in report["violations"]]

    if spec.kind == "adversarial" and semisym:
        problems.append("adversarial instance is semi-symmetric")
    if spec.kind != "adversarial" and not semisym:
        problems.append("generated instance is not semi-symmetric")
    if semisym != report["jacobi"]["holds"]:
        problems.append("semi-symmetry and Jacobi disagree")

    if semisym and spec.kind != "projected":
        Q = random_isometry(generated.space, SplitMix64(spec.seed ^ 0xC0FFEE))
        moved = act_group(Q, generated.tensor)
        moved_report = build_report(Instance(space=generated.space, tensor=moved), timestamp=False)
        before, after = isometry_invariants(report), isometry_invariants(moved_report)
        problems.extend(f"{key} not preserved by isometry" for key in before if before[key] != after[key])

    return {
        "seed": spec.seed,
        "kind": spec.kind,
        "dimension": generated.space.n,
        "signature": list(generated.space.signature),
        "semisymmetric": semisym,
        "ricci_class": report["ricci"]["class"],
        "input_digest": report["input_digest"],
        "problems": problems,
    }


def cmd_suite(args: argparse.Namespace) -> int:
    specs = [spec.to_dict() for spec in suite_specs(args.seed, args.count)]
    workers = args.workers or settings.workers()
    logger.info("Running suite: seed %d, %d instance(s), %d worker(s)", args.seed, len(specs), workers)
    if workers > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            entries = list(pool.map(run_suite_entry, specs))
    else:
        entries = [run_suite_entry(spec) for spec in specs]

    by_kind: Dict[str, Dict[str, int]] = {}
    for entry in entries:
        bucket = by_kind.setdefault(entry["kind"], {"count": 0, "semisymmetric": 0, "problems": 0})
        bucket["count"] += 1
        bucket["semisymmetric"] += int(entry["semisymmetric"])
        bucket["problems"] += len(entry["problems"])
    failures = [e for e in entries if e["problems"]]
    digest = hashlib.sha256("".join(e["input_digest"] for e in entries).encode("ascii")).hexdigest()
    summary = {
        "seed": args.seed,
        "count": len(entries),
        "by_kind": by_kind,
        "failures": failures,
        "suite_digest": digest,
        "version": __version__,
        "workers": workers,
    }
    if args.json:
        sys.stdout.write(json.dumps(summary, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(f"suite seed {args.seed}: {len(entries)} instance(s), {len(failures)} with problems\n")
        for kind in sorted(by_kind):
            counts = by_kind[kind]
            sys.stdout.write(f"  {kind}: {counts['count']} run, {counts['semisymmetric']} semi-symmetric, {counts['problems']} problem(s)\n")
        for entry in failures:
            sys.stdout.write(f"  FAIL seed {entry['seed']} ({entry['kind']}): {'; '.join(entry['problems'])}\n")
        sys.stdout.write(f"  digest {digest}\n")
    return EXIT_VIOLATION if failures else EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .api_server import create_app

    app = create_app(max_dim=args.max_dim)
    bind = args.bind or settings.api_bind()
    port = args.port or settings.api_port()
    logger.info("Serving on %s:%d", bind, port)
    app.run(host=bind, port=port)
    return EXIT_OK


# === Parser ===
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Emit machine-readable JSON")
    common.add_argument("--max-dim", type=int, default=None, help="Refuse instances above this dimension (default: CURVKIT_MAX_DIM or 8)")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(prog="curvkit", description="Exact certification of semi-symmetric curvature tensors")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, help_text in (
        ("analyze", cmd_analyze, "Full report for an instance"),
        ("verify", cmd_verify, "Exit 0 iff every applicable certificate passes"),
        ("jacobi", cmd_jacobi, "Jacobi identity on h(K) + V"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("source", help="Instance file, '-' for stdin, or an http(s) URL")
        p.set_defaults(func=func)

    p = sub.add_parser("generate", parents=[common], help="Write a generated instance")
    p.add_argument("--spec", help="Generator spec as a file path or inline JSON")
    p.add_argument("--kind", help="Generator kind when no --spec is given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--signature", help="p,q for kinds that take a signature")
    p.add_argument("--curvature", help="Curvature constant as p/q")
    p.add_argument("-o", "--output", help="Output file (default stdout)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("suite", parents=[common], help="Generate, analyze and cross-check a seeded suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--workers", type=int, default=None, help="Worker processes (default CURVKIT_WORKERS)")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("serve", parents=[common], help="Run the HTTP JSON API")
    p.add_argument("--bind", default=None, help="Listen address (default CURVKIT_BIND or 127.0.0.1)")
    p.add_argument("--port", type=int, default=None, help="Listen port (default CURVKIT_PORT or 8080)")
    p.set_defaults(func=cmd_serve)
    return parser


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    settings.load_env_file()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    settings.configure_logging(verbose=args.verbose)

    try:
        return args.func(args)
    except (InputError, GaveUp) as exc:
        logger.error("%s", exc)
        return EXIT_INPUT
    except (TheoremViolation, NotSemisymmetric) as exc:
        logger.error("Theorem violation: %s", exc)
        return EXIT_VIOLATION
    except InternalInvariantError as exc:
        logger.error("Internal invariant breached (this is a bug): %s", exc)
        return EXIT_INTERNAL
    except CurvkitError as exc:
        logger.error("%s", exc)
        return EXIT_INTERNAL
    except Exception:
        logger.exception("Unexpected error")
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run_cli())


__all__ = ["build_parser", "isometry_invariants", "main", "run_cli", "run_suite_entry"]
