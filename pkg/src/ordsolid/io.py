"""JSON file formats with an embedded run manifest.

Every writer emits sorted keys and no timestamps, so identical inputs give
byte-identical files.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .dualgraph import DualGraph, GraphStats, rather_good_segments
from .elliptic import Curve, CurvePoint, weierstrass_short_form
from .errors import GeometryError
from .geom import FLOAT, RATIONAL, Hyperplane, PointConfig, format_scalar, parse_scalar
from .linalg import DEFAULT_TOL
from .quadrics import MONOMIAL_ORDER, Quadric, QuadricSpace
from .structure import StructureVerdict


class FormatError(GeometryError):
    pass


@dataclass
class RunManifest:
    command: str
    inputs: list = field(default_factory=list)
    output: str | None = None
    seed: int = 0
    mode: str = "exact"
    tolerance: float = DEFAULT_TOL
    version: str = __version__


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _with_manifest(doc: dict, manifest: RunManifest | None) -> dict:
    if manifest is not None:
        doc["manifest"] = asdict(manifest)
    return doc


def _scalar(text: str, field_: str):
    if field_ == FLOAT:
        return float(text)
    return parse_scalar(text)


def _fmt(x) -> str:
    return repr(float(x)) if isinstance(x, float) or hasattr(x, "dtype") else format_scalar(x)


# -- point sets --------------------------------------------------------------------

def point_set_doc(config: PointConfig, manifest: RunManifest | None = None) -> dict:
    doc = {
        "dim": config.dim,
        "field": config.field,
        "label": config.label,
        "tolerance": config.tol,
        "points": [[_fmt(x) for x in p.coords] for p in config.points],
    }
    meta = {k: v for k, v in config.meta.items() if isinstance(v, (int, str, list, float))}
    if meta:
        doc["meta"] = meta
    return _with_manifest(doc, manifest)


def read_point_set(doc: dict) -> PointConfig:
    try:
        field_ = doc.get("field", RATIONAL)
        if field_ not in (RATIONAL, FLOAT):
            raise FormatError(f"unknown field {field_!r}")
        dim = int(doc["dim"])
        rows = [tuple(_scalar(x, field_) for x in row) for row in doc["points"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"malformed point-set file: {exc}") from None
    if any(len(r) != dim + 1 for r in rows):
        raise FormatError(f"every point needs {dim + 1} coordinates")
    try:
        return PointConfig(tuple(rows), doc.get("label", ""), field_, float(doc.get("tolerance", DEFAULT_TOL)),
                           dict(doc.get("meta", {})))
    except GeometryError:
        raise
    except ValueError as exc:
        raise FormatError(str(exc)) from None


# -- quadric spaces ------------------------------------------------------------------

def quadric_space_doc(space: QuadricSpace, manifest: RunManifest | None = None) -> dict:
    doc = {"dim": space.dim, "monomial_order": MONOMIAL_ORDER,
           "basis": [[_fmt(x) for x in q.coeffs] for q in space.basis]}
    return _with_manifest(doc, manifest)


def read_quadric_space(doc: dict) -> QuadricSpace:
    if doc.get("monomial_order") != MONOMIAL_ORDER:
        raise FormatError(f"unsupported monomial order {doc.get('monomial_order')!r}")
    dim = int(doc["dim"])
    basis = []
    for row in doc["basis"]:
        is_float = any(("." in x or "e" in x.lower()) and "/" not in x for x in row)
        basis.append(Quadric(dim, tuple(float(x) if is_float else parse_scalar(x) for x in row)))
    return QuadricSpace(dim, basis)


# -- graph reports ------------------------------------------------------------------

def graph_report_doc(graph: DualGraph, stats: GraphStats, manifest: RunManifest | None = None) -> dict:
    segments = []
    for triple in sorted(graph.lines):
        lengths = sorted((s.length for s in rather_good_segments(graph, triple)), reverse=True)
        if lengths:
            segments.append({"line": list(triple), "segment_lengths": lengths})
    doc = {
        "n": stats.n,
        "v_histogram": {str(k): v for k, v in stats.v_histogram.items()},
        "edge_count": stats.edge_count,
        "f_histogram": {str(k): v for k, v in stats.f_histogram.items()},
        "face_count": stats.face_count,
        "bad_edges": stats.bad_edges,
        "slightly_bad_edges": stats.slightly_bad_edges,
        "good_edges": stats.edge_count - stats.bad_edges,
        "K": stats.K,
        "identity_checks": dict(stats.identities),
        "bounds": {"bad_bound": stats.bad_bound, "bad_slack": stats.bad_slack,
                   "slightly_bad_bound": stats.slightly_bad_bound,
                   "slightly_bad_slack": stats.slightly_bad_slack, "hold": stats.bounds_hold},
        "segments": segments,
    }
    return _with_manifest(doc, manifest)


# -- verdicts -----------------------------------------------------------------------

def verdict_doc(verdict: StructureVerdict, manifest: RunManifest | None = None) -> dict:
    cert = verdict.certificate
    if isinstance(cert, Hyperplane):
        certificate = {"kind": "hyperplane", "coeffs": [_fmt(x) for x in cert.coeffs]}
    elif isinstance(cert, QuadricSpace):
        certificate = {"kind": "quadric_space", "space": quadric_space_doc(cert)}
    else:
        certificate = None
    doc = {
        "case": verdict.case,
        "outlier_indices": list(verdict.outliers),
        "certificate": certificate,
        "K": verdict.K,
        "parameters": dict(verdict.parameters),
        "diagnostics": verdict.diagnostics,
    }
    return _with_manifest(doc, manifest)


def read_verdict(doc: dict) -> StructureVerdict:
    cert = doc.get("certificate")
    certificate = None
    if cert and cert["kind"] == "hyperplane":
        coeffs = cert["coeffs"]
        is_float = any("." in x and "/" not in x for x in coeffs)
        certificate = Hyperplane(tuple(float(x) if is_float else int(parse_scalar(x)) for x in coeffs))
    elif cert and cert["kind"] == "quadric_space":
        certificate = read_quadric_space(cert["space"])
    return StructureVerdict(doc["case"], list(doc["outlier_indices"]), certificate, doc["K"],
                            dict(doc["parameters"]), dict(doc.get("diagnostics", {})))


# -- curve descriptors -------------------------------------------------------------

LONG_KEYS = ("a1", "a2", "a3", "a4", "a6")


def read_curve_descriptor(doc: dict):
    """(curve, generator or None, n, mode) from a curve descriptor.

    A long-form curve is converted to short form and the generator mapped
    across.
    """
    try:
        n = int(doc["n"])
        mode = doc.get("mode", "exact")
        gen = None
        if any(k in doc for k in LONG_KEYS):
            curve, cmap = weierstrass_short_form(*(parse_scalar(doc.get(k, 0)) for k in LONG_KEYS))
            if "gx" in doc:
                gen = cmap.forward(CurvePoint(parse_scalar(doc["gx"]), parse_scalar(doc["gy"])))
        else:
            curve = Curve(parse_scalar(doc["a"]), parse_scalar(doc["b"]))
            if "gx" in doc:
                gen = CurvePoint(parse_scalar(doc["gx"]), parse_scalar(doc["gy"]))
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, GeometryError):
            raise
        raise FormatError(f"malformed curve descriptor: {exc}") from None
    return curve, gen, n, mode


def curve_descriptor_doc(curve: Curve, gen: CurvePoint | None, n: int, mode: str) -> dict:
    doc = {"a": format_scalar(curve.a), "b": format_scalar(curve.b), "n": n, "mode": mode}
    if gen is not None and not gen.is_infinity and isinstance(gen.x, (int, Fraction)):
        doc["gx"], doc["gy"] = format_scalar(gen.x), format_scalar(gen.y)
    return doc
