"""Command-line interface: spec documents, analysis reports, trajectory files,
and geometry export (SVG for planar frameworks, plain segment lists otherwise).

Spec documents are strict JSON: {"dimension": d} plus exactly one of
"edge_vectors", "preset": "standard", or "squared_lengths" with
"mode": "critical-max", and an optional "seed".  Persisted floats use 17
significant digits so parsing them back reproduces the doubles exactly;
human-facing reports use 9.
"""

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .auxetic import capability_test, trace_auxetic_path
from .cayley import auxetic_halfspace_test, pointedness_test, topology_probe
from .critical import (
    NEGATIVE_EXTREMUM,
    criticality_report,
    find_critical_alphas,
    lagrange_residual,
    realize_critical,
)
from .errors import (
    ConeViolationError,
    DegenerateCellError,
    DiamantineError,
    FormatError,
    IncapableError,
    InputError,
    OffHypersurfaceError,
    ParseError,
    RealizationError,
    ShapeError,
)
from .framework import FrameworkSpec, generate_patch, make_from_vectors, make_standard, volume
from .gram import omega_of, realize_from_omega

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4

PERSIST_DIGITS = 17
REPORT_DIGITS = 9

_SPEC_FIELDS = {"dimension", "edge_vectors", "preset", "squared_lengths", "mode", "seed"}
_OMEGA_FIELDS = {"dimension", "omega", "squared_lengths"}


# ---------------------------------------------------------------------------
# spec documents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpecDocument:
    """Validated input document; exactly one construction path is set."""

    dimension: int
    edge_vectors: tuple | None = None
    preset: str | None = None
    squared_lengths: tuple | None = None
    seed: int = 0


def load_spec_document(text: str) -> SpecDocument:
    """Parse and validate a spec document, rejecting unknown fields."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("document root must be an object")
    unknown = set(raw) - _SPEC_FIELDS
    if unknown:
        raise ParseError("unknown field", field=sorted(unknown)[0])

    dim = raw.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
        raise ParseError("must be an integer >= 2", field="dimension")

    paths = [k for k in ("edge_vectors", "preset", "squared_lengths") if k in raw]
    if len(paths) != 1:
        raise ParseError(
            f"exactly one of edge_vectors / preset / squared_lengths required, got {paths or 'none'}"
        )

    seed = raw.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ParseError("must be an integer", field="seed")

    if "preset" in raw:
        if raw["preset"] != "standard":
            raise ParseError(f"unknown preset {raw['preset']!r}", field="preset")
        if "mode" in raw:
            raise ParseError("mode is only valid with squared_lengths", field="mode")
        return SpecDocument(dimension=dim, preset="standard", seed=seed)

    if "edge_vectors" in raw:
        if "mode" in raw:
            raise ParseError("mode is only valid with squared_lengths", field="mode")
        vecs = raw["edge_vectors"]
        if not isinstance(vecs, list) or not all(isinstance(v, list) for v in vecs):
            raise ParseError("must be a list of vectors", field="edge_vectors")
        for i, v in enumerate(vecs):
            if len(v) != dim or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
                raise ParseError(f"expected {dim} numbers", field=f"edge_vectors[{i}]")
        return SpecDocument(dimension=dim, edge_vectors=tuple(tuple(float(x) for x in v) for v in vecs), seed=seed)

    if raw.get("mode") != "critical-max":
        raise ParseError('squared_lengths requires "mode": "critical-max"', field="mode")
    s = raw["squared_lengths"]
    if not isinstance(s, list) or len(s) != dim + 1:
        raise ParseError(f"must be a list of {dim + 1} numbers", field="squared_lengths")
    for i, x in enumerate(s):
        if not isinstance(x, (int, float)) or isinstance(x, bool) or x <= 0:
            raise ParseError("entries must be positive numbers", field=f"squared_lengths[{i}]")
    return SpecDocument(dimension=dim, squared_lengths=tuple(float(x) for x in s), seed=seed)


def build_spec(doc: SpecDocument) -> FrameworkSpec:
    """Construct the framework selected by a validated document."""
    if doc.preset == "standard":
        return make_standard(doc.dimension)
    if doc.edge_vectors is not None:
        if len(doc.edge_vectors) != doc.dimension + 1:
            raise ShapeError(
                f"dimension {doc.dimension} needs {doc.dimension + 1} edge vectors, got {len(doc.edge_vectors)}"
            )
        return make_from_vectors(np.asarray(doc.edge_vectors, dtype=float))
    s = np.sort(np.asarray(doc.squared_lengths, dtype=float))
    roots = find_critical_alphas(s)
    negative = next(a for a in roots if a.kind == NEGATIVE_EXTREMUM)
    return realize_critical(negative, s)


def parse_spec(text: str) -> FrameworkSpec:
    """Spec document text to framework, via the schema above."""
    return build_spec(load_spec_document(text))


def serialize_spec(spec: FrameworkSpec, seed: int | None = None) -> str:
    """Canonical document for a framework; floats round-trip exactly."""
    doc = {
        "dimension": spec.dimension,
        "edge_vectors": [[float(x) for x in row] for row in spec.edge_vectors],
    }
    if seed is not None:
        doc["seed"] = seed
    return format_json(doc, PERSIST_DIGITS)


# ---------------------------------------------------------------------------
# deterministic JSON / number formatting
# ---------------------------------------------------------------------------

def format_float(x: float, digits: int) -> str:
    return f"{float(x):.{digits}g}"


def format_json(obj, digits: int, indent: int = 0) -> str:
    """JSON text with fixed significant digits for floats, stable key order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f'{pad}  {json.dumps(str(k))}: {format_json(v, digits, indent + 1)}' for k, v in obj.items()
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(_format_scalar(v, digits) for v in seq) + "]"
        items = ",\n".join(f"{pad}  {format_json(v, digits, indent + 1)}" for v in seq)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, np.ndarray):
        return format_json(obj.tolist(), digits, indent)
    return _format_scalar(obj, digits)


def _format_scalar(v, digits: int) -> str:
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format_float(v, digits)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def analyze_report(spec: FrameworkSpec, seed: int = 0) -> dict:
    """Aggregate report: lengths, volume, omega, roots, capability, planar forms."""
    if spec.is_degenerate:
        raise DegenerateCellError("input framework is degenerate (cell volume ~ 0)")
    s_sorted = np.sort(spec.squared_lengths)
    crit = criticality_report(s_sorted)
    rng = np.random.default_rng(seed)
    cap = capability_test(spec, rng=rng)

    report = {
        "dimension": spec.dimension,
        "squared_lengths": spec.squared_lengths.tolist(),
        "volume": volume(spec),
        "omega": omega_of(spec).tolist(),
        "critical_alphas": [
            {
                "value": a.value,
                "kind": a.kind,
                "bracket": list(a.bracket),
                "multiplicity": a.multiplicity,
            }
            for a in crit.alphas
        ],
        "max_abs_volume": crit.max_volume,
        "lagrange_residual": lagrange_residual(spec),
        "capability": {
            "verdict": cap.verdict,
            "normal": cap.normal.tolist(),
            "normal_eigenvalues": cap.normal_eigenvalues.tolist(),
            "margin": cap.margin,
            "certificate": None
            if cap.certificate is None
            else {
                "velocities": cap.certificate.velocities.tolist(),
                "omega_dot": cap.certificate.omega_dot.tolist(),
            },
        },
    }
    if spec.dimension == 2 and np.max(np.abs(spec.squared_lengths - 1.0)) <= 1e-9:
        w = omega_of(spec)
        triple = (float(w[0, 0]), float(w[0, 1]), float(w[1, 1]))
        report["unit_planar"] = {
            "halfspace_value": triple[0] - triple[1] + triple[2],
            "halfspace_verdict": auxetic_halfspace_test(triple),
            "pointedness_sum": float(
                spec.edge_vectors[0] @ spec.edge_vectors[1]
                + spec.edge_vectors[1] @ spec.edge_vectors[2]
                + spec.edge_vectors[2] @ spec.edge_vectors[0]
            ),
            "pointedness_verdict": pointedness_test(spec),
        }
    return report


def trajectory_rows(trajectory) -> tuple[list[str], list[list[str]]]:
    """Header and 17-digit rows of the delimited trajectory table."""
    d = trajectory.samples[0].spec.dimension
    header = ["tau"]
    header += [f"p{i}_{k}" for i in range(d + 1) for k in range(d)]
    header += [f"omega_{i + 1}{j + 1}" for i in range(d) for j in range(i, d)]
    header += ["volume", "increment_min_eig"]
    rows = []
    for sample in trajectory.samples:
        row = [format_float(sample.tau, PERSIST_DIGITS)]
        row += [format_float(x, PERSIST_DIGITS) for x in sample.spec.edge_vectors.ravel()]
        row += [
            format_float(sample.omega[i, j], PERSIST_DIGITS)
            for i in range(d)
            for j in range(i, d)
        ]
        row.append(format_float(sample.volume, PERSIST_DIGITS))
        row.append(
            "nan" if sample.increment_min_eig is None else format_float(sample.increment_min_eig, PERSIST_DIGITS)
        )
        rows.append(row)
    return header, rows


def write_trajectory_csv(trajectory, stream) -> None:
    header, rows = trajectory_rows(trajectory)
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(row) + "\n")


# ---------------------------------------------------------------------------
# geometry export
# ---------------------------------------------------------------------------

def render_svg(patch) -> str:
    """One line element per patch edge; viewBox fits the vertices plus 5%."""
    pts = patch.vertices.copy()
    pts[:, 1] = -pts[:, 1]  # svg y axis points down
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-9)
    margin = 0.05 * span
    lo -= margin
    size = span + 2 * margin
    lengths = [
        float(np.linalg.norm(patch.vertices[a] - patch.vertices[b])) for a, b in patch.edges
    ]
    stroke = 0.03 * min(lengths)
    fmt = lambda x: format_float(x, REPORT_DIGITS)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{fmt(lo[0])} {fmt(lo[1])} {fmt(size[0])} {fmt(size[1])}">'
    ]
    for a, b in patch.edges:
        lines.append(
            f'  <line x1="{fmt(pts[a, 0])}" y1="{fmt(pts[a, 1])}" '
            f'x2="{fmt(pts[b, 0])}" y2="{fmt(pts[b, 1])}" '
            f'stroke="black" stroke-width="{fmt(stroke)}" stroke-linecap="round"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_segments(patch) -> str:
    """One edge per line: both endpoint coordinate blocks, 17 significant digits."""
    out = []
    for a, b in patch.edges:
        left = " ".join(format_float(x, PERSIST_DIGITS) for x in patch.vertices[a])
        right = " ".join(format_float(x, PERSIST_DIGITS) for x in patch.vertices[b])
        out.append(f"{left}  {right}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_analyze(args) -> int:
    doc = load_spec_document(_read_text(args.spec))
    spec = build_spec(doc)
    report = analyze_report(spec, seed=doc.seed)
    _write_output(format_json(report, REPORT_DIGITS) + "\n", args.output)
    if args.figure:
        from . import figures

        figures.save_analyze_figure(spec, report, args.figure)
    return EXIT_OK


def cmd_trace(args) -> int:
    doc = load_spec_document(_read_text(args.spec))
    spec = build_spec(doc)
    policy, strain = _parse_policy(args.policy, spec.dimension)
    rng = np.random.default_rng(doc.seed)
    trajectory = trace_auxetic_path(
        spec, steps=args.steps, step_size=args.step_size, policy=policy, strain_target=strain, rng=rng
    )
    with open(args.output, "w", encoding="utf-8") as fh:
        write_trajectory_csv(trajectory, fh)
    if args.figure:
        from . import figures

        figures.save_trace_figure(trajectory, args.figure)
    first, last = trajectory.samples[0], trajectory.samples[-1]
    increments = [s.increment_min_eig for s in trajectory.samples[1:]]
    worst = min(increments) if increments else float("nan")
    print(f"samples: {len(trajectory.samples)}  stop: {trajectory.stop_reason}")
    print(
        f"|V| initial {format_float(abs(first.volume), REPORT_DIGITS)}"
        f" -> final {format_float(abs(last.volume), REPORT_DIGITS)}"
    )
    print(f"min increment eigenvalue over run: {format_float(worst, REPORT_DIGITS)}")
    return EXIT_OK


def cmd_render(args) -> int:
    spec = parse_spec(_read_text(args.spec))
    patch = generate_patch(spec, args.reps)
    if args.format == "svg":
        if spec.dimension != 2:
            raise FormatError("svg output requires a planar (d = 2) framework")
        _write_output(render_svg(patch), args.output)
    else:
        _write_output(render_segments(patch), args.output)
    return EXIT_OK


def cmd_probe_topology(args) -> int:
    try:
        s = tuple(float(x) for x in args.s.split(","))
    except ValueError as exc:
        raise ParseError(f"--s expects comma-separated numbers, got {args.s!r}") from exc
    if len(s) != 3 or any(x <= 0 for x in s):
        raise ParseError(f"--s expects three positive numbers, got {args.s!r}")
    report = topology_probe(s, grid=args.grid)
    payload = {
        "squared_lengths": sorted(s),
        "grid": report.grid,
        "component_count": report.component_count,
        "euler_characteristics": list(report.euler_characteristics),
        "cell_counts": list(report.cell_counts),
        "saddle_present": report.saddle_present,
    }
    _write_output(format_json(payload, REPORT_DIGITS) + "\n", args.output)
    if args.figure:
        from . import figures

        figures.save_topology_figure(s, report, args.figure)
    return EXIT_OK


def cmd_omega(args) -> int:
    if args.direction == "to":
        spec = parse_spec(_read_text(args.spec))
        payload = {
            "dimension": spec.dimension,
            "squared_lengths": spec.squared_lengths.tolist(),
            "omega": omega_of(spec).tolist(),
        }
        _write_output(format_json(payload, PERSIST_DIGITS) + "\n", args.output)
        return EXIT_OK

    raw = _load_omega_document(_read_text(args.spec))
    spec = realize_from_omega(raw["omega"], raw["squared_lengths"])
    _write_output(serialize_spec(spec) + "\n", args.output)
    return EXIT_OK


def _load_omega_document(text: str) -> dict:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("document root must be an object")
    unknown = set(raw) - _OMEGA_FIELDS
    if unknown:
        raise ParseError("unknown field", field=sorted(unknown)[0])
    dim = raw.get("dimension")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 2:
        raise ParseError("must be an integer >= 2", field="dimension")
    omega = raw.get("omega")
    if (
        not isinstance(omega, list)
        or len(omega) != dim
        or any(not isinstance(row, list) or len(row) != dim for row in omega)
    ):
        raise ParseError(f"must be a {dim}x{dim} matrix", field="omega")
    s = raw.get("squared_lengths")
    if not isinstance(s, list) or len(s) != dim + 1:
        raise ParseError(f"must be a list of {dim + 1} numbers", field="squared_lengths")
    return {"omega": np.asarray(omega, dtype=float), "squared_lengths": np.asarray(s, dtype=float)}


def _parse_policy(text: str, dimension: int):
    if text == "max-margin":
        return "max-margin", None
    if text.startswith("strain:"):
        try:
            entries = [float(x) for x in text[len("strain:") :].split(",")]
        except ValueError as exc:
            raise ParseError(f"strain policy expects comma-separated numbers, got {text!r}") from exc
        want = dimension * (dimension + 1) // 2
        if len(entries) != want:
            raise ParseError(
                f"strain policy expects {want} upper-triangle entries for d={dimension}, got {len(entries)}"
            )
        target = np.zeros((dimension, dimension))
        pos = 0
        for i in range(dimension):
            for j in range(i, dimension):
                target[i, j] = target[j, i] = entries[pos]
                pos += 1
        return "strain", target
    raise ParseError(f"unknown policy {text!r}; use max-margin or strain:<entries>")


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diamantine",
        description="Deformation geometry of diamond-type periodic frameworks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="volume critical points and auxetic capability report")
    p.add_argument("spec", help="path to a spec document (JSON)")
    p.add_argument("-o", "--output", default=None, help="write the report here instead of stdout")
    p.add_argument("--figure", default=None, help="also save a summary figure (png/pdf/svg)")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("trace", help="trace an auxetic deformation path")
    p.add_argument("spec")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--step-size", type=float, required=True)
    p.add_argument("--policy", default="max-margin", help="max-margin or strain:<upper-triangle entries>")
    p.add_argument("-o", "--output", required=True, help="trajectory CSV path")
    p.add_argument("--figure", default=None, help="also save volume/cone-margin plots")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("render", help="export a periodic patch as geometry")
    p.add_argument("spec")
    p.add_argument("--reps", type=int, required=True, help="repetitions per lattice axis")
    p.add_argument("--format", choices=("svg", "segments"), required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("probe-topology", help="sample the planar deformation surface")
    p.add_argument("--s", required=True, help="comma-separated squared lengths A,B,C")
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--figure", default=None, help="also save the sampled torus map")
    p.set_defaults(func=cmd_probe_topology)

    p = sub.add_parser("omega", help="convert between spec and lattice Gram documents")
    p.add_argument("direction", choices=("to", "from"))
    p.add_argument("spec", help="spec document (to) or omega document (from)")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_omega)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (RealizationError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (
        InputError,
        DegenerateCellError,
        IncapableError,
        ConeViolationError,
        OffHypersurfaceError,
        DiamantineError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
