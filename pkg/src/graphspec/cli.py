"""Command-line entry point.

Exit codes: 0 success, 1 a closed form that must hold failed its oracle,
2 argument errors, 3 domain errors (disconnected input, isolated vertex,
parameter out of range, order above ``--max-order``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any

from . import graph_core as gc
from .errors import GraphSpecError, NoConvergence, OrderTooLarge
from .graph_ops import Op, OperationKind, apply, expected_counts, printed_edge_count
from .invariants import (
    Mode,
    VerifyOptions,
    are_equienergetic,
    invariant_report,
    verify_all,
)
from .linalg import DEFAULT_GROUP_TOL, DEFAULT_SOLVER_TOL
from .spectral import MatrixKind, spectrum

COMMANDS = ("build", "op", "spectrum", "invariants", "verify", "catalog")
FAMILIES = ("duplicate-vs-shadow", "h3-integral")


@dataclass
class Tolerances:
    solver: float = DEFAULT_SOLVER_TOL
    grouping: float = DEFAULT_GROUP_TOL
    match: float = 1e-7

    def validate(self) -> None:
        if min(self.solver, self.grouping, self.match) <= 0:
            raise ValueError("tolerances must be positive")
        if not (self.solver < self.grouping <= self.match):
            raise ValueError("tolerances must satisfy solver < grouping <= match")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    generator: str | None = None
    op_spec: OperationKind | None = None
    output_format: str = "json"
    tolerances: Tolerances = field(default_factory=Tolerances)
    max_order: int = 4096


# Mini-languages


def parse_generator(spec: str) -> gc.Graph:
    name, _, arg = spec.strip().lower().partition(":")
    if name == "petersen" and not arg:
        return gc.petersen()
    makers = {"k": gc.complete, "complete": gc.complete, "cycle": gc.cycle, "c": gc.cycle,
              "star": gc.star, "path": gc.path, "p": gc.path}
    if name not in makers or not arg.isdigit():
        raise argparse.ArgumentTypeError(f"bad generator spec {spec!r}")
    return makers[name](int(arg))


def parse_op(spec: str) -> OperationKind:
    parts = spec.strip().lower().split(":")
    aliases = {"splitting": Op.SPLITTING, "shadow": Op.SHADOW, "dup": Op.DUPLICATE_ITER,
               "duplicate": Op.DUPLICATE_ITER, "h1": Op.H1, "h2": Op.H2, "h3": Op.H3}
    if parts[0] not in aliases or len(parts) < 2 or not all(x.isdigit() for x in parts[1:]):
        raise argparse.ArgumentTypeError(f"bad operation spec {spec!r}")
    tag = aliases[parts[0]]
    nums = [int(x) for x in parts[1:]]
    if tag is Op.H1 and len(nums) == 3:
        return OperationKind(tag, nums[0], (nums[1], nums[2]))
    if len(nums) != 1:
        raise argparse.ArgumentTypeError(f"bad operation spec {spec!r}")
    return OperationKind(tag, nums[0])


def _op_syntax(spec: str) -> str:
    # Syntax only; an out-of-range m is a domain error reported after parsing.
    try:
        parse_op(spec)
    except GraphSpecError:
        pass
    return spec.strip()


def _ops_syntax(spec: str) -> list[str]:
    return [_op_syntax(s) for s in spec.split(",") if s.strip()]


# Output


def _num(x: float | None) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.12g}")


def _clean(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _num(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return _clean(float(obj))


def dump_json(obj: Any) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def dump_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else v for v in _clean(row)])
    return buf.getvalue()


def _spectrum_rows(spec) -> list[dict]:
    return [{"value": v, "multiplicity": k} for v, k in spec.groups]


# Commands


def _load(cfg: RunConfig) -> gc.Graph:
    g = gc.load_graph(cfg.input) if cfg.input else parse_generator(cfg.generator)
    _check_order(g.p, cfg)
    return g


def _check_order(n: int, cfg: RunConfig) -> None:
    if n > cfg.max_order:
        raise OrderTooLarge(f"order {n} exceeds --max-order {cfg.max_order}")


def _render_graph(g: gc.Graph, fmt: str, extra: dict | None = None) -> str:
    if fmt == "json":
        payload = {"graph": gc.graph_to_dict(g)}
        if extra:
            payload.update(extra)
        return dump_json(payload)
    if fmt == "csv":
        return dump_csv(["u", "v"], [list(e) for e in g.edges])
    head = "".join(f"# {k}: {v}\n" for k, v in (extra or {}).items())
    return head + gc.format_edge_list(g)


def cmd_build(cfg: RunConfig, args) -> tuple[str, int]:
    return _render_graph(_load(cfg), cfg.output_format), 0


def cmd_op(cfg: RunConfig, args) -> tuple[str, int]:
    g = _load(cfg)
    op = cfg.op_spec
    p2, q2 = expected_counts(g.p, g.q, op)
    _check_order(p2, cfg)
    built = apply(g, op)
    contract = {
        "operation": str(op),
        "vertices": built.p,
        "edges": built.q,
        "expected_vertices": p2,
        "expected_edges": q2,
        "printed_edges": printed_edge_count(g.q, op),
        "contract_ok": (built.p, built.q) == (p2, q2),
    }
    return _render_graph(built, cfg.output_format, {"contract": contract}), 0


def cmd_spectrum(cfg: RunConfig, args) -> tuple[str, int]:
    g = _load(cfg)
    kind = MatrixKind(args.matrix)
    tol = cfg.tolerances
    spec = spectrum(g, kind, tol.solver, tol.grouping)
    energy = spec.energy()
    if cfg.output_format == "json":
        return dump_json({"matrix": kind.value, "order": spec.order,
                          "spectrum": _spectrum_rows(spec), "energy": energy}), 0
    if cfg.output_format == "csv":
        return dump_csv(["value", "multiplicity"], [[v, k] for v, k in spec.groups]), 0
    lines = [f"{kind.value} spectrum (order {spec.order}):"]
    lines += [f"  {_num(v)!s:>16}  x{k}" for v, k in spec.groups]
    lines.append(f"energy: {_num(energy)}")
    return "\n".join(lines) + "\n", 0


def cmd_invariants(cfg: RunConfig, args) -> tuple[str, int]:
    report = invariant_report(_load(cfg)).as_dict()
    if cfg.output_format == "json":
        return dump_json(report), 0
    if cfg.output_format == "csv":
        return dump_csv(["key", "value"], [[k, report[k]] for k in sorted(report)]), 0
    return "".join(f"{k}: {_clean(report[k])}\n" for k in sorted(report)), 0


def cmd_verify(cfg: RunConfig, args) -> tuple[str, int]:
    g = _load(cfg)
    ops = args.ops
    for op in ops:
        _check_order(expected_counts(g.p, g.q, op)[0], cfg)
    modes = {"both": (Mode.AS_PRINTED, Mode.CORRECTED), "as_printed": (Mode.AS_PRINTED,),
             "corrected": (Mode.CORRECTED,)}[args.mode]
    tol = cfg.tolerances
    opts = VerifyOptions(modes=modes, solver_tol=tol.solver, group_tol=tol.grouping, match_tol=tol.match)
    records = verify_all(g, ops, opts)
    fatal = any(r.verdict != "MATCH" and not r.formula_id.endswith(Mode.AS_PRINTED.value) for r in records)
    code = 1 if fatal else 0
    counts = []
    for op in ops:
        p2, q2 = expected_counts(g.p, g.q, op)
        counts.append({"operation": str(op), "vertices": p2, "edges": q2,
                       "printed_edges": printed_edge_count(g.q, op)})
    cols = ["formula_id", "closed_form", "oracle", "abs_diff", "verdict", "note"]
    if cfg.output_format == "json":
        return dump_json({
            "graph": gc.graph_to_dict(g),
            "records": [r.as_dict() for r in records],
            "skipped": [{"formula_id": s.formula_id, "reason": s.reason} for s in opts.skipped],
            "counts": counts,
        }), code
    if cfg.output_format == "csv":
        return dump_csv(cols, [[getattr(r, c) for c in cols] for r in records]), code
    lines = [f"{r.verdict:<9} {r.formula_id:<36} closed={_num(r.closed_form)} "
             f"oracle={_num(r.oracle)} diff={_num(r.abs_diff)}" + (f"  [{r.note}]" if r.note else "")
             for r in records]
    lines += [f"SKIPPED   {s.formula_id:<36} {s.reason}" for s in opts.skipped]
    n_bad = sum(r.verdict != "MATCH" for r in records)
    lines.append(f"{len(records)} records, {n_bad} mismatches")
    return "\n".join(lines) + "\n", code


def _energies(g: gc.Graph, tol: Tolerances) -> dict:
    return {
        "order": g.p,
        "energy": spectrum(g, MatrixKind.ADJACENCY, tol.solver, tol.grouping).energy(),
        "randic_energy": spectrum(g, MatrixKind.RANDIC, tol.solver, tol.grouping).energy(),
    }


def cmd_catalog(cfg: RunConfig, args) -> tuple[str, int]:
    g = _load(cfg)
    tol = cfg.tolerances
    rows: list[dict] = []
    hits: list[dict] = []
    if args.family == "duplicate-vs-shadow":
        for m in range(1, args.max_m + 1):
            _check_order(2**m * g.p, cfg)
            dup = apply(g, OperationKind(Op.DUPLICATE_ITER, m))
            sh = apply(g, OperationKind(Op.SHADOW, 2**m))
            adj = are_equienergetic(dup, sh, MatrixKind.ADJACENCY)
            ran = are_equienergetic(dup, sh, MatrixKind.RANDIC)
            rows.append({
                "m": m,
                "first": f"dup:{m}",
                "second": f"shadow:{2**m}",
                "first_energies": _energies(dup, tol),
                "second_energies": _energies(sh, tol),
                "equienergetic": adj.equienergetic,
                "randic_equienergetic": ran.equienergetic,
                "isomorphism_checked": False,
            })
        for m in range(2, args.max_m + 1):
            _check_order(m * g.p, cfg)
            sh = apply(g, OperationKind(Op.SHADOW, m))
            spec = spectrum(sh, MatrixKind.RANDIC, tol.solver, tol.grouping)
            hits.append({"graph": f"shadow:{m}", "randic_integral": spec.is_integral(),
                         "randic_spectrum": _spectrum_rows(spec)})
    else:
        for m in range(2, args.max_m + 1):
            _check_order(m * g.p, cfg)
            h = apply(g, OperationKind(Op.H3, m))
            spec = spectrum(h, MatrixKind.ADJACENCY, tol.solver, tol.grouping)
            root = math.isqrt(4 * m - 3)
            hits.append({"graph": f"h3:{m}", "integral": spec.is_integral(),
                         "perfect_square_4m_minus_3": root * root == 4 * m - 3,
                         "spectrum": _spectrum_rows(spec)})
    payload = {"family": args.family, "base": gc.graph_to_dict(g), "pairs": rows, "integral_hits": hits}
    if cfg.output_format == "json":
        return dump_json(payload), 0
    if cfg.output_format == "csv":
        if rows:
            return dump_csv(
                ["m", "first", "second", "energy_first", "energy_second", "randic_first",
                 "randic_second", "equienergetic", "randic_equienergetic"],
                [[r["m"], r["first"], r["second"], r["first_energies"]["energy"],
                  r["second_energies"]["energy"], r["first_energies"]["randic_energy"],
                  r["second_energies"]["randic_energy"], r["equienergetic"], r["randic_equienergetic"]]
                 for r in rows]), 0
        return dump_csv(["graph", "integral"], [[h["graph"], h["integral"]] for h in hits]), 0
    lines = []
    for r in rows:
        lines.append(
            f"{r['first']} vs {r['second']}: energy {_num(r['first_energies']['energy'])} / "
            f"{_num(r['second_energies']['energy'])}, randic {_num(r['first_energies']['randic_energy'])} / "
            f"{_num(r['second_energies']['randic_energy'])}, equienergetic={r['equienergetic']}, "
            f"randic_equienergetic={r['randic_equienergetic']}")
    for h in hits:
        flag = h.get("randic_integral", h.get("integral"))
        lines.append(f"{h['graph']}: integral={flag}")
    return "\n".join(lines) + "\n", 0


HANDLERS = {
    "build": cmd_build,
    "op": cmd_op,
    "spectrum": cmd_spectrum,
    "invariants": cmd_invariants,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--in", dest="input", help="graph file (edge list or JSON)")
    src.add_argument("--gen", help="generator: k:n, cycle:n, star:n, path:n, petersen")
    common.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default="json")
    common.add_argument("--solver-tol", type=float, default=DEFAULT_SOLVER_TOL)
    common.add_argument("--group-tol", type=float, default=DEFAULT_GROUP_TOL)
    common.add_argument("--match-tol", type=float, default=1e-7)
    common.add_argument("--max-order", type=int, default=4096, help="largest matrix order to eigensolve")
    common.add_argument("-o", "--output", help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="graphspec", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="emit a generated or loaded graph")
    p_op = sub.add_parser("op", parents=[common], help="apply one operation")
    p_op.add_argument("--apply", required=True, type=_op_syntax,
                      help="splitting:m, shadow:m, dup:m, h1:m[:i:j], h2:m, h3:m")
    p_sp = sub.add_parser("spectrum", parents=[common], help="grouped spectrum and energy")
    p_sp.add_argument("--matrix", choices=[k.value for k in MatrixKind], default="adjacency")
    sub.add_parser("invariants", parents=[common], help="energies, K, Kf*, t, integrality")
    p_ver = sub.add_parser("verify", parents=[common], help="closed forms vs numeric oracle")
    p_ver.add_argument("--ops", required=True, type=_ops_syntax, help="comma-separated operation specs")
    p_ver.add_argument("--mode", choices=("as_printed", "corrected", "both"), default="both")
    p_cat = sub.add_parser("catalog", parents=[common], help="equienergetic / integral families")
    p_cat.add_argument("--family", choices=FAMILIES, default="duplicate-vs-shadow")
    p_cat.add_argument("--base", dest="base", help="generator spec of the base graph (alias of --gen)")
    p_cat.add_argument("--max-m", type=int, default=3)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "catalog" and args.base:
        if args.gen or args.input:
            parser.error("give the base graph once")
        args.gen = args.base
    if not (args.input or args.gen):
        parser.error("an input graph is required (--in or --gen)")
    if args.command == "catalog" and args.max_m < 1:
        parser.error("--max-m must be at least 1")
    tol = Tolerances(args.solver_tol, args.group_tol, args.match_tol)
    try:
        tol.validate()
    except ValueError as exc:
        parser.error(str(exc))
    if args.gen:
        try:
            parse_generator(args.gen)
        except (argparse.ArgumentTypeError, GraphSpecError) as exc:
            parser.error(str(exc))
    try:
        op_spec = parse_op(args.apply) if args.command == "op" else None
        if args.command == "verify":
            args.ops = [parse_op(s) for s in args.ops]
    except GraphSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    cfg = RunConfig(
        command=args.command,
        input=args.input,
        generator=args.gen,
        op_spec=op_spec,
        output_format=args.output_format,
        tolerances=tol,
        max_order=args.max_order,
    )
    try:
        text, code = HANDLERS[args.command](cfg, args)
    except (GraphSpecError, NoConvergence, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
