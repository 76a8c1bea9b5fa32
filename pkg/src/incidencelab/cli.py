"""Command-line front end: generate, verify, transform, analyze, export.

Every artifact file is written with deterministic bytes (sorted keys,
fixed separators) and accompanied by a ``<file>.manifest.json`` carrying
the command line, seeds, library version, input/output SHA-256 hashes,
and wall timings, so identical manifests imply identical artifact bytes.

Exit codes: 0 = all requested checks pass, 1 = a check failed (witnesses
in the JSON verdict), 2 = usage or I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__, analysis, configs, constructions, gridmodel, render
from .configs import ColoredLineConfig, DualPointConfig, embed_grid_config
from .constructions import AlgebraicParams, ProbParams
from .exactgeom import parse_rational
from .gridmodel import ColoredGridConfig
from .structure import extract_structure, structure_consistency
from .transforms import dualize, extract_planarity, lift_to_concurrent, project_generic, undualize


def _dump_json(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


class _Run:
    """Collects inputs/outputs/seeds and writes one manifest per artifact."""

    def __init__(self, argv: list[str]):
        self.argv = argv
        self.t0 = time.time()
        self.inputs: dict[str, str] = {}
        self.seeds: dict[str, int] = {}

    def read_config(self, path: str):
        p = Path(path)
        try:
            data = json.loads(p.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SystemExit2(f"cannot read configuration {path}: {exc}")
        self.inputs[str(p)] = _sha256(p)
        try:
            return configs.config_from_json(data)
        except (KeyError, ValueError, TypeError) as exc:
            raise SystemExit2(f"malformed configuration {path}: {exc}")

    def write_artifact(self, path: str, text: str) -> None:
        p = Path(path)
        p.write_text(text)
        manifest = {
            "command": self.argv,
            "version": __version__,
            "seeds": self.seeds,
            "inputs": self.inputs,
            "outputs": {str(p): _sha256(p)},
            "timings": {"wall_s": round(time.time() - self.t0, 3)},
        }
        Path(str(p) + ".manifest.json").write_text(_dump_json(manifest))


class SystemExit2(Exception):
    """Usage or I/O error: exit code 2."""


def _parse_steps(text: str) -> list[Fraction]:
    return [parse_rational(t) for t in text.replace(",", " ").split()]


def cmd_gen(args, run: _Run) -> int:
    sub = args.construction
    report = None
    if sub == "algebraic":
        params = AlgebraicParams(args.k, args.p)
        cfg = constructions.gen_algebraic(params)
    elif sub == "probabilistic":
        p_sel = Fraction(args.p_sel) if args.p_sel else None
        params = ProbParams(args.k, args.n, args.seed, p_sel)
        run.seeds["selection"] = args.seed
        before, after, rep = constructions.gen_probabilistic(params)
        cfg = before if args.emit == "before" else after
        report = {
            "p_sel": str(rep.p_sel),
            "selected_sizes": rep.selected_sizes,
            "final_sizes": rep.final_sizes,
            "deleted_sizes": rep.deleted_sizes,
            "covered_points": rep.covered_points,
        }
    elif sub == "tricolor":
        steps = _parse_steps(args.steps)
        if len(steps) % 3 != 0:
            raise SystemExit2("tricolor needs a multiple of 3 steps")
        cfg = constructions.gen_tricolor(len(steps) // 3, steps)
    elif sub == "reye":
        cfg = constructions.gen_reye()
    elif sub == "desargues":
        cfg = constructions.gen_desargues()
    elif sub == "dual-cycles":
        slopes = _parse_steps(args.slopes)
        starts = _parse_steps(args.starts) if args.starts else None
        if starts is None:
            cfg, rep = constructions.gen_dual_cycles(args.r, slopes)
        else:
            cfg, rep = constructions.gen_dual_cycles(args.r, slopes, starts)
        report = {
            "direction_triples_consistent": rep.triples_with_direction_color,
            "other_triple_consistent": rep.triple_other_colors,
            "other_triple_failures": [
                [list(ref), sorted(S)] for ref, S in rep.failures
            ],
        }
    elif sub == "two-slit":
        slits = (
            constructions.quadric_ruling_slits()
            if args.quadric
            else constructions.default_generic_slits()
        )
        run.seeds["sampling"] = args.seed
        lines = constructions.gen_two_slit(args.which, slits, args.count, args.seed)
        cfg = ColoredLineConfig(3, [lines])
    else:  # pragma: no cover - argparse restricts choices
        raise SystemExit2(f"unknown construction {sub}")
    run.write_artifact(args.output, _dump_json(configs.config_to_json(cfg)))
    if report is not None:
        print(_dump_json(report), end="")
    return 0


def _verify_checks(cfg, args) -> tuple[dict, bool]:
    checks: dict = {}
    ok = True
    s = None
    if args.k_consistency is not None or args.max_colorful is not None:
        s = extract_structure(cfg)
    if args.k_consistency is not None:
        k = args.k_consistency
        if isinstance(cfg, ColoredGridConfig):
            verdict = gridmodel.is_k_consistent(cfg, k)
        else:
            verdict = structure_consistency(s, k)
        checks["k_consistency"] = {
            "k": k,
            "pass": verdict.ok,
            "failures": [[list(ref), sorted(S)] for ref, S in verdict.failures[:50]],
        }
        ok &= verdict.ok
    if args.max_colorful is not None:
        if isinstance(cfg, ColoredGridConfig):
            order, witness = gridmodel.max_colorful_order(cfg)
            witness_repr = list(witness) if witness else None
        else:
            order, witness = s.max_colorful()
            witness_repr = repr(witness) if witness is not None else None
        passed = order <= args.max_colorful
        checks["max_colorful"] = {
            "bound": args.max_colorful,
            "value": order,
            "witness": witness_repr,
            "pass": passed,
        }
        ok &= passed
    if args.minimality:
        if not isinstance(cfg, ColoredGridConfig):
            raise SystemExit2("--minimality applies to grid configurations")
        if args.k_consistency is None:
            raise SystemExit2("--minimality needs --k-consistency K")
        verdict = analysis.minimality_audit(cfg, args.k_consistency)
        checks["minimality"] = {
            "pass": verdict.minimal,
            "removable": [list(r) for r in verdict.removable[:50]],
        }
        ok &= verdict.minimal
    if args.flatness is not None:
        line_cfg = embed_grid_config(cfg) if isinstance(cfg, ColoredGridConfig) else cfg
        if not isinstance(line_cfg, ColoredLineConfig):
            raise SystemExit2("--flatness applies to line configurations")
        records = analysis.flatness_audit(line_cfg, args.flatness)
        flats = [r for r in records if r.flat]
        checks["flatness"] = {
            "t": args.flatness,
            "audited": len(records),
            "flat_incidences": len(flats),
            "pass": not flats,
        }
        ok &= not flats
    if args.planarity is not None:
        line_cfg = embed_grid_config(cfg) if isinstance(cfg, ColoredGridConfig) else cfg
        if not isinstance(line_cfg, ColoredLineConfig):
            raise SystemExit2("--planarity applies to line configurations")
        planar, dim = extract_planarity(line_cfg)
        expected = args.planarity == "planar"
        checks["planarity"] = {
            "expected": args.planarity,
            "planar": planar,
            "span_dim": dim,
            "pass": planar == expected,
        }
        ok &= planar == expected
    return checks, ok


def cmd_verify(args, run: _Run) -> int:
    cfg = run.read_config(args.config)
    checks, ok = _verify_checks(cfg, args)
    verdict = {"config": args.config, "pass": ok, "checks": checks}
    print(_dump_json(verdict), end="")
    return 0 if ok else 1


def cmd_transform(args, run: _Run) -> int:
    cfg = run.read_config(args.config)
    if args.lift:
        if not isinstance(cfg, ColoredGridConfig):
            raise SystemExit2("--lift applies to grid configurations")
        cfg = lift_to_concurrent(cfg, audit=not args.no_audit)
    if args.project is not None:
        if isinstance(cfg, ColoredGridConfig):
            cfg = embed_grid_config(cfg)
        run.seeds["projection"] = args.seed
        result = project_generic(cfg, args.project, args.seed)
        cfg = result.config
        if result.new_crossings:
            print(f"note: {len(result.new_crossings)} new planar crossings recorded", file=sys.stderr)
    if args.dualize:
        if not isinstance(cfg, ColoredLineConfig) or cfg.d != 2:
            raise SystemExit2("--dualize needs a planar line configuration")
        cfg = dualize(cfg)
    if args.undualize:
        if not isinstance(cfg, DualPointConfig):
            raise SystemExit2("--undualize needs a dual point configuration")
        cfg = undualize(cfg)
    run.write_artifact(args.output, _dump_json(configs.config_to_json(cfg)))
    return 0


def cmd_analyze(args, run: _Run) -> int:
    out: dict = {}
    ok = True
    if args.monte_carlo:
        ns = [int(t) for t in args.n.replace(",", " ").split()]
        run.seeds["master"] = args.seed
        grid = [ProbParams(args.k, n, args.seed) for n in ns]
        report = analysis.monte_carlo(grid, args.trials)
        if args.output:
            run.write_artifact(args.output, report.to_csv())
        out["monte_carlo"] = [
            {
                "k": s.k,
                "n": s.n,
                "trials": s.trials,
                "consistency_rate": s.consistency_rate,
                "colorful_within_k_rate": s.colorful_within_k_rate,
                "size_quartiles": list(s.size_quartiles),
                "window_rate": s.window_rate,
                "mean_bad_lines": s.mean_bad_lines,
            }
            for s in report.summaries
        ]
        print(_dump_json(out), end="")
        return 0
    cfg = run.read_config(args.config)
    s = extract_structure(cfg)
    if args.structure:
        out["structure"] = {
            "monomials": sorted(analysis.monomial_name(m) for m in s.monomials),
            "colorful_triples": sorted(
                analysis.monomial_name(m) for m in s.colorful_triples()
            ),
            "class_sizes": list(s.class_sizes),
        }
    if args.match_structure:
        iso = analysis.match_structure(s, args.match_structure)
        out["match_structure"] = {
            "target": args.match_structure,
            "found": iso is not None,
            "color_map": list(iso.color_map) if iso else None,
            "index_maps": [list(m) for m in iso.index_maps] if iso else None,
        }
        ok &= iso is not None
    if args.joint_bound is not None:
        rep = analysis.joint_bound(cfg, args.joint_bound)
        note = None
        if isinstance(cfg, ColoredLineConfig) and cfg.d != args.joint_bound:
            note = f"bound stated in R^k with k={args.joint_bound}; config has d={cfg.d}"
        out["joint_bound"] = {
            "m": rep.m,
            "k": rep.k,
            "total_lines": rep.total_lines,
            "bound": str(rep.bound),
            "satisfied": rep.satisfied,
            "note": note,
        }
        ok &= rep.satisfied
    if args.flatness is not None:
        line_cfg = embed_grid_config(cfg) if isinstance(cfg, ColoredGridConfig) else cfg
        records = analysis.flatness_audit(line_cfg, args.flatness)
        out["flatness"] = {
            "t": args.flatness,
            "audited": len(records),
            "flat_incidences": sum(1 for r in records if r.flat),
        }
    if args.determinant_check:
        monos = analysis.determinant_monomials()
        out["determinant_monomials"] = sorted(analysis.monomial_name(m) for m in monos)
    print(_dump_json(out), end="")
    return 0 if ok else 1


def cmd_export(args, run: _Run) -> int:
    cfg = run.read_config(args.config)
    if isinstance(cfg, ColoredGridConfig):
        cfg = embed_grid_config(cfg)
    if isinstance(cfg, ColoredLineConfig) and cfg.d > 2:
        run.seeds["projection"] = args.seed
        cfg = project_generic(cfg, 2, args.seed).config
    run.write_artifact(args.svg, render.render_svg(cfg))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ilab",
        description="construct, transform, and verify colored line configurations",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=int(os.environ.get("ILAB_THREADS", "1")),
        help="worker bound (results are identical for any value)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a configuration")
    gen_sub = gen.add_subparsers(dest="construction", required=True)

    g = gen_sub.add_parser("algebraic")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--p", type=int, required=True)
    g.add_argument("-o", "--output", default="algebraic.json")

    g = gen_sub.add_parser("probabilistic")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--p-sel", help="selection probability as num/den")
    g.add_argument("--emit", choices=["before", "after"], default="after")
    g.add_argument("-o", "--output", default="probabilistic.json")

    g = gen_sub.add_parser("tricolor")
    g.add_argument("--steps", required=True, help="3n signed step lengths")
    g.add_argument("-o", "--output", default="tricolor.json")

    g = gen_sub.add_parser("reye")
    g.add_argument("-o", "--output", default="reye.json")

    g = gen_sub.add_parser("desargues")
    g.add_argument("-o", "--output", default="desargues.json")

    g = gen_sub.add_parser("dual-cycles")
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--slopes", default="1 2 5")
    g.add_argument("--starts")
    g.add_argument("-o", "--output", default="dual_cycles.json")

    g = gen_sub.add_parser("two-slit")
    g.add_argument("--which", type=int, choices=[1, 2], default=1)
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--quadric", action="store_true", help="use quadric-ruling slits")
    g.add_argument("-o", "--output", default="two_slit.json")

    v = sub.add_parser("verify", help="run verifier checks against a configuration")
    v.add_argument("config")
    v.add_argument("--k-consistency", type=int)
    v.add_argument("--max-colorful", type=int)
    v.add_argument("--flatness", type=int)
    v.add_argument("--minimality", action="store_true")
    v.add_argument("--planarity", choices=["planar", "nonplanar"])

    t = sub.add_parser("transform", help="lift / project / dualize pipelines")
    t.add_argument("config")
    t.add_argument("--lift", action="store_true")
    t.add_argument("--project", type=int)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--dualize", action="store_true")
    t.add_argument("--undualize", action="store_true")
    t.add_argument("--no-audit", action="store_true")
    t.add_argument("-o", "--output", default="transformed.json")

    a = sub.add_parser("analyze", help="structure reports and experiments")
    a.add_argument("config", nargs="?")
    a.add_argument("--structure", action="store_true")
    a.add_argument("--match-structure", choices=["I", "II"])
    a.add_argument("--joint-bound", type=int)
    a.add_argument("--flatness", type=int)
    a.add_argument("--determinant-check", action="store_true")
    a.add_argument("--monte-carlo", action="store_true")
    a.add_argument("--k", type=int, default=3)
    a.add_argument("--n", default="32")
    a.add_argument("--seed", type=int, default=7)
    a.add_argument("--trials", type=int, default=100)
    a.add_argument("-o", "--output")

    e = sub.add_parser("export", help="render a configuration to SVG")
    e.add_argument("config")
    e.add_argument("--svg", required=True)
    e.add_argument("--seed", type=int, default=0)

    return parser


_COMMANDS = {
    "gen": cmd_gen,
    "verify": cmd_verify,
    "transform": cmd_transform,
    "analyze": cmd_analyze,
    "export": cmd_export,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "analyze" and not args.monte_carlo and not args.config:
        parser.error("analyze needs a configuration file (or --monte-carlo)")
    run = _Run(["ilab", *argv])
    try:
        return _COMMANDS[args.command](args, run)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
