"""spi: build and check symplectic inner product graphs.

    spi build   --p 2 --e 1 --nu 2
    spi analyze --p 3 --nu 2
    spi orbits  --p 2 --nu 2 --edges
    spi aut     --p 3 --nu 2
    spi witness --p 2 --nu 2 --from 1,0,0,0 --to 0,0,0,1
    spi export  --p 2 --nu 2 --format dot

Exit status is 0 when every check in the report passes (checks listed under
"reported_only" never fail a run), 1 when a check fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analysis, autsearch, groups
from .gf import FieldError, make_field
from .graph import (
    CacheError,
    GraphSizeError,
    SpiGraph,
    build_graph,
    cache_path,
    load_graph,
    save_graph,
    to_dot,
)
from .linalg import format_rows, parse_subspace
from .symplectic import SympSpace, TypeMismatch, act_matrix, transitivity_witness, type_of

log = logging.getLogger("spi")


@dataclass
class RunConfig:
    p: int
    e: int
    nu: int
    command: str
    cache_dir: Path | None
    fmt: str = "json"
    threads: int = 1


def _default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


def get_graph(cfg: RunConfig) -> SpiGraph:
    sp = SympSpace(cfg.nu, make_field(cfg.p, cfg.e))
    if cfg.cache_dir is None:
        return build_graph(sp)
    path = cache_path(cfg.cache_dir, cfg.p, cfg.e, cfg.nu)
    if path.exists():
        try:
            G = load_graph(path)
            log.info("loaded %s", path)
            return G
        except CacheError as exc:
            log.warning("%s; rebuilding", exc)
    G = build_graph(sp)
    save_graph(G, path)
    log.info("cached %s", path)
    return G


def cmd_build(cfg: RunConfig) -> tuple[dict, bool]:
    G = get_graph(cfg)
    report = {"params": {"p": cfg.p, "e": cfg.e, "q": G.q, "nu": cfg.nu},
              "vertex_count": G.n, "edge_count": G.edge_count(), "loop_count": G.loop_count()}
    if cfg.cache_dir is not None:
        report["cache_file"] = str(cache_path(cfg.cache_dir, cfg.p, cfg.e, cfg.nu))
    return report, True


def cmd_analyze(cfg: RunConfig) -> tuple[dict, bool]:
    report = analysis.analysis_report(get_graph(cfg), threads=cfg.threads)
    return report, report["all_pass"]


def _type_key(t) -> str:
    return f"({t.m},{t.s})"


def orbit_report(G: SpiGraph, edges: bool = False) -> dict:
    t_perms = groups.transvection_perms(G)
    e_perms = groups.descriptor_perms(G)
    vpart = groups.vertex_orbits(t_perms, G.n)
    vpart_e = groups.vertex_orbits(t_perms + e_perms, G.n)
    type_part = groups.partition_by_key(G.types)
    report = {
        "params": {"p": G.space.spec.p, "e": G.space.spec.e, "q": G.q, "nu": G.nu},
        "generators": {"transvections": len(t_perms), "descriptors": len(e_perms)},
        "vertex_orbits": [
            {"representative": format_rows(G.vertices[rep].basis), "size": len(cls),
             "invariant": _type_key(G.types[rep])}
            for rep, cls in zip(vpart.reps, vpart.classes())
        ],
    }
    checks = {
        "vertex_orbits_equal_types": vpart.as_sets() == type_part,
        "descriptors_leave_vertex_orbits": vpart_e.as_sets() == vpart.as_sets(),
    }
    if edges:
        elist, epart = groups.edge_orbits(G, t_perms)
        _, epart_e = groups.edge_orbits(G, t_perms + e_perms)
        triples = [groups.edge_triple(G, u, v) for u, v in elist]
        report["edge_count"] = len(elist)
        report["edge_orbits"] = [
            {"representative": [format_rows(G.vertices[u].basis) for u in elist[rep]],
             "size": len(cls), "invariant": [list(map(list, triples[rep][0])), list(triples[rep][1])]}
            for rep, cls in zip(epart.reps, epart.classes())
        ]
        checks["edge_orbits_equal_type_triples"] = epart.as_sets() == groups.partition_by_key(triples)
        checks["descriptors_leave_edge_orbits"] = epart_e.as_sets() == epart.as_sets()
    report["checks"] = checks
    report["all_pass"] = all(checks.values())
    return report


def cmd_orbits(cfg: RunConfig, edges: bool = False) -> tuple[dict, bool]:
    report = orbit_report(get_graph(cfg), edges=edges)
    return report, report["all_pass"]


def cmd_aut(cfg: RunConfig) -> tuple[dict, bool]:
    G = get_graph(cfg)
    report = autsearch.verify_factorization(G)
    comp = report["comparisons"]
    ok = all(v for k, v in comp["match_flags"].items() if k not in comp["reported_only"])
    return report, ok


def cmd_witness(cfg: RunConfig, src: str, dst: str) -> tuple[dict, bool]:
    sp = SympSpace(cfg.nu, make_field(cfg.p, cfg.e))
    A = parse_subspace(sp.spec, src, sp.dim)
    B = parse_subspace(sp.spec, dst, sp.dim)
    for X, text in ((A, src), (B, dst)):
        if X.dim == 0 or X.dim == sp.dim:
            raise ValueError(f"{text!r} is not a nontrivial subspace")
    T = transitivity_witness(sp, A, B)
    ok = act_matrix(sp, T, A) == B
    report = {"from": format_rows(A.basis), "to": format_rows(B.basis),
              "type": _type_key(type_of(sp, A)), "T": format_rows(T.rows),
              "certified": T.certified, "verified": ok}
    return report, ok and T.certified


def cmd_export(cfg: RunConfig) -> str:
    return to_dot(get_graph(cfg))


def _text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k, v in report.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_text(v, indent + 1))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for item in v:
                lines.append(pad + "  - " + ", ".join(f"{a}={b}" for a, b in item.items()))
        elif isinstance(v, list) and len(v) > 12:
            lines.append(f"{pad}{k}: [{len(v)} items]")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, required=True, help="field characteristic")
    common.add_argument("--e", type=int, default=1, help="extension degree (q = p^e)")
    common.add_argument("--nu", type=int, required=True, help="half the ambient dimension")
    common.add_argument("--cache-dir", default=None,
                        help="graph cache directory (SPI_CACHE_DIR overrides)")
    common.add_argument("--format", dest="fmt", choices=["json", "dot", "text"], default=None)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads for breadth-first search (default: all cores)")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="spi", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="build and cache the graph")
    sub.add_parser("analyze", parents=[common], help="connectivity, diameter, census, signature")
    o = sub.add_parser("orbits", parents=[common], help="vertex/edge orbits under Sp")
    o.add_argument("--edges", action="store_true", help="also compute edge orbits")
    sub.add_parser("aut", parents=[common], help="automorphism group and factorization check")
    w = sub.add_parser("witness", parents=[common], help="symplectic T with A T = B")
    w.add_argument("--from", dest="src", required=True, help='subspace text, e.g. "1,0,0,0"')
    w.add_argument("--to", dest="dst", required=True)
    x = sub.add_parser("export", parents=[common], help="DOT export")
    x.add_argument("--output", default=None, help="write to this file instead of stdout")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    cache_dir = os.environ.get("SPI_CACHE_DIR") or args.cache_dir
    cfg = RunConfig(args.p, args.e, args.nu, args.command,
                    Path(cache_dir) if cache_dir else None,
                    args.fmt or ("dot" if args.command == "export" else "json"),
                    args.threads or _default_threads())
    try:
        if cfg.nu < 1:
            raise ValueError("--nu must be at least 1")
        make_field(cfg.p, cfg.e)
        if args.command == "export":
            if cfg.fmt != "dot":
                raise ValueError("export only supports --format dot")
            dot = cmd_export(cfg)
            if args.output:
                Path(args.output).write_text(dot)
            else:
                sys.stdout.write(dot)
            return 0
        if args.command == "build":
            report, ok = cmd_build(cfg)
        elif args.command == "analyze":
            report, ok = cmd_analyze(cfg)
        elif args.command == "orbits":
            report, ok = cmd_orbits(cfg, edges=args.edges)
        elif args.command == "aut":
            report, ok = cmd_aut(cfg)
        else:
            report, ok = cmd_witness(cfg, args.src, args.dst)
    except (FieldError, GraphSizeError, TypeMismatch, ValueError, OSError,
            autsearch.SearchBoundExceeded) as exc:
        print(f"spi: error: {exc}", file=sys.stderr)
        return 2

    if cfg.fmt == "text":
        print(_text(report))
    elif cfg.fmt == "json":
        print(json.dumps(report, indent=2))
    else:
        print("spi: error: --format dot is only available for export", file=sys.stderr)
        return 2
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
