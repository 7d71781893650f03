#!/usr/bin/env python3
"""
hyperroot command-line interface

Commands: classify, extend, mult, table, check, series, asympt,
verify-denominator, cache. Reports go to stdout (or --out), logs to stderr.

Exit codes: 0 ok, 1 unexpected failure, 2 bad input, 3 compute failure,
4 request outside the domain of the operation.
"""

import sys
import logging
import argparse
from typing import List, Optional

from asymptotics import estimate_p_sigma, estimate_partition, index_from_norm
from bounds import CSV_COLUMNS, bound_row, check_e10_series, check_ff_level2, check_frenkel
from cache import TableCache
from cartan import classify, classify_components, extend, is_indecomposable, overextend
from config import Config, config, get_logger, set_log_level
from exceptions import HyperrootError, IntegrityError
from multiplicity import MultTable, mult_berman_moody, mult_peterson, verify_denominator_identity
from presets import level_node, resolve_gcm
from qseries import build_series
from report_writer import render, write_report
from roots import format_root, height, level, norm, parse_root, require_positive, root_kind

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2


def _open_table(g, cfg: Config) -> MultTable:
    return MultTable(g, store=TableCache(cfg.cache_dir), threads=cfg.threads)


def _emit(cfg: Config, args, data, columns=None, rows=None, fields=None) -> None:
    text = render(cfg.output, data, columns=columns, rows=rows, fields=fields)
    if not write_report(text, getattr(args, "out", None)):
        raise OSError(f"Could not write report to {args.out}")


def _gcm_fields(g) -> dict:
    return {
        "name": g.name,
        "matrix": g.to_text(),
        "rank": g.n,
        "symmetrizable": g.symmetrizable,
        "d": ",".join(str(x) for x in g.d) if g.d else None,
    }


def cmd_classify(args, cfg: Config) -> int:
    g = resolve_gcm(args.matrix, args.preset)
    fields = _gcm_fields(g)
    if is_indecomposable(g):
        fields.update(classify(g).to_dict())
        _emit(cfg, args, fields)
        return EXIT_OK

    parts = classify_components(g)
    rows = [[",".join(str(i) for i in comp), *kind.to_dict().values()] for comp, kind in parts]
    columns = ["vertices", "kind", "hyperbolic", "compact_hyperbolic", "lorentzian", "det", "det_sign", "rank"]
    data = dict(fields, components=[{"vertices": list(comp), **kind.to_dict()} for comp, kind in parts])
    _emit(cfg, args, data, columns=columns, rows=rows, fields=fields)
    return EXIT_OK


def cmd_extend(args, cfg: Config) -> int:
    g = resolve_gcm(args.matrix, args.preset)
    if args.mode == "affinize":
        result = extend(g)
    elif args.mode == "overextend":
        result = overextend(g, zero_node=args.zero_node)
    else:
        if args.attach is None:
            raise ValueError("--attach is required with --mode attach")
        result = extend(g, attach=args.attach)
    data = {"input": g.to_text(), "mode": args.mode, "matrix": [list(row) for row in result.a], "text": result.to_text()}
    _emit(cfg, args, data, fields={"input": g.to_text(), "mode": args.mode, "result": result.to_text()})
    return EXIT_OK


def cmd_mult(args, cfg: Config) -> int:
    g = resolve_gcm(args.matrix, args.preset)
    alpha = require_positive(parse_root(args.root, g.n))
    data = {"alpha": format_root(alpha), "height": height(alpha), "kind": root_kind(g, alpha)}

    if args.engine in ("peterson", "both"):
        data["peterson"] = mult_peterson(g, alpha, _open_table(g, cfg))
    if args.engine in ("bm", "both"):
        data["berman_moody"] = mult_berman_moody(g, alpha)
    if g.symmetrizable:
        data["norm"] = norm(g, alpha)
    node = level_node(g)
    if node is not None:
        data["level"] = level(alpha, node)

    if args.engine == "both":
        data["match"] = data["peterson"] == data["berman_moody"]
        data["mult"] = data["peterson"]
    else:
        data["mult"] = data.get("peterson", data.get("berman_moody"))

    _emit(cfg, args, data)
    if args.engine == "both" and not data["match"]:
        raise IntegrityError(f"Engines disagree at {format_root(alpha)}: {data['peterson']} vs {data['berman_moody']}")
    return EXIT_OK


TABLE_COLUMNS = ["alpha", "height", "norm", "kind", "mult", "frenkel", "borcherds", "niemann"]


def cmd_table(args, cfg: Config) -> int:
    g = resolve_gcm(args.matrix, args.preset)
    limit = args.height or cfg.height_limit
    table = _open_table(g, cfg)
    table.extend_to(limit)

    rows = []
    records = []
    for alpha in table.roots(limit):
        row = bound_row(g, alpha, table.entries[alpha], args.d, cfg.truncation_order)
        kind = root_kind(g, alpha)
        rows.append([format_root(alpha), row.height, row.norm, kind, row.mult, row.frenkel, row.borcherds, row.niemann])
        records.append(dict(zip(TABLE_COLUMNS, rows[-1])))

    fields = dict(_gcm_fields(g), gcm_id=g.gcm_id, height=limit, roots=len(rows))
    _emit(cfg, args, dict(fields, rows=records), columns=TABLE_COLUMNS, rows=rows, fields=fields)
    return EXIT_OK


def _check_level2(args, cfg: Config) -> int:
    g = resolve_gcm(args.matrix, args.preset)
    limit = args.height or cfg.height_limit
    report = check_ff_level2(_open_table(g, cfg), limit, cfg.truncation_order)
    fields = {
        "gcm_id": report.gcm_id,
        "height_bound": report.height_bound,
        "heuristic": report.heuristic,
        "roots": report.roots,
        "mismatches": report.mismatches,
    }
    rows = [[format_root(row.alpha), row.norm, row.mult, row.series, row.match] for row in report.rows]
    _emit(cfg, args, report.model_dump(), columns=["alpha", "norm", "mult", "series", "match"], rows=rows, fields=fields)
    return EXIT_OK


def cmd_check(args, cfg: Config) -> int:
    if args.level2:
        return _check_level2(args, cfg)
    if args.series:
        report = check_e10_series(args.index, order=cfg.truncation_order)
    else:
        g = resolve_gcm(args.matrix, args.preset)
        limit = args.height or cfg.height_limit
        report = check_frenkel(g, args.d, limit, _open_table(g, cfg), cfg.truncation_order)

    fields = {
        "gcm_id": report.gcm_id,
        "d": report.d,
        "height_bound": report.height_bound,
        "roots": report.roots,
        "violations": report.violations,
        "saturations": report.saturations,
    }
    _emit(cfg, args, report.model_dump(), columns=CSV_COLUMNS, rows=[row.csv_row() for row in report.rows], fields=fields)
    return EXIT_OK


def cmd_series(args, cfg: Config) -> int:
    series = build_series(args.name, cfg.truncation_order, args.colors)
    name = f"p_{args.colors}" if args.name == "p_l" else args.name
    rows = [[n, c] for n, c in enumerate(series)]
    _emit(cfg, args, series.to_dict(name), columns=["n", "coeff"], rows=rows, fields={"name": name, "order": series.order})
    return EXIT_OK


def cmd_asympt(args, cfg: Config) -> int:
    if args.partition:
        if args.n is None:
            raise ValueError("--partition needs --n")
        estimate = estimate_partition(args.n, cfg.truncation_order)
        data = dict(estimate.to_dict(), sequence="p", index=args.n)
    else:
        n = args.n if args.n is not None else index_from_norm(args.norm)
        estimate = estimate_p_sigma(n, cfg.truncation_order)
        data = dict(estimate.to_dict(), sequence="p_sigma", index=n + 1)
    data["main_term"] = round(data["main_term"], 2)
    _emit(cfg, args, data)
    return EXIT_OK


def cmd_verify_denominator(args, cfg: Config) -> int:
    g = resolve_gcm(args.matrix, args.preset)
    limit = args.height or cfg.height_limit
    report = verify_denominator_identity(g, limit, _open_table(g, cfg))
    rows = [[format_root(beta), p, s] for beta, p, s in report.mismatches]
    fields = {k: v for k, v in report.to_dict().items() if k != "mismatches"}
    _emit(cfg, args, report.to_dict(), columns=["beta", "product", "sum"], rows=rows, fields=fields)
    return EXIT_OK if report.ok else IntegrityError.exit_code


def cmd_cache(args, cfg: Config) -> int:
    store = TableCache(cfg.cache_dir)
    if args.action == "info":
        entries = store.info()
        rows = [[e.get("file"), e.get("frontier"), e.get("entries")] for e in entries]
        _emit(cfg, args, {"cache_dir": cfg.cache_dir, "tables": entries}, columns=["file", "frontier", "entries"], rows=rows, fields={"cache_dir": cfg.cache_dir, "tables": len(entries)})
        return EXIT_OK

    gcm_hash = None
    if args.matrix or args.preset:
        gcm_hash = resolve_gcm(args.matrix, args.preset).gcm_id
    removed = store.clear(gcm_hash)
    _emit(cfg, args, {"cache_dir": cfg.cache_dir, "removed": removed})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=["json", "csv", "pretty"], help="Report format (default: HYPERROOT_OUTPUT or pretty)")
    common.add_argument("--out", help="Write the report to this file instead of stdout")
    common.add_argument("--cache-dir", help="Multiplicity table cache directory (default: HYPERROOT_CACHE_DIR or ./cache)")
    common.add_argument("--order", type=int, help="Series truncation order (default: HYPERROOT_TRUNCATION_ORDER or 256)")
    common.add_argument("--height-limit", type=int, help="Default height bound (default: HYPERROOT_HEIGHT_LIMIT or 20)")
    common.add_argument("--threads", type=int, help="Worker threads per height shell (default: HYPERROOT_THREADS or 1)")
    common.add_argument("--log-level", help="DEBUG, INFO, WARNING, ERROR or CRITICAL")

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("matrix", nargs="?", help="Cartan matrix as 'r1;r2;...' or JSON {\"matrix\": [...]}")
    matrix.add_argument("--preset", help="Named matrix: F, E8, E9, E10, E11, A1_1 or A1(a,b)")

    parser = argparse.ArgumentParser(prog="hyperroot", description="Root multiplicities of Kac-Moody algebras")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, matrix], help="Type of a generalized Cartan matrix")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("extend", parents=[common, matrix], help="Affinize, over-extend or attach a vertex")
    p.add_argument("--mode", choices=["affinize", "overextend", "attach"], default="affinize")
    p.add_argument("--attach", type=int, help="Vertex joined to the new vertex (mode attach)")
    p.add_argument("--zero-node", type=int, default=0, help="Affine vertex for over-extension (default: 0)")
    p.set_defaults(handler=cmd_extend)

    p = sub.add_parser("mult", parents=[common, matrix], help="Multiplicity of one root")
    p.add_argument("--root", required=True, help="Root as 'c1,...,cn'")
    p.add_argument("--engine", choices=["peterson", "bm", "both"], default="peterson")
    p.set_defaults(handler=cmd_mult)

    p = sub.add_parser("table", parents=[common, matrix], help="All positive roots up to a height")
    p.add_argument("--height", type=int, help="Height bound (default: --height-limit)")
    p.add_argument("--d", type=int, help="Lattice dimension for the bounds (default: rank)")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("check", parents=[common, matrix], help="Compare multiplicities with the Frenkel, Borcherds and Niemann bounds")
    p.add_argument("--height", type=int, help="Height bound (default: --height-limit)")
    p.add_argument("--d", type=int, help="Lattice dimension (default: rank)")
    p.add_argument("--series", action="store_true", help="E10 level 1 and 2 check from the closed formulas")
    p.add_argument("--index", type=int, default=6, help="Largest series index for --series (default: 6)")
    p.add_argument("--level2", action="store_true", help="Level 2 roots of F against the level 2 series (norm-matched, heuristic)")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("series", parents=[common], help="Coefficients of a named q-series")
    p.add_argument("--name", required=True, choices=["p", "p_l", "xi", "ff_level2", "p_sigma", "tau"])
    p.add_argument("--colors", type=int, help="Number of colors for p_l")
    p.set_defaults(handler=cmd_series)

    p = sub.add_parser("asympt", parents=[common], help="Rademacher main term against the exact coefficient")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="Index n; estimates p_sigma(n+1)")
    group.add_argument("--norm", type=int, help="Root norm (alpha|alpha); uses n = -norm/2")
    p.add_argument("--partition", action="store_true", help="Classical p(n) main term instead of p_sigma")
    p.set_defaults(handler=cmd_asympt)

    p = sub.add_parser("verify-denominator", parents=[common, matrix], help="Check the denominator identity to a height")
    p.add_argument("--height", type=int, help="Height bound (default: --height-limit)")
    p.set_defaults(handler=cmd_verify_denominator)

    p = sub.add_parser("cache", parents=[common], help="Inspect or clear stored tables")
    p.add_argument("action", choices=["info", "clear"])
    p.add_argument("matrix", nargs="?", help="Clear only the table of this matrix")
    p.add_argument("--preset", help="Clear only the table of this preset")
    p.set_defaults(handler=cmd_cache)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main function with command line interface."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        cfg = config.with_overrides(
            output=args.output,
            cache_dir=args.cache_dir,
            truncation_order=args.order,
            height_limit=args.height_limit,
            threads=args.threads,
            log_level=args.log_level,
        )
    except ValueError as e:
        print(f"hyperroot: invalid option: {e}", file=sys.stderr)
        return EXIT_INPUT

    logging.basicConfig(stream=sys.stderr, format='%(asctime)s - %(levelname)s - %(message)s')
    set_log_level(cfg.log_level)

    try:
        return args.handler(args, cfg)
    except HyperrootError as e:
        logger.debug(f"{type(e).__name__} in {args.command}", exc_info=True)
        print(f"hyperroot: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        print(f"hyperroot: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        logger.error(f"Command {args.command} failed: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
