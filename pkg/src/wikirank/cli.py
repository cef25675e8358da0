"""Command line interface: extract -> analyze -> noise -> poset.

Every subcommand takes --config PATH plus a few override flags, writes its
reports under the configured output directory and exits 0 on success; on
failure a machine-readable JSON error goes to stderr and the exit code is
nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import reports
from .centrality import full_analysis
from .config import ConfigError, RunConfig, apply_overrides, load_config
from .extract import extract_from_dirs
from .graph import network_parameters, read_edge_list, write_edge_list
from .noise import NoiseConfig, degree_theory, degree_std_regression, run_ensemble
from .poset import build_poset, transitive_reduction
from .ranking import FitError, correlation_matrix, degree_distribution_fit


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    return apply_overrides(
        cfg,
        out_dir=args.out,
        master_seed=getattr(args, "seed", None),
        p=getattr(args, "p", None),
        samples=getattr(args, "samples", None),
        alpha=getattr(args, "alpha", None),
        top_k=getattr(args, "top_k", None),
        workers=getattr(args, "workers", None),
    )


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _input_graph(cfg: RunConfig):
    if cfg.edge_list is not None:
        path = Path(cfg.edge_list)
    else:
        path = Path(cfg.out_dir) / "edges.tsv"
        if not path.exists():
            raise FileNotFoundError(
                f"{path} not found: run the extract command first")
    return read_edge_list(path)


def cmd_extract(args) -> int:
    cfg = _load(args)
    if cfg.catalogue_dir is None:
        raise ConfigError("extract needs catalogue_dir and pages_dir")
    out = _out_dir(cfg)
    result = extract_from_dirs(cfg.catalogue_dir, cfg.pages_dir)
    write_edge_list(result.graph, out / "edges.tsv")
    with open(out / "biographies.txt", "w", encoding="utf-8") as fh:
        for title in result.biographies:
            fh.write(title + "\n")
    reports.write_json(out / "extract_manifest.json", result.manifest)
    print(f"extract: {result.manifest['biographies']} biographies, "
          f"{result.manifest['hyperlinks']} hyperlinks, "
          f"{result.manifest['edges']} edges -> {out}")
    return 0


def cmd_analyze(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg)
    g = _input_graph(cfg)
    analysis = full_analysis(g, alpha=cfg.alpha, eig_tol=cfg.eig_tol,
                             pr_tol=cfg.pr_tol, max_iter=cfg.max_iter)
    table = analysis.table
    reports.write_scores_csv(out / "scores.csv", table, cfg.precision)
    reports.write_scores_json(out / "scores.json", table)
    reports.write_network_params_json(out / "network_parameters.json",
                                      network_parameters(g))
    lcc_corr = correlation_matrix(table, "largest_component")
    top_corr = correlation_matrix(table, "top_k", k=cfg.top_k)
    reports.write_correlations_csv(out / "correlations_lcc.csv", lcc_corr,
                                   cfg.precision)
    reports.write_correlations_json(out / "correlations_lcc.json", lcc_corr)
    reports.write_correlations_csv(out / "correlations_topk.csv", top_corr,
                                   cfg.precision)
    reports.write_correlations_json(out / "correlations_topk.json", top_corr)
    try:
        fit = degree_distribution_fit(g)
        reports.write_fit_json(out / "degree_fit.json", fit)
    except FitError as exc:
        reports.write_json(out / "degree_fit.json", {"error": str(exc)})
    print(f"analyze: {g.N} nodes, {g.E} edges, "
          f"lcc {analysis.lcc_nodes} nodes -> {out}")
    return 0


def cmd_noise(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg)
    g = _input_graph(cfg)
    noise_cfg = NoiseConfig(p=cfg.p, samples=cfg.samples,
                            master_seed=cfg.master_seed)
    stats = run_ensemble(g, noise_cfg, workers=cfg.workers, alpha=cfg.alpha,
                         eig_tol=cfg.eig_tol, pr_tol=cfg.pr_tol,
                         max_iter=cfg.max_iter)
    reports.write_ensemble_csv(out / "ensemble.csv", stats, cfg.precision)
    reports.write_sample_params_csv(out / "sample_parameters.csv", stats)
    reports.write_rank_boxes_json(out / "rank_boxes.json", stats, cfg.top_k)
    reg = degree_std_regression(stats)
    k = stats.base_degrees
    theory = degree_theory(k[k >= 1], noise_cfg.p, g.E)
    ratio = float(np.mean(theory.sigma / np.sqrt(theory.k_orig)))
    reports.write_regression_json(out / "degree_std_fit.json", reg, stats, ratio)
    print(f"noise: {stats.n_valid}/{noise_cfg.samples} samples ok, "
          f"p={noise_cfg.p}, seed={noise_cfg.master_seed} -> {out}")
    return 0


def cmd_poset(args) -> int:
    cfg = _load(args)
    out = _out_dir(cfg)
    scores_path = out / "scores.json"
    if not scores_path.exists():
        raise FileNotFoundError(
            f"{scores_path} not found: run the analyze command first")
    table = _table_from_json(scores_path)
    poset = build_poset(table, k=min(cfg.top_k, int(table.in_lcc.sum())))
    dag = transitive_reduction(poset)
    reports.write_hasse(out / "hasse.dot", out / "hasse.json", dag)
    n_top = int(dag.is_top.sum())
    print(f"poset: {poset.size} members, {n_top} top nodes, "
          f"{len(dag.edges)} covering edges -> {out}")
    return 0


def _table_from_json(path):
    from .centrality import MEASURES, CentralityTable

    data = json.loads(Path(path).read_text(encoding="utf-8"))
    nodes = data["nodes"]
    labels = tuple(n["title"] for n in nodes)
    size = len(nodes)

    def column(getter):
        col = np.full(size, np.nan)
        for i, node in enumerate(nodes):
            val = getter(node)
            if val is not None:
                col[i] = val
        return col

    raw = {m: column(lambda n, m=m: n["raw"][m]) for m in MEASURES}
    rescaled = {m: column(lambda n, m=m: n["rescaled"][m]) for m in MEASURES}
    average = column(lambda n: n["average"])
    in_lcc = np.array([bool(n["in_lcc"]) for n in nodes])
    return CentralityTable(labels, raw, rescaled, average, in_lcc,
                           data.get("alpha", 0.85), data.get("scopes", {}))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wikirank",
        description="biography-network centrality, robustness and poset reports")
    sub = parser.add_subparsers(dest="command", required=True)

    commands = [
        ("extract", "parse wiki files to an edge list", cmd_extract),
        ("analyze", "centrality scores and statistics", cmd_analyze),
        ("noise", "rewiring-noise Monte Carlo ensemble", cmd_noise),
        ("poset", "dominance poset and Hasse diagram", cmd_poset),
    ]
    for name, help_text, func in commands:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", default=None, help="override output directory")
        p.add_argument("--seed", type=int, default=None,
                       help="override noise.master_seed")
        p.add_argument("--p", type=float, default=None,
                       help="override the rewiring fraction")
        p.add_argument("--samples", type=int, default=None)
        p.add_argument("--alpha", type=float, default=None)
        p.add_argument("--top-k", dest="top_k", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        reports.write_error_json(sys.stderr, exc)
        return 2
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports all
        reports.write_error_json(sys.stderr, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
