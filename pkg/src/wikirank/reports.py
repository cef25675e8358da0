"""Report writers: CSV at reporting precision, JSON sidecars at full
precision.  All output is a pure function of the inputs (no clocks, no
environment), so identical runs produce byte-identical files."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .centrality import MEASURES, CentralityTable
from .graph import NetworkParameters
from .noise import (ENSEMBLE_MEASURES, SAMPLE_PARAM_FIELDS, NoiseEnsembleStats,
                    RegressionResult)
from .poset import HasseDag
from .ranking import CorrelationMatrix, LogBinnedFit

DISPLAY_NAMES = {
    "degree": "Degree",
    "betweenness": "Betweenness",
    "closeness": "Closeness",
    "eigenvector": "Eigenvector",
    "pagerank": "PageRank",
    "average": "Average",
}

CLUSTERING_CONVENTION = ("mean local clustering coefficient over all nodes; "
                         "nodes with degree < 2 contribute 0")


def jsonable(obj):
    """numpy scalars/arrays to plain Python; NaN becomes null."""
    if isinstance(obj, dict):
        return {k: jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float) and math.isnan(obj):
        return None
    return obj


def write_json(path, payload) -> None:
    text = json.dumps(jsonable(payload), indent=2, sort_keys=True,
                      allow_nan=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _fmt(value, precision: int) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.{precision}f}"


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


# ---------------------------------------------------------------------------
# analyze outputs

def write_scores_csv(path, table: CentralityTable, precision: int = 2) -> None:
    ranks = table.rank_by_average()
    order = sorted(range(table.n),
                   key=lambda i: (ranks[i] == 0, ranks[i], table.labels[i]))
    header = ["title", "degree_raw", "degree", "betweenness", "closeness",
              "eigenvector", "pagerank", "average", "rank_by_average"]
    rows = []
    for i in order:
        rows.append([
            table.labels[i],
            str(int(table.raw["degree"][i])),
            _fmt(table.rescaled["degree"][i], precision),
            _fmt(table.rescaled["betweenness"][i], precision),
            _fmt(table.rescaled["closeness"][i], precision),
            _fmt(table.rescaled["eigenvector"][i], precision),
            _fmt(table.rescaled["pagerank"][i], precision),
            _fmt(table.average[i], precision),
            str(int(ranks[i])) if ranks[i] > 0 else "",
        ])
    _write_csv(path, header, rows)


def write_scores_json(path, table: CentralityTable) -> None:
    ranks = table.rank_by_average()
    payload = {
        "alpha": table.alpha,
        "scopes": table.scopes,
        "nodes": [
            {
                "title": table.labels[i],
                "in_lcc": bool(table.in_lcc[i]),
                "raw": {m: table.raw[m][i] for m in MEASURES},
                "rescaled": {m: table.rescaled[m][i] for m in MEASURES},
                "average": table.average[i],
                "rank_by_average": int(ranks[i]),
            }
            for i in range(table.n)
        ],
    }
    write_json(path, payload)


def write_network_params_json(path, params: NetworkParameters) -> None:
    payload = params.as_dict()
    payload["conventions"] = {
        "clustering": CLUSTERING_CONVENTION,
        "diameter": "largest component",
        "avg_path_length": "largest component, unordered distinct pairs",
    }
    write_json(path, payload)


def write_correlations_csv(path, corr: CorrelationMatrix,
                           precision: int = 2) -> None:
    """Combined triangle layout: Pearson above the diagonal, Spearman below."""
    names = [DISPLAY_NAMES[s] for s in corr.series]
    header = [corr.population] + names
    rows = []
    for i, row_name in enumerate(names):
        row = [row_name]
        for j in range(len(names)):
            if i == j:
                row.append(_fmt(1.0, precision))
            elif j > i:
                row.append(_fmt(corr.pearson[i, j], precision))
            else:
                row.append(_fmt(corr.spearman[i, j], precision))
        rows.append(row)
    _write_csv(path, header, rows)


def write_correlations_json(path, corr: CorrelationMatrix) -> None:
    write_json(path, {
        "population": corr.population,
        "n": corr.n,
        "series": list(corr.series),
        "pearson": corr.pearson,
        "spearman": corr.spearman,
    })


def write_fit_json(path, fit: LogBinnedFit) -> None:
    write_json(path, {
        "slope": fit.slope,
        "slope_stderr": fit.slope_stderr,
        "r2": fit.r2,
        "ratio": fit.ratio,
        "first_edge": fit.first_edge,
        "note": "degree-0 nodes excluded from the histogram",
        "bins": [
            {
                "lo": fit.edges[i],
                "hi": fit.edges[i + 1],
                "center": fit.centers[i],
                "density": fit.densities[i],
            }
            for i in range(len(fit.centers))
        ],
    })


# ---------------------------------------------------------------------------
# noise outputs

def write_ensemble_csv(path, stats: NoiseEnsembleStats,
                       precision: int = 2) -> None:
    avg_mean = stats.score_mean["average"]
    order = sorted(range(len(stats.labels)),
                   key=lambda i: (np.isnan(avg_mean[i]), -_safe(avg_mean[i]),
                                  stats.labels[i]))
    header = ["title"]
    for m in ENSEMBLE_MEASURES:
        header += [f"{m}_mean", f"{m}_std", f"{m}_rank_mean", f"{m}_rank_std",
                   f"{m}_rank_q1", f"{m}_rank_median", f"{m}_rank_q3",
                   f"{m}_rank_whisker_low", f"{m}_rank_whisker_high",
                   f"{m}_rank_outliers"]
    rows = []
    for i in order:
        row = [stats.labels[i]]
        for m in ENSEMBLE_MEASURES:
            box = stats.rank_box[m]
            row += [
                _fmt(stats.score_mean[m][i], precision),
                _fmt(stats.score_std[m][i], precision),
                _fmt(stats.rank_mean[m][i], precision),
                _fmt(stats.rank_std[m][i], precision),
                _fmt(box["q1"][i], precision),
                _fmt(box["median"][i], precision),
                _fmt(box["q3"][i], precision),
                _fmt(box["whisker_low"][i], precision),
                _fmt(box["whisker_high"][i], precision),
                str(int(box["n_outliers"][i])),
            ]
        rows.append(row)
    _write_csv(path, header, rows)


def _safe(x) -> float:
    return -math.inf if (x is None or math.isnan(x)) else float(x)


def write_sample_params_csv(path, stats: NoiseEnsembleStats,
                            precision: int = 4) -> None:
    header = ["sample", *SAMPLE_PARAM_FIELDS, "status"]
    failed = set(stats.failed)
    rows = []
    for s in range(stats.config.samples):
        row = [str(s)]
        if s in failed:
            row += [""] * len(SAMPLE_PARAM_FIELDS) + ["failed"]
        else:
            vals = stats.sample_params[s]
            row += [_fmt(vals[0], 0), _fmt(vals[1], 0), _fmt(vals[2], 0),
                    _fmt(vals[3], 0), _fmt(vals[4], precision),
                    _fmt(vals[5], precision), "ok"]
        rows.append(row)
    _write_csv(path, header, rows)


def write_rank_boxes_json(path, stats: NoiseEnsembleStats, top_k: int) -> None:
    """Box-plot records for the top-k nodes by mean average score."""
    avg_mean = stats.score_mean["average"]
    scored = [i for i in range(len(stats.labels)) if not math.isnan(avg_mean[i])]
    scored.sort(key=lambda i: (-avg_mean[i], stats.labels[i]))
    records = []
    for i in scored[:top_k]:
        for m in ENSEMBLE_MEASURES:
            box = stats.rank_box_stats(m, i)
            records.append({
                "title": stats.labels[i],
                "measure": m,
                "score_mean": stats.score_mean[m][i],
                "score_std": stats.score_std[m][i],
                "rank_mean": stats.rank_mean[m][i],
                "q1": box.q1,
                "median": box.median,
                "q3": box.q3,
                "whisker_low": box.whisker_low,
                "whisker_high": box.whisker_high,
                "outliers": box.outliers,
            })
    write_json(path, {"samples": stats.n_valid, "p": stats.config.p,
                      "boxes": records})


def write_regression_json(path, reg: RegressionResult,
                          stats: NoiseEnsembleStats,
                          mean_theory_ratio: float) -> None:
    write_json(path, {
        "slope": reg.slope,
        "r2": reg.r2,
        "n_points": reg.n_points,
        "p": stats.config.p,
        "samples": stats.n_valid,
        "mean_theory_ratio": mean_theory_ratio,
    })


# ---------------------------------------------------------------------------
# poset outputs

def write_hasse(dot_path, json_path, dag: HasseDag) -> None:
    Path(dot_path).write_text(dag.to_dot(), encoding="utf-8")
    write_json(json_path, dag.to_json_dict())


def write_error_json(stream, exc: BaseException) -> None:
    stream.write(json.dumps(
        {"error": type(exc).__name__, "message": str(exc)},
        sort_keys=True) + "\n")
