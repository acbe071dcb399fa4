"""File formats: CSV reports, plain-text tables, and flat model files.

Every CSV starts with a comment line recording the tool version and the
master seed, then a header row. Numbers are written with repr precision so
identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io

import numpy as np

from . import __version__
from .data import ClassStats, Dataset
from .degradation import DegradationReport
from .elliptical import EpaModel
from .forest import OobReport
from .pca import PcaModel


def _comment(seed) -> str:
    return f"# epakit {__version__} seed={seed}"


def _write_csv(path, seed, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(_comment(seed) + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    return rows[0], rows[1:]


def write_dataset_csv(ds: Dataset, path, seed, label_column="label") -> None:
    header = list(ds.feature_names) + [label_column]
    rows = ([repr(float(v)) for v in ds.features[i]] + [ds.class_names[int(ds.labels[i])]]
            for i in range(ds.n))
    _write_csv(path, seed, header, rows)


def write_class_stats_csv(stats: ClassStats, path, seed) -> None:
    _write_csv(path, seed, ["label", "display_name", "count"],
               zip(stats.labels, stats.names, stats.counts))


def read_class_stats_csv(path) -> ClassStats:
    _, rows = _read_csv(path)
    return ClassStats(labels=tuple(int(r[0]) for r in rows),
                      names=tuple(r[1] for r in rows),
                      counts=tuple(int(r[2]) for r in rows))


def write_oob_csv(report: OobReport, path, seed) -> None:
    rows = [(lab, name, c, m, repr(m / (c + m) if c + m else 0.0),
             repr(report.overall_oob))
            for lab, name, c, m in zip(report.labels, report.names,
                                       report.correct, report.misclassified)]
    _write_csv(path, seed,
               ["label", "display_name", "correct", "misclassified", "rate",
                "overall_oob"], rows)


def read_oob_csv(path) -> OobReport:
    _, rows = _read_csv(path)
    return OobReport(overall_oob=float(rows[0][5]),
                     labels=tuple(int(r[0]) for r in rows),
                     names=tuple(r[1] for r in rows),
                     correct=tuple(int(r[2]) for r in rows),
                     misclassified=tuple(int(r[3]) for r in rows))


def format_oob_table(report: OobReport) -> str:
    """Aligned text table: per-class OOB rates at 3 decimals."""
    out = io.StringIO()
    out.write(f"overall OOB error: {report.overall_oob:.4f}\n")
    out.write(f"{'label':>5}  {'class':<14} {'rate':>6}  (correct, misclassified)\n")
    for lab, name, c, m in zip(report.labels, report.names, report.correct,
                               report.misclassified):
        rate = m / (c + m) if c + m else 0.0
        out.write(f"{lab:>5}  {name:<14} {rate:>6.3f}  ({c}, {m})\n")
    return out.getvalue()


def write_degradation_csv(report: DegradationReport, path, seed) -> None:
    rows = [(lab, name, i, t, tot, repr(p))
            for lab, name, i, t, tot, p in zip(report.labels, report.names,
                                               report.idmc, report.tdmc,
                                               report.tot, report.pd)]
    rows.append(("", "AVG", "", "", "", repr(report.average_pd)))
    _write_csv(path, seed,
               ["label", "display_name", "idmc", "tdmc", "tot", "pd_percent"],
               rows)


def format_degradation_table(report: DegradationReport,
                             dos_pd: float | None = None) -> str:
    """Aligned text table: pd at 7 decimals, OOB errors in the header."""
    out = io.StringIO()
    out.write(f"OOB input domain:     {report.oob_input:.4f}\n")
    out.write(f"OOB transform domain: {report.oob_transform:.4f}\n")
    out.write(f"{'label':>5}  {'class':<14} {'idmc':>6} {'tdmc':>6} {'tot':>7} "
              f"{'pd(%)':>13}\n")
    for lab, name, i, t, tot, p in zip(report.labels, report.names, report.idmc,
                                       report.tdmc, report.tot, report.pd):
        out.write(f"{lab:>5}  {name:<14} {i:>6} {t:>6} {tot:>7} {p:>13.7f}\n")
    out.write(f"{'':>5}  {'AVG. ERR.':<14} {'':>6} {'':>6} {'':>7} "
              f"{report.average_pd:>13.7f}\n")
    if report.missing_classes:
        out.write(f"classes missing from one report: {list(report.missing_classes)}\n")
    if dos_pd is not None:
        out.write(f"DoS-subset mean pd(%): {dos_pd:.7f}\n")
    return out.getvalue()


def write_sir_csv(rows, path, seed) -> None:
    """rows: iterables of (pair_id, a_used, SirReport)."""
    out = []
    for pair_id, a_used, rep in rows:
        out.append((pair_id, repr(float(a_used)), repr(rep.sir_db),
                    ";".join(repr(v) for v in rep.per_source_sir_db),
                    rep.recoverable))
    _write_csv(path, seed,
               ["pair_id", "a_value", "sir_db", "per_source_sir_db", "recoverable"],
               out)


def write_tune_csv(result, path, seed) -> None:
    rows = [(p.pair_index, repr(p.a), repr(p.sir_db), repr(p.corr_objective),
             p.satisfiable) for p in result.pairs]
    _write_csv(path, seed,
               ["pair", "a", "sir_db", "corr_objective", "satisfiable"], rows)


def write_epa_model(model: EpaModel, path) -> None:
    """Flat key=value text format for the transform model."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{_comment('-')}\n")
        fh.write("model_version = 1\n")
        fh.write(f"alpha = {model.alpha!r}\n")
        fh.write("pairs = " + " ".join(f"{i},{j}" for i, j in model.pairs) + "\n")
        fh.write("a = " + " ".join(repr(float(v)) for v in model.a) + "\n")
        fh.write(f"passthrough = {'' if model.passthrough is None else model.passthrough}\n")


def read_epa_model(path) -> EpaModel:
    kv = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, val = line.partition("=")
            kv[key.strip()] = val.strip()
    pairs = [tuple(int(x) for x in tok.split(",")) for tok in kv["pairs"].split()]
    a = np.array([float(x) for x in kv["a"].split()])
    passthrough = int(kv["passthrough"]) if kv.get("passthrough") else None
    return EpaModel(pairs=pairs, a=a, alpha=float(kv["alpha"]),
                    passthrough=passthrough)


def write_pca_model(model: PcaModel, path) -> None:
    """Flat text audit format: mean, scale, eigenvalues, row-major components."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{_comment('-')}\n")
        fh.write("features = " + ",".join(model.feature_names) + "\n")
        for key, vec in (("mean", model.mean), ("scale", model.scale),
                         ("eigenvalues", model.eigenvalues)):
            fh.write(f"{key} = " + " ".join(repr(float(v)) for v in vec) + "\n")
        fh.write("components = " +
                 " ".join(repr(float(v)) for v in model.components.ravel()) + "\n")


def write_ellipse_csv(series, path, seed) -> None:
    """series: list of (series_id, (n, 2) point array) -> x1, x2, series_id rows."""
    rows = []
    for sid, pts in series:
        for x1, x2 in pts:
            rows.append((repr(float(x1)), repr(float(x2)), sid))
    _write_csv(path, seed, ["x1", "x2", "series_id"], rows)


def write_ellipse_svg(series, path, size=480) -> None:
    """Minimal SVG scatter of the locus points, one color per series."""
    colors = ["#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400"]
    all_pts = np.vstack([pts for _, pts in series if len(pts)])
    lo = all_pts.min(axis=0)
    hi = all_pts.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    margin = 20

    def sx(x):
        return margin + (x - lo[0]) / span[0] * (size - 2 * margin)

    def sy(y):
        return size - margin - (y - lo[1]) / span[1] * (size - 2 * margin)

    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
                 f'height="{size}" viewBox="0 0 {size} {size}">\n')
        for i, (sid, pts) in enumerate(series):
            col = colors[i % len(colors)]
            for x1, x2 in pts:
                fh.write(f'<circle cx="{sx(x1):.2f}" cy="{sy(x2):.2f}" r="2" '
                         f'fill="{col}"><title>{sid}</title></circle>\n')
        fh.write("</svg>\n")
