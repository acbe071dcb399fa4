"""Batch command-line front end.

Subcommands wire the library modules into the full pipelines: classify
(train a forest on a dataset variant and write OOB reports), tune (pick
perturbation weights), compare (degradation tables), attack (SIR report for
a tuned model), and ellipse (locus point files). Everything is driven by a
flat key = value config file plus overriding --set flags; all outputs land
in the configured output directory and are byte-identical across reruns
with the same config and seed.

Exit codes: 0 success, 2 input/config error, 3 privacy constraint
unsatisfied, 4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import (__version__, bss, data, degradation, elliptical, forest, pca,
               serialize, tuning)

log = logging.getLogger("epakit")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNSATISFIED = 3
EXIT_NONCONVERGED = 4

CONFIG_VERSION = "1"

# namespace indices for deriving per-module streams from the master seed
_NS = {"rf": 1, "epa": 2, "tune": 3, "attack": 4, "ellipse": 5, "pca": 6}

DOS_CLASSES = ("neptune", "back", "teardrop", "smurf", "pod")


def derived_seed(master: int, namespace: str) -> int:
    ss = np.random.SeedSequence([int(master), _NS[namespace]])
    return int(ss.generate_state(1)[0])


def load_config(path, overrides=()) -> dict[str, str]:
    cfg = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, val = line.partition("=")
            cfg[key.strip()] = val.strip()
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"--set expects key=value, got {item!r}")
        key, _, val = item.partition("=")
        cfg[key.strip()] = val.strip()
    if cfg.get("config_version") != CONFIG_VERSION:
        raise ValueError(f"config_version must be {CONFIG_VERSION}")
    return cfg


def _get(cfg, key, default=None, required=False):
    val = cfg.get(key, "")
    if val == "":
        if required:
            raise ValueError(f"config key {key!r} is required")
        return default
    return val


def _bool(val: str) -> bool:
    return val.lower() in ("1", "true", "yes", "on")


def _load_dataset(cfg) -> data.Dataset:
    pre = data.PreprocessConfig(
        drop_columns=[c for c in _get(cfg, "dataset.drop_columns", "").split(",") if c],
        min_class_count=int(_get(cfg, "dataset.min_class_count", "0")),
        nonnegative_shift=_bool(_get(cfg, "dataset.nonnegative_shift", "false")),
        standardize=_bool(_get(cfg, "dataset.standardize", "false")),
    )
    path = _get(cfg, "dataset.path", required=True)
    if _bool(_get(cfg, "dataset.nslkdd", "false")):
        ds = data.load_nslkdd(path, pre)
    else:
        ds = data.load_csv(path, _get(cfg, "dataset.label_column", required=True), pre)
    features = _get(cfg, "dataset.features", "")
    if features:
        ds = data.select_features(ds, [f.strip() for f in features.split(",")])
    return ds


def _rf_config(cfg, master_seed: int) -> forest.RfConfig:
    mtry = _get(cfg, "rf.mtry")
    depth = _get(cfg, "rf.max_depth")
    return forest.RfConfig(
        n_trees=int(_get(cfg, "rf.n_trees", "500")),
        mtry=int(mtry) if mtry else None,
        min_node_size=int(_get(cfg, "rf.min_node_size", "1")),
        max_depth=int(depth) if depth else None,
        seed=derived_seed(master_seed, "rf"),
    )


def _outdir(cfg) -> str:
    out = _get(cfg, "output_dir", "out")
    os.makedirs(out, exist_ok=True)
    return out


def _pairing(cfg, p: int):
    raw = _get(cfg, "pairing", "")
    if not raw:
        return None
    return [tuple(int(x) for x in tok.split(",")) for tok in raw.split()]


def cmd_classify(args) -> int:
    cfg = load_config(args.config, args.set or ())
    seed = int(_get(cfg, "seed", "0"))
    out = _outdir(cfg)
    ds = _load_dataset(cfg)
    stats = data.class_counts(ds)

    variant = args.variant
    if variant == "epa":
        model_path = args.model or _get(cfg, "epa.model", required=True)
        model = serialize.read_epa_model(model_path)
        ds = elliptical.transform(ds, model, derived_seed(seed, "epa"))
    elif variant == "pca":
        model = pca.fit(ds)
        rule = _get(cfg, "pca.k_rule", "kaiser")
        if rule == "kaiser":
            k = pca.select_k_kaiser(model)
            if k == 0:
                raise ValueError("Kaiser-Guttman rule selected 0 components")
        elif rule.startswith("variance:"):
            k = pca.select_k_variance(model, float(rule.split(":", 1)[1]))
        elif rule.startswith("fixed:"):
            k = int(rule.split(":", 1)[1])
        else:
            raise ValueError(f"unknown pca.k_rule {rule!r}")
        serialize.write_pca_model(model, os.path.join(out, "pca_model.txt"))
        ds = pca.transform(ds, model, k)

    trained = forest.train(ds, _rf_config(cfg, seed))
    report = forest.oob_report(trained, ds)
    serialize.write_oob_csv(report, os.path.join(out, f"oob_{variant}.csv"), seed)
    with open(os.path.join(out, f"oob_{variant}.txt"), "w", encoding="utf-8") as fh:
        fh.write(serialize.format_oob_table(report))
    serialize.write_class_stats_csv(stats, os.path.join(out, "class_stats.csv"), seed)
    return EXIT_OK


def cmd_tune(args) -> int:
    cfg = load_config(args.config, args.set or ())
    seed = int(_get(cfg, "seed", "0"))
    out = _outdir(cfg)
    ds = _load_dataset(cfg)
    reuse = args.reuse_cycle
    if reuse is None:
        raw = _get(cfg, "tune.reuse_cycle")
        reuse = int(raw) if raw else None
    tune_cfg = tuning.TuneConfig(
        n_trials=int(_get(cfg, "tune.n_trials", "200")),
        alpha=float(_get(cfg, "tune.alpha", "0.001")),
        sir_threshold_db=float(_get(cfg, "tune.sir_threshold_db", "20")),
        K=int(_get(cfg, "tune.k_copies", "4")),
        seed=derived_seed(seed, "tune"),
    )
    model, result = tuning.tune_model(ds, _pairing(cfg, ds.p), tune_cfg,
                                      reuse_cycle=reuse)
    serialize.write_epa_model(model, os.path.join(out, "epa_model.txt"))
    serialize.write_tune_csv(result, os.path.join(out, "tune_result.csv"), seed)
    return EXIT_OK if result.all_satisfiable else EXIT_UNSATISFIED


def cmd_compare(args) -> int:
    cfg = load_config(args.config, args.set or ())
    seed = int(_get(cfg, "seed", "0"))
    out = _outdir(cfg)
    input_report = serialize.read_oob_csv(args.input_report)
    transform_report = serialize.read_oob_csv(args.transform_report)
    stats_path = args.stats or os.path.join(out, "class_stats.csv")
    stats = serialize.read_class_stats_csv(stats_path)
    report = degradation.degradation_report(input_report, transform_report, stats)

    dos_pd = None
    by_name = {name.lower(): lab for lab, name in zip(report.labels, report.names)}
    if all(name in by_name for name in DOS_CLASSES):
        dos_pd = degradation.group_pd(report, [by_name[n] for n in DOS_CLASSES])
    serialize.write_degradation_csv(report, os.path.join(out, "degradation.csv"), seed)
    with open(os.path.join(out, "degradation.txt"), "w", encoding="utf-8") as fh:
        fh.write(serialize.format_degradation_table(report, dos_pd))
    return EXIT_OK


def cmd_attack(args) -> int:
    cfg = load_config(args.config, args.set or ())
    seed = int(_get(cfg, "seed", "0"))
    out = _outdir(cfg)
    ds = _load_dataset(cfg)
    model_path = args.model or _get(cfg, "epa.model", required=True)
    model = serialize.read_epa_model(model_path)
    rows = []
    for i, (j1, j2) in enumerate(model.pairs):
        rep = bss.bss_attack(ds.features[:, j1], ds.features[:, j2],
                             K=int(_get(cfg, "tune.k_copies", "4")),
                             alpha=model.alpha,
                             seed=int(np.random.SeedSequence(
                                 [derived_seed(seed, "attack"), i]).generate_state(1)[0]),
                             a_fixed=float(model.a[i]),
                             linear=args.linear_control)
        rows.append((i, float(model.a[i]), rep))
    serialize.write_sir_csv(rows, os.path.join(out, "sir_report.csv"), seed)
    if not all(rep.converged for _, _, rep in rows):
        log.warning("joint diagonalization did not converge for every pair")
        return EXIT_NONCONVERGED
    return EXIT_OK


def cmd_ellipse(args) -> int:
    out_path = args.out
    series = []
    for idx, triple in enumerate(args.triple):
        a, b, alpha = (float(x) for x in triple.split(","))
        params = elliptical.EllipseParams(y_value=args.y, a=a, b=b, alpha=alpha,
                                          n_points=args.n_points)
        pts = elliptical.ellipse_locus(params, seed=int(np.random.SeedSequence(
            [args.seed, _NS["ellipse"], idx]).generate_state(1)[0]))
        series.append((f"a={a},b={b},alpha={alpha}", pts))
    serialize.write_ellipse_csv(series, out_path, args.seed)
    if args.svg:
        serialize.write_ellipse_svg(series, args.svg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epakit",
        description="Elliptical pattern perturbation, privacy attack, and "
                    "classification degradation toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", required=True, help="flat key = value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a config key")

    p = sub.add_parser("classify", help="train a forest and write OOB reports")
    with_config(p)
    p.add_argument("--variant", choices=("input", "epa", "pca"), required=True)
    p.add_argument("--model", help="transform model file (epa variant)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tune", help="Monte-Carlo selection of pair weights")
    with_config(p)
    p.add_argument("--reuse-cycle", type=int, default=None,
                   help="tune only the first N pairs and cycle their weights")
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("compare", help="degradation report from two OOB reports")
    with_config(p)
    p.add_argument("--input-report", required=True)
    p.add_argument("--transform-report", required=True)
    p.add_argument("--stats", help="class stats CSV (defaults to output_dir/class_stats.csv)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("attack", help="SIR report of the BSS attack on a tuned model")
    with_config(p)
    p.add_argument("--model", help="transform model file")
    p.add_argument("--linear-control", action="store_true",
                   help="substitute plain weighted sums for the elliptical copies")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("ellipse", help="emit locus point files")
    p.add_argument("--y", type=float, default=1.0)
    p.add_argument("--triple", action="append", required=True, metavar="A,B,ALPHA")
    p.add_argument("--n-points", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--svg", help="also write an SVG scatter")
    p.set_defaults(func=cmd_ellipse)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"epakit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
