"""End-to-end acceptance gate.

One test per shipped guarantee; the pytest -v line for each test is its
pass/fail record. Tests that need a local NSL-KDD copy (KDDTrain+ CSV) skip
unless the EPAKIT_NSLKDD environment variable points at the file.
"""

import math
import os
import time

import numpy as np
import pytest

from epakit import bss, data, elliptical, forest, pca, serialize, tuning
from epakit.cli import main as cli_main
from epakit.degradation import degradation_report, pd_metric
from epakit.elliptical import EllipseParams, EpaModel, ellipse_locus, pair_transform
from epakit.forest import OobReport, RfConfig

NSLKDD = os.environ.get("EPAKIT_NSLKDD", "")
needs_nslkdd = pytest.mark.skipif(
    not NSLKDD, reason="set EPAKIT_NSLKDD to a local KDDTrain+ CSV")

# ---------------------------------------------------------------------------
# Frozen network-intrusion tables: class sizes, misclassified counts in the
# input domain, and misclassified counts under each transform variant.
# ---------------------------------------------------------------------------
CLASS_NAMES = ("normal", "neptune", "back", "warezclient", "ipsweep",
               "portsweep", "teardrop", "nmap", "satan", "smurf", "pod")
TOT = (13449, 8282, 196, 181, 710, 587, 188, 301, 691, 529, 38)

IDMC_FULL = (70, 26, 5, 23, 19, 10, 2, 26, 29, 8, 7)
TDMC_FULL = (127, 77, 8, 42, 15, 37, 1, 35, 44, 24, 2)
IDMC_REDUCED = (68, 29, 5, 23, 18, 8, 2, 28, 31, 8, 8)
TDMC_REDUCED = (127, 75, 8, 40, 16, 36, 1, 31, 41, 21, 2)
TDMC_PCA5 = (115, 66, 32, 36, 22, 21, 1, 29, 35, 38, 4)
TDMC_PCA6 = (90, 62, 26, 29, 24, 20, 1, 27, 33, 42, 2)

PD_FULL = (0.4238233, 0.6157933, 1.5306122, 10.4972376, -0.5633803,
           4.5996593, -0.5319149, 2.9900332, 2.1707670, 3.0245747,
           -13.1578947)
PD_REDUCED = (0.4386943, 0.5554214, 1.5306122, 9.3922652, -0.2816901,
              4.7700170, -0.5319149, 0.9966777, 1.4471780, 2.4574669,
              -15.7894737)
PD_PCA5 = (0.3345974, 0.4829751, 13.7755102, 7.1823204, 0.4225352,
           1.8739353, -0.5319149, 0.9966777, 0.8683068, 5.6710775,
           -7.8947368)
PD_PCA6 = (0.1487099, 0.4346776, 10.7142857, 3.3149171, 0.7042254,
           1.7035775, -0.5319149, 0.3322259, 0.5788712, 6.4272212,
           -13.1578947)

AVG_FULL = 1.054483
AVG_REDUCED = 0.4532049
AVG_PCA5 = 2.107389
AVG_PCA6 = 0.9699002

# 16 surviving network features in decreasing importance (index into the
# 38 retained numeric columns, 1-based)
REDUCED_FEATURE_NUMBERS = (33, 4, 32, 6, 36, 20, 28, 19, 31, 27,
                           9, 29, 8, 23, 37, 30)


def test_criterion_1_degradation_table_arithmetic():
    """Every pd value and all four averages reproduce from the counts."""
    for idmc, tdmc, expected, avg in (
            (IDMC_FULL, TDMC_FULL, PD_FULL, AVG_FULL),
            (IDMC_REDUCED, TDMC_REDUCED, PD_REDUCED, AVG_REDUCED),
            (IDMC_FULL, TDMC_PCA5, PD_PCA5, AVG_PCA5),
            (IDMC_FULL, TDMC_PCA6, PD_PCA6, AVG_PCA6)):
        pds = [pd_metric(i, t, n) for i, t, n in zip(idmc, tdmc, TOT)]
        for got, want in zip(pds, expected):
            assert got == pytest.approx(want, abs=1e-6)
        assert sum(pds) / len(pds) == pytest.approx(avg, abs=1e-6)


def test_criterion_2_iris_reproduction(iris_dataset):
    """Seeded per-class iris OOB errors land in the published bands."""
    start = time.time()
    cfg = RfConfig(n_trees=500, mtry=2, seed=1)

    def rates(ds):
        rep = forest.oob_report(forest.train(ds, cfg), ds)
        return [rep.rate(c) for c in (0, 1, 2)]

    rf_rates = rates(iris_dataset)

    model = pca.fit(iris_dataset)
    pca_rates = rates(pca.transform(iris_dataset, model, k=4))

    epa_model = EpaModel(pairs=[(0, 1), (2, 3)], a=[0.042, 0.3], alpha=0.001)
    epa_rates = rates(elliptical.transform(iris_dataset, epa_model, seed=7))

    for got, center in zip(rf_rates, (0.00, 0.08, 0.06)):
        assert abs(got - center) <= 0.04 + 1e-12
    for got, center in zip(pca_rates, (0.00, 0.12, 0.10)):
        assert abs(got - center) <= 0.04 + 1e-12
    for got, center in zip(epa_rates, (0.00, 0.12, 0.06)):
        assert abs(got - center) <= 0.04 + 1e-12
    # qualitative ordering: the perturbation hurts virginica no more than PCA
    assert epa_rates[2] <= pca_rates[2]
    assert time.time() - start < 30


def test_criterion_3_bss_oracle_on_linear_mixtures():
    """JADE separates plain linear mixtures of independent uniforms."""
    start = time.time()
    sirs, recoverable = [], 0
    for trial in range(100):
        rng = np.random.default_rng(trial)
        S = rng.uniform(0, 1, (2, 5000))
        while True:
            A = rng.uniform(-1, 1, (2, 2))
            if abs(np.linalg.det(A)) >= 0.3:
                break
        rep = bss.sir(S, bss.jade(A @ S, m=2).estimated_sources)
        sirs.append(rep.sir_db)
        recoverable += rep.recoverable
    assert np.median(sirs) > 20.0
    assert recoverable >= 95
    assert time.time() - start < 60


def test_criterion_4_epa_defeats_the_attack():
    """Elliptical copies separate far worse than the linear control."""
    epa_sirs, lin_sirs, epa_blocked = [], [], 0
    for trial in range(25):
        rng = np.random.default_rng(trial)
        x1 = rng.uniform(0, 0.05, 5000)
        x2 = rng.uniform(0, 1, 5000)
        epa = bss.bss_attack(x1, x2, K=4, alpha=0.001, seed=trial)
        lin = bss.bss_attack(x1, x2, K=4, alpha=0.001, seed=trial, linear=True)
        epa_sirs.append(epa.sir_db)
        lin_sirs.append(lin.sir_db)
        epa_blocked += not epa.recoverable
    assert np.median(epa_sirs) < np.median(lin_sirs)
    assert np.median(lin_sirs) > bss.RECOVERABLE_DB
    assert epa_blocked >= 20              # >= 80% of 25 trials


@needs_nslkdd
def test_criterion_4_nslkdd_tuned_model_sirs():
    """All 8 tuned-pair SIRs on the reduced network data stay below 20 dB."""
    ds = _nslkdd_reduced()
    model, result = tuning.tune_model(ds, cfg=tuning.TuneConfig(n_trials=50))
    assert all(p.sir_db < 20.0 for p in result.pairs)


def test_criterion_5_transform_invariants():
    """1000-case property sweeps of the pairwise map and its locus."""
    rng = np.random.default_rng(0)

    # weighted-quadratic-mean bounds
    x1 = rng.uniform(0, 100, 1000)
    x2 = rng.uniform(0, 100, 1000)
    a = rng.uniform(0, 1, 1000)
    y = np.sqrt(a * x1 ** 2 + (1 - a) * x2 ** 2)
    assert (y >= np.minimum(x1, x2) - 1e-9).all()
    assert (y <= np.maximum(x1, x2) + 1e-9).all()

    # boundary collapse at a in {0, 1}
    assert np.allclose(pair_transform(x1, x2, 1.0, 0.0), x1, rtol=1e-12)
    assert np.allclose(pair_transform(x1, x2, 0.0, 0.0), x2, rtol=1e-12)

    # noiseless locus round trip below 1e-9
    checked = 0
    for i in range(12):
        av = float(rng.uniform(0.05, 0.95))
        yv = float(rng.uniform(0.1, 10.0))
        pts = ellipse_locus(EllipseParams(yv, av, 1 - av, 0.0, 100), seed=i)
        back = pair_transform(pts[:, 0], pts[:, 1], av, 0.0)
        assert np.abs(back - yv).max() < 1e-9
        checked += len(pts)
    assert checked >= 1000

    # output dimension q = ceil(p / 2) across 1000 random widths
    from conftest import make_dataset
    for trial in range(1000):
        p = int(rng.integers(2, 41))
        pairs, passthrough = elliptical.consecutive_pairs(p)
        ds = make_dataset(rng.uniform(0, 1, (3, p)), [0, 1, 0])
        model = EpaModel(pairs=pairs, a=rng.uniform(0, 1, len(pairs)),
                         alpha=0.0, passthrough=passthrough)
        out = elliptical.transform(ds, model, seed=trial)
        assert out.p == math.ceil(p / 2)


def test_criterion_6_pca_numerics():
    """Orthonormality, correlation trace, and lossless full-rank inversion."""
    from conftest import make_dataset
    rng = np.random.default_rng(1)
    X = rng.uniform(-3, 7, (200, 9)) * rng.uniform(0.1, 10, 9)
    ds = make_dataset(X, rng.integers(0, 3, 200))
    model = pca.fit(ds)
    p = model.p
    assert np.abs(model.components.T @ model.components - np.eye(p)).max() < 1e-8
    assert model.eigenvalues.sum() == pytest.approx(p, abs=1e-6)
    scores = pca.transform(ds, model, k=p)
    back = pca.invert(scores, model, k=p)
    assert np.abs(back.features - ds.features).max() < 1e-8


@needs_nslkdd
def test_criterion_6_nslkdd_component_counts():
    """Kaiser-Guttman keeps 5 components, the 80% variance rule keeps 6."""
    model = pca.fit(_nslkdd_reduced())
    assert pca.select_k_kaiser(model) == 5
    assert pca.select_k_variance(model, 0.80) == 6


def test_criterion_7_cli_determinism(tmp_path):
    """The same config + seed produces byte-identical output trees."""
    rng = np.random.default_rng(2)
    n = 150
    y = rng.integers(0, 2, n)
    X = np.column_stack([rng.uniform(0, 0.05, n) + 0.2 * y,
                         rng.uniform(0, 1, n),
                         rng.uniform(0, 0.05, n),
                         rng.uniform(0, 1, n)])
    data_path = tmp_path / "data.csv"
    import csv
    with open(data_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["f0", "f1", "f2", "f3", "label"])
        for row, lab in zip(X, y):
            w.writerow([repr(float(v)) for v in row] + [f"c{lab}"])

    outputs = []
    for run in ("one", "two"):
        out = tmp_path / run
        cfg = tmp_path / f"{run}.cfg"
        cfg.write_text(
            "config_version = 1\nseed = 11\n"
            f"output_dir = {out}\n"
            f"dataset.path = {data_path}\n"
            "dataset.label_column = label\n"
            "rf.n_trees = 25\ntune.n_trials = 3\n")
        assert cli_main(["classify", "--config", str(cfg),
                         "--variant", "input"]) == 0
        assert cli_main(["tune", "--config", str(cfg)]) in (0, 3)
        assert cli_main(["attack", "--config", str(cfg),
                         "--model", str(out / "epa_model.txt")]) == 0
        assert cli_main(["ellipse", "--triple", "0.22,0.78,0.03",
                         "--seed", "11", "--out", str(out / "locus.csv"),
                         "--svg", str(out / "locus.svg")]) == 0
        outputs.append(out)

    one, two = outputs
    names = sorted(f.name for f in one.iterdir())
    assert names == sorted(f.name for f in two.iterdir())
    for name in names:
        assert (one / name).read_bytes() == (two / name).read_bytes(), name


@needs_nslkdd
def test_criterion_8_nslkdd_degradation_property():
    """Transform-domain OOB stays within 0.02 of input-domain OOB and the
    mean per-class degradation stays below 2.5%."""
    ds = _nslkdd_reduced()
    rf_cfg = RfConfig(n_trees=100, seed=0)

    trained = forest.train(ds, rf_cfg)
    input_report = forest.oob_report(trained, ds)

    model, _ = tuning.tune_model(ds, cfg=tuning.TuneConfig(n_trials=50))
    transformed = elliptical.transform(ds, model, seed=0)
    transform_report = forest.oob_report(forest.train(transformed, rf_cfg),
                                         transformed)

    assert transform_report.overall_oob - input_report.overall_oob < 0.02
    stats = data.class_counts(ds)
    report = degradation_report(input_report, transform_report, stats)
    assert report.average_pd < 2.5


def _nslkdd_reduced() -> data.Dataset:
    """Local network-intrusion data cut to the published 16-feature subset,
    rare classes removed, columns shifted nonnegative."""
    pre = data.PreprocessConfig(min_class_count=30, nonnegative_shift=True)
    ds = data.load_nslkdd(NSLKDD, pre)
    names = [ds.feature_names[i - 1] for i in REDUCED_FEATURE_NUMBERS]
    return data.select_features(ds, names)
