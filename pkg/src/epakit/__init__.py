"""epakit: elliptical pattern perturbation of tabular data.

Perturbs feature pairs with a weighted-quadratic-mean transform plus
Gaussian noise, tunes the weights against a blind-source-separation attack
scored by signal-to-interference ratio, and quantifies the resulting
random-forest classification degradation against the untransformed data and
a PCA baseline.
"""

__version__ = "0.1.0"

from .data import (ClassStats, Dataset, PreprocessConfig, class_counts,
                   filter_min_count, load_csv, load_nslkdd, select_features,
                   shift_nonnegative, standardize)
from .degradation import (DegradationReport, degradation_report, group_pd,
                          pd_metric, zeta)
from .elliptical import (EllipseParams, EpaModel, consecutive_pairs,
                         correlation_objective, ellipse_locus, pair_transform)
from .elliptical import transform as epa_transform
from .forest import (Forest, OobReport, RfConfig, gini, oob_report,
                     permutation_importance, predict, train)
from .bss import JadeResult, MixtureSet, SirReport, bss_attack, jade, sir
from .selection import backward_elimination
from .tuning import TuneConfig, TuneResult, tune_model, tune_pair
from . import pca

__all__ = [
    "ClassStats", "Dataset", "PreprocessConfig", "class_counts",
    "filter_min_count", "load_csv", "load_nslkdd", "select_features",
    "shift_nonnegative", "standardize",
    "DegradationReport", "degradation_report", "group_pd", "pd_metric", "zeta",
    "EllipseParams", "EpaModel", "consecutive_pairs", "correlation_objective",
    "ellipse_locus", "pair_transform", "epa_transform",
    "Forest", "OobReport", "RfConfig", "gini", "oob_report",
    "permutation_importance", "predict", "train",
    "JadeResult", "MixtureSet", "SirReport", "bss_attack", "jade", "sir",
    "backward_elimination",
    "TuneConfig", "TuneResult", "tune_model", "tune_pair",
    "pca",
]
