"""Backward feature elimination driven by forest importance.

Repeatedly trains a forest, drops the least important feature by
permutation importance, and stops once the OOB error degrades past a
tolerance over the best error seen so far (or the 2-feature floor is hit).
"""

from __future__ import annotations

import logging
import math

from . import forest as rf
from .data import Dataset, select_features

log = logging.getLogger("epakit")

FEATURE_FLOOR = 2


def backward_elimination(ds: Dataset, rf_cfg: rf.RfConfig, delta: float,
                         seed: int) -> tuple[str, ...]:
    """Surviving feature names, most important first."""
    if ds.p < 2:
        raise ValueError("need at least 2 features")
    current = list(ds.feature_names)
    best_oob = math.inf
    prev_order = None
    while True:
        sub = select_features(ds, current)
        trained = rf.train(sub, rf_cfg)
        err = rf.oob_error(trained, sub.features, sub.labels)
        ranking = rf.permutation_importance(trained, sub, seed)
        if err > best_oob + delta:
            # the last drop hurt: keep the previous subset
            return prev_order
        best_oob = min(best_oob, err)
        prev_order = ranking.order
        if len(current) <= FEATURE_FLOOR:
            return ranking.order
        dropped = ranking.order[-1]
        log.info("backward_elimination: oob=%.4f, dropping %r", err, dropped)
        current = [f for f in current if f != dropped]
