"""Namespaced, reproducible random streams.

Every stochastic operation in the toolkit draws from a stream keyed by a
master seed plus integer namespace indices (tree index, row, pair, trial...).
Streams keyed the same way always yield the same draws, so parallel and
sequential execution are bit-identical.
"""

import numpy as np


def substream(*keys: int) -> np.random.Generator:
    """Generator for the stream identified by an integer key path."""
    return np.random.default_rng(np.random.SeedSequence([int(k) for k in keys]))
