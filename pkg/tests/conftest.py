import csv

import numpy as np
import pytest

from epakit import Dataset


@pytest.fixture(scope="session")
def iris_dataset() -> Dataset:
    from sklearn.datasets import load_iris
    iris = load_iris()
    names = tuple(n.replace(" (cm)", "").replace(" ", "_") for n in iris.feature_names)
    return Dataset(iris.data, iris.target, names,
                   {i: n for i, n in enumerate(iris.target_names)})


@pytest.fixture(scope="session")
def iris_csv(tmp_path_factory, iris_dataset) -> str:
    path = tmp_path_factory.mktemp("data") / "iris.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(iris_dataset.feature_names) + ["species"])
        for row, lab in zip(iris_dataset.features, iris_dataset.labels):
            writer.writerow([f"{v:g}" for v in row]
                            + [iris_dataset.class_names[int(lab)]])
    return str(path)


def make_dataset(X, y, class_names=None) -> Dataset:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if class_names is None:
        class_names = {int(c): f"class{c}" for c in np.unique(y)}
    return Dataset(X, y, tuple(f"f{j}" for j in range(X.shape[1])), class_names)


@pytest.fixture
def blob_dataset() -> Dataset:
    """Two well-separated Gaussian blobs, 100 rows, 3 features."""
    rng = np.random.default_rng(42)
    a = rng.normal(0.0, 0.5, (50, 3))
    b = rng.normal(5.0, 0.5, (50, 3))
    X = np.vstack([a, b])
    y = np.repeat([0, 1], 50)
    return make_dataset(X, y)
