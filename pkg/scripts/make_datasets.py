"""Write the CSV snapshots shipped in ``possfuse/data`` from scikit-learn's bundled copies.

Run once; the CSVs are checked in so nothing is fetched at test time.
"""

from pathlib import Path

import numpy as np
from sklearn import datasets

OUT = Path(__file__).resolve().parents[1] / "src" / "possfuse" / "data"


def dump(name, bunch, feature_names):
    X, y = bunch.data, bunch.target
    header = ",".join(list(feature_names) + ["label"])
    rows = np.column_stack([X, y])
    fmt = ["%.10g"] * X.shape[1] + ["%d"]
    np.savetxt(OUT / f"{name}.csv", rows, delimiter=",", header=header, comments="", fmt=fmt)
    print(name, X.shape, np.bincount(y))


if __name__ == "__main__":
    OUT.mkdir(parents=True, exist_ok=True)
    wine = datasets.load_wine()
    dump("wine", wine, [f.replace(",", "") for f in wine.feature_names])
    digits = datasets.load_digits()
    dump("digits", digits, [f"pixel_{r}_{c}" for r in range(8) for c in range(8)])
    bc = datasets.load_breast_cancer()
    dump("breast_cancer", bc, [f.replace(" ", "_") for f in bc.feature_names])
