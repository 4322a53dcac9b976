"""Builds the CSV benchmark datasets in data/benchmark/.

Sources are bundled with two Python packages, so no download is needed:

* breastw   - Wisconsin breast cancer (original), from R's MASS::biopsy as
              shipped by `pydataset`; rows with missing values removed,
              malignant = outlier (683 rows, 239 outliers).
* wine      - UCI wine (scikit-learn); cultivars 2 and 3 are inliers,
              10 rows of cultivar 1 drawn at random are outliers.
* wbc       - Wisconsin diagnostic breast cancer (scikit-learn); benign
              rows are inliers, 21 malignant rows drawn at random are outliers.
* pima      - Pima Indians diabetes from MASS (Pima.tr + Pima.te, the
              complete-case subset); diabetic = outlier.
* optdigits - scikit-learn 8x8 digits; digits 1-9 are inliers, 50 zeros
              drawn at random are outliers.

The sub-sampled sets follow the usual outlier-benchmark recipe but their
random outlier draws are our own (numpy seed below), so they are close
relatives of the published benchmark files rather than copies.

usage: python3 scripts/build_datasets.py [--pydataset-root DIR] [--out DIR]
"""

import argparse
import csv
import os
import sys

import numpy as np

SEED = 20200817


def find_mass_dir(root):
    if root is None:
        try:
            import pydataset  # noqa: F401
        except ImportError:
            sys.exit("pydataset is not installed; pass --pydataset-root")
        root = os.path.join(os.path.dirname(pydataset.__file__), "resources")
    for dirpath, _, files in os.walk(root):
        if "biopsy.csv" in files and dirpath.endswith("MASS"):
            return dirpath
    sys.exit(f"MASS/biopsy.csv not found under {root}")


def write(path, names, X, y):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(names) + ["label"])
        for row, label in zip(X, y):
            w.writerow([repr(float(v)) for v in row] + [int(label)])
    print(f"{path}: n={len(y)} d={len(names)} outliers={int(np.sum(y))}")


def read_r_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def breastw(mass):
    header, rows = read_r_csv(os.path.join(mass, "biopsy.csv"))
    names = ["clump_thickness", "cell_size_uniformity", "cell_shape_uniformity",
             "marginal_adhesion", "single_epithelial_cell_size", "bare_nuclei",
             "bland_chromatin", "normal_nucleoli", "mitoses"]
    feats = [header.index(f"V{i}") for i in range(1, 10)]
    cls = header.index("class")
    X, y = [], []
    for r in rows:
        cells = [r[i] for i in feats]
        if any(c in ("", "NA") for c in cells):
            continue
        X.append([float(c) for c in cells])
        y.append(1 if r[cls] == "malignant" else 0)
    return names, np.array(X), np.array(y)


def pima(mass):
    names = ["npreg", "glu", "bp", "skin", "bmi", "ped", "age"]
    X, y = [], []
    for part in ("Pima.tr.csv", "Pima.te.csv"):
        header, rows = read_r_csv(os.path.join(mass, part))
        idx = [header.index(n) for n in names]
        t = header.index("type")
        for r in rows:
            X.append([float(r[i]) for i in idx])
            y.append(1 if r[t] == "Yes" else 0)
    return names, np.array(X), np.array(y)


def downsample(X, target, inlier_mask, outlier_pool, k, rng):
    chosen = rng.choice(np.flatnonzero(outlier_pool), size=k, replace=False)
    chosen.sort()
    Xs = np.vstack([X[inlier_mask], X[chosen]])
    ys = np.r_[np.zeros(inlier_mask.sum(), dtype=int), np.ones(k, dtype=int)]
    return Xs, ys


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pydataset-root")
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "benchmark"))
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    from sklearn.datasets import load_breast_cancer, load_digits, load_wine

    mass = find_mass_dir(args.pydataset_root)
    write(os.path.join(args.out, "breastw.csv"), *breastw(mass))
    write(os.path.join(args.out, "pima.csv"), *pima(mass))

    rng = np.random.default_rng(SEED)
    w = load_wine()
    X, y = downsample(w.data, w.target, w.target != 0, w.target == 0, 10, rng)
    write(os.path.join(args.out, "wine.csv"), w.feature_names, X, y)

    b = load_breast_cancer()
    names = [n.replace(" ", "_") for n in b.feature_names]
    X, y = downsample(b.data, b.target, b.target == 1, b.target == 0, 21, rng)
    write(os.path.join(args.out, "wbc.csv"), names, X, y)

    d = load_digits()
    names = [f"pixel_{i}" for i in range(d.data.shape[1])]
    X, y = downsample(d.data, d.target, d.target != 0, d.target == 0, 50, rng)
    write(os.path.join(args.out, "optdigits.csv"), names, X, y)


if __name__ == "__main__":
    main()
