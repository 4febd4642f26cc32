"""Write the Iris, Wine and Breast Cancer tables shipped with scikit-learn as headered CSV files."""
import csv
import pathlib
import sys

from sklearn import datasets

LOADERS = {
    "iris": datasets.load_iris,
    "wine": datasets.load_wine,
    "breast_cancer": datasets.load_breast_cancer,
}


def main(out_dir: str) -> None:
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, loader in LOADERS.items():
        bunch = loader()
        header = [f.replace(" ", "_").replace("(", "").replace(")", "") for f in bunch.feature_names]
        with open(out / f"{name}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header + ["label"])
            for row, label in zip(bunch.data, bunch.target):
                writer.writerow([repr(float(v)) for v in row] + [int(label)])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
