"""CSC footprint of the real datasets from their header statistics alone."""

from redsparse import Dims, ValueKind
from redsparse.analytics import header_report

# name, nrows, ncols, nnz, value kind
DATASETS = [
    ("single-cell", 18_082, 897_733, 1_300_000_000, ValueKind(2, "unsigned-int")),
    ("web-of-science", 46_985, 124_836, 5_410_000, ValueKind(1, "unsigned-int")),
    ("movielens", 162_541, 59_047, 25_000_000, ValueKind(4, "float")),
]


def main():
    print(f"{'dataset':<16}{'nnz':>14}{'val':>5}{'CSC bytes':>16}{'GiB':>9}{'GB':>9}")
    for name, nrows, ncols, nnz, kind in DATASETS:
        r = header_report(Dims(nrows, ncols), nnz, kind)
        print(f"{name:<16}{nnz:>14}{kind.val_size:>5}{r.csc_bytes:>16}{r.gib('csc_bytes'):>9.3f}{r.gb('csc_bytes'):>9.3f}")


if __name__ == "__main__":
    main()
