from .generators import (
    gen_gaussian,
    gen_cyclic_classes,
    gen_imbalanced,
    imbalanced_counts,
    class_template,
    class_frequencies,
)
from .csv_io import DatasetParser, load_csv, save_csv

__all__ = [
    "gen_gaussian",
    "gen_cyclic_classes",
    "gen_imbalanced",
    "imbalanced_counts",
    "class_template",
    "class_frequencies",
    "DatasetParser",
    "load_csv",
    "save_csv",
]
