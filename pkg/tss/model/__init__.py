from .series import TimeSeries, require_same_shape
from .dataset import LabeledDataset

__all__ = ["TimeSeries", "LabeledDataset", "require_same_shape"]
