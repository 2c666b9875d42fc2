import numpy as np

from centerbias.optimizers import ObjectiveHandle


class RecordingHandle(ObjectiveHandle):
    """Objective handle that keeps every submitted point and value."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.points = []
        self.values = []

    def evaluate_batch(self, points):
        values = super().evaluate_batch(points)
        self.points.append(np.array(points[: values.shape[0]], copy=True))
        self.values.append(values.copy())
        return values

    def all_points(self) -> np.ndarray:
        return np.concatenate(self.points, axis=0)

    def all_values(self) -> np.ndarray:
        return np.concatenate(self.values)
