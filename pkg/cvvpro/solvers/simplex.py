"""Sort-based Euclidean projection onto the probability simplex"""
import numpy as np


def project_onto_simplex(y: np.ndarray, total: float = 1.0) -> np.ndarray:
    """Project y onto {x | x >= 0, sum(x) = total}

    Sorts y in decreasing order, finds the last index whose running threshold
    stays below the sorted value and shifts by that threshold.
    """
    y = np.asarray(y, dtype=float)
    if total <= 0:
        raise ValueError("simplex total must be positive")

    u = np.sort(y)[::-1]
    thresholds = (np.cumsum(u) - total) / np.arange(1, y.shape[0] + 1)
    k = np.nonzero(thresholds < u)[0][-1]
    return np.maximum(y - thresholds[k], 0.0)
