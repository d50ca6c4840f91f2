"""Synthetic minority oversampling by nearest-neighbor interpolation.

Each synthetic point is x_i + u * (x_nn - x_i) with u ~ Uniform(0,1) and
x_nn one of the k nearest minority neighbors (Euclidean distance measured
on standardized features; interpolation happens in the original space,
which is equivalent up to the affine map). Provenance records the two
generating minority rows and u so audits can recheck every sample.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError


@dataclass
class SmoteResult:
    synthetic: np.ndarray  # (n_new, d); empty when already balanced
    provenance: list[tuple[int, int, float]] = field(default_factory=list)  # (i, neighbor, u) into X_minority
    k_used: int = 0


def smote(X_minority: np.ndarray, X_majority: np.ndarray, k: int = 5, seed: int = 0) -> SmoteResult:
    """Generate len(majority) - len(minority) synthetic minority samples."""
    X_minority = np.asarray(X_minority, dtype=float)
    X_majority = np.asarray(X_majority, dtype=float)
    n_min = len(X_minority)
    n_maj = len(X_majority)
    if n_min >= n_maj:
        return SmoteResult(synthetic=np.empty((0, X_minority.shape[1] if X_minority.ndim == 2 else 0)))
    if n_min < 2:
        raise DataError("cannot interpolate: SMOTE needs at least 2 minority samples")
    k_used = min(k, n_min - 1)

    both = np.vstack([X_minority, X_majority])
    mean = both.mean(axis=0)
    sd = both.std(axis=0)
    sd[sd == 0] = 1.0
    Z = (X_minority - mean) / sd
    # k nearest minority neighbors per minority point, excluding itself
    d2 = ((Z[:, None, :] - Z[None, :, :]) ** 2).sum(axis=2)
    np.fill_diagonal(d2, np.inf)
    neighbor_idx = np.argsort(d2, axis=1, kind="mergesort")[:, :k_used]

    rng = np.random.default_rng(seed & 0x7FFFFFFF)
    n_new = n_maj - n_min
    synthetic = np.empty((n_new, X_minority.shape[1]))
    provenance: list[tuple[int, int, float]] = []
    for t in range(n_new):
        i = t % n_min
        nn = int(neighbor_idx[i, rng.integers(k_used)])
        u = float(rng.random())
        synthetic[t] = X_minority[i] + u * (X_minority[nn] - X_minority[i])
        provenance.append((i, nn, u))
    return SmoteResult(synthetic=synthetic, provenance=provenance, k_used=k_used)


def oversample_training(X: np.ndarray, y: np.ndarray, k: int = 5, seed: int = 0):
    """Balance a binary training set with SMOTE.

    Returns (X_aug, y_aug, minority_row_indices, result). The augmented rows
    append after the originals; minority_row_indices maps the provenance
    indices back into X's row space for leakage audits.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    classes, counts = np.unique(y, return_counts=True)
    if len(classes) != 2:
        raise DataError("SMOTE oversampling requires exactly two classes")
    if counts[0] == counts[1]:
        return X, y, np.empty(0, dtype=int), SmoteResult(synthetic=np.empty((0, X.shape[1])))
    minority_label = classes[int(np.argmin(counts))]
    min_idx = np.flatnonzero(y == minority_label)
    maj_idx = np.flatnonzero(y != minority_label)
    result = smote(X[min_idx], X[maj_idx], k=k, seed=seed)
    X_aug = np.vstack([X, result.synthetic])
    y_aug = np.concatenate([y, np.full(len(result.synthetic), minority_label, dtype=y.dtype)])
    return X_aug, y_aug, min_idx, result
