"""Spectral and degree features of weighted graphs.

All three channels return probability measures with ``k`` atoms of mass
``1/k``:

* adjacency -- eigenvalues of ``A/k`` (in [-1, 1]);
* laplacian -- eigenvalues of ``(D - A)/k`` (in [0, 2]), stored shifted by
  ``-1`` so that they lie in [-1, 1];
* degree -- normalized degrees ``(1/k) sum_j A_ij`` (in [0, 1]).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .graphon import WeightedGraph
from .motifs import PointMeasure

CHANNELS = ("adjacency", "laplacian", "degree")
CHANNEL_PREFIX = {"adjacency": "adj", "laplacian": "lap", "degree": "deg"}
LAPLACIAN_SHIFT = -1.0


def adjacency_spectrum(G: WeightedGraph) -> PointMeasure:
    return PointMeasure.uniform(np.linalg.eigvalsh(G.weights / G.k))


def laplacian_spectrum(G: WeightedGraph) -> PointMeasure:
    A = G.weights
    L = np.diag(A.sum(axis=1)) - A
    return PointMeasure.uniform(np.linalg.eigvalsh(L / G.k) + LAPLACIAN_SHIFT)


def degree_measure(G: WeightedGraph) -> PointMeasure:
    return PointMeasure.uniform(G.weights.sum(axis=1) / G.k)


_CHANNEL_FN = {
    "adjacency": adjacency_spectrum,
    "laplacian": laplacian_spectrum,
    "degree": degree_measure,
}


def channel_measure(G: WeightedGraph, channel: str) -> PointMeasure:
    try:
        fn = _CHANNEL_FN[channel]
    except KeyError:
        raise DomainError(f"unknown channel {channel!r}; expected one of {CHANNELS}") from None
    return fn(G)


@dataclass(frozen=True)
class MeasureEnsemble:
    """Empirical measure over point measures, each member of mass ``1/n``."""

    members: tuple

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValidationError("an ensemble needs at least one member")
        if not all(isinstance(mu, PointMeasure) for mu in members):
            raise ValidationError("ensemble members must be PointMeasures")
        object.__setattr__(self, "members", members)

    @property
    def n(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i):
        return self.members[i]

    def replicated(self, times: int) -> "MeasureEnsemble":
        return MeasureEnsemble(tuple(mu for mu in self.members for _ in range(times)))


def ensemble(graphs, channel: str = "adjacency") -> MeasureEnsemble:
    return MeasureEnsemble(tuple(channel_measure(g, channel) for g in graphs))


def truncate_features(spec: PointMeasure, r: int, abs_order: bool = False) -> np.ndarray:
    """The ``r`` smallest and ``r`` largest atoms, concatenated.

    By default atoms are ordered by signed value.  With ``abs_order`` they
    are ordered by absolute value, so the result holds the ``r`` atoms
    closest to zero followed by the ``r`` atoms of largest magnitude.
    Ties keep the original atom order.
    """
    if int(r) != r or r < 1:
        raise DomainError(f"r must be a positive integer, got {r}")
    r = int(r)
    if spec.size < 2 * r:
        raise DomainError(f"need at least {2 * r} atoms to keep {r} from each end, got {spec.size}")
    key = np.abs(spec.values) if abs_order else spec.values
    order = np.argsort(key, kind="stable")
    ordered = spec.values[order]
    return np.concatenate([ordered[:r], ordered[-r:]])


def feature_names(r: int, channel: str, prefix: str | None = None) -> list[str]:
    short = CHANNEL_PREFIX.get(channel, channel)
    head = f"{prefix}_{short}" if prefix else short
    return [f"{head}_low_{i}" for i in range(1, r + 1)] + [f"{head}_high_{i}" for i in range(1, r + 1)]


CONSTANT_RTOL = 1e-12


def fit_standardizer(X) -> tuple[np.ndarray, np.ndarray]:
    """Column means and population standard deviations.

    Constant columns get scale 0 and are mapped to zero by
    :func:`apply_standardizer`.  A column counts as constant when its range
    is within ``CONSTANT_RTOL`` of its magnitude, so eigenvalues that agree
    up to rounding (the Laplacian's zero, for instance) are not blown up
    into unit-variance noise.
    """
    X = np.asarray(X, dtype=float)
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    spread = X.max(axis=0) - X.min(axis=0)
    scale[spread <= CONSTANT_RTOL * np.maximum(1.0, np.abs(X).max(axis=0))] = 0.0
    return mean, scale


def apply_standardizer(X, mean, scale) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    safe = np.where(scale > 0, scale, 1.0)
    return np.where(scale > 0, (X - mean) / safe, 0.0)


def standardize(X) -> np.ndarray:
    """Zero mean and unit population standard deviation per column."""
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DomainError(f"standardize needs an n x p matrix with n >= 2, got shape {X.shape}")
    mean, scale = fit_standardizer(X)
    return apply_standardizer(X, mean, scale)


def format_number(x: float) -> str:
    return f"{x:.12g}"


def features_to_csv(X, names, row_ids=None) -> str:
    """CSV text with a header row; numbers use 12 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    header = list(names)
    if row_ids is not None:
        header = ["id"] + header
    writer.writerow(header)
    for i, row in enumerate(X):
        cells = [format_number(x) for x in row]
        if row_ids is not None:
            cells = [row_ids[i]] + cells
        writer.writerow(cells)
    return buf.getvalue()
