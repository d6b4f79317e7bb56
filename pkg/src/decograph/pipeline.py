"""Spectral classification of labelled graph datasets.

Graphs are optionally coarsened onto a partition of their nodes, turned
into truncated spectra per channel, and classified by an l1-penalized
linear SVM.  Accuracy is estimated by leave-one-out cross-validation and
its significance by a label-permutation test.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import highspy
import numpy as np

from .errors import DecographError, DomainError, ParseError, ValidationError
from .graphon import WeightedGraph
from .spectral import (
    apply_standardizer,
    channel_measure,
    feature_names,
    fit_standardizer,
    truncate_features,
)


@dataclass(frozen=True)
class Item:
    id: str
    label: int
    channels: dict


@dataclass
class Dataset:
    """Labelled items, each carrying one weighted graph per named channel."""

    items: list

    def __post_init__(self):
        self.items = list(self.items)
        if not self.items:
            raise ValidationError("dataset has no items")
        names = set(self.items[0].channels)
        sizes = {}
        for item in self.items:
            if item.label not in (0, 1):
                raise ValidationError(f"item {item.id!r}: label must be 0 or 1, got {item.label!r}")
            if set(item.channels) != names:
                raise ValidationError(
                    f"item {item.id!r}: channels {sorted(item.channels)} differ from {sorted(names)}"
                )
            for name, graph in item.channels.items():
                if sizes.setdefault(name, graph.k) != graph.k:
                    raise ValidationError(
                        f"item {item.id!r}: channel {name!r} has {graph.k} nodes, expected {sizes[name]}"
                    )
        if len({item.label for item in self.items}) != 2:
            raise ValidationError("dataset must contain both classes 0 and 1")

    @property
    def labels(self) -> np.ndarray:
        return np.array([item.label for item in self.items])

    @property
    def channel_names(self) -> list[str]:
        return list(self.items[0].channels)

    def __len__(self):
        return len(self.items)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return len(self) == len(other) and all(
            a.id == b.id and a.label == b.label and a.channels.keys() == b.channels.keys()
            and all(a.channels[c] == b.channels[c] for c in a.channels)
            for a, b in zip(self.items, other.items)
        )

    def to_dict(self) -> dict:
        return {
            "items": [
                {"id": it.id, "label": it.label,
                 "channels": {name: g.to_dict() for name, g in it.channels.items()}}
                for it in self.items
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Dataset":
        if not isinstance(data, dict) or not isinstance(data.get("items"), list):
            raise ParseError("dataset: expected an object with an 'items' list")
        items = []
        for i, raw in enumerate(data["items"]):
            where = f"items[{i}]"
            try:
                item_id = str(raw["id"])
                label = raw["label"]
                channels = raw["channels"]
            except (KeyError, TypeError) as exc:
                raise ParseError(f"{where}: missing field {exc}") from exc
            if not isinstance(label, int) or isinstance(label, bool):
                raise ParseError(f"{where}.label: expected an integer, got {label!r}")
            if not isinstance(channels, dict):
                raise ParseError(f"{where}.channels: expected an object")
            graphs = {}
            for name, g in channels.items():
                try:
                    graphs[name] = WeightedGraph.from_dict(g)
                except DecographError as exc:
                    raise type(exc)(f"{where}.channels.{name} (id {item_id!r}): {exc}") from exc
            items.append(Item(item_id, label, graphs))
        return cls(items)


def load_dataset(path) -> Dataset:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return Dataset.from_dict(data)


def save_dataset(ds: Dataset, path) -> None:
    Path(path).write_text(json.dumps(ds.to_dict()) + "\n")


@dataclass(frozen=True, eq=False)
class Partition:
    """Assignment of node ``i`` to group ``groups[i]`` in ``0..g-1``."""

    groups: np.ndarray

    def __post_init__(self):
        groups = np.array(self.groups)
        if groups.ndim != 1 or groups.size == 0:
            raise ValidationError("partition needs a nonempty 1-d group list")
        if not np.issubdtype(groups.dtype, np.integer):
            raise ValidationError("group indices must be integers")
        if groups.min() < 0:
            raise DomainError("every node must be assigned a nonnegative group")
        present = np.unique(groups)
        if not np.array_equal(present, np.arange(present.size)):
            raise ValidationError("groups must cover 0..g-1 without gaps")
        groups.setflags(write=False)
        object.__setattr__(self, "groups", groups)

    @property
    def g(self) -> int:
        return int(self.groups.max()) + 1

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.groups, minlength=self.g)

    def indicator(self) -> np.ndarray:
        M = np.zeros((self.groups.size, self.g))
        M[np.arange(self.groups.size), self.groups] = 1.0
        return M

    def compose(self, coarser: "Partition") -> "Partition":
        """Partition of the original nodes after applying ``coarser`` to the groups."""
        if coarser.groups.size != self.g:
            raise DomainError(f"coarser partition covers {coarser.groups.size} groups, expected {self.g}")
        return Partition(coarser.groups[self.groups])


def load_partition(path) -> Partition:
    try:
        data = json.loads(Path(path).read_text())
        return Partition(np.asarray(data["groups"], dtype=int))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: expected {{\"groups\": [...]}}") from exc


def coarsen(G: WeightedGraph, P: Partition, node_weights=None, keep_diagonal: bool = False) -> WeightedGraph:
    """Average weights between groups.

    The weight between groups ``I != J`` is the mean of ``A[i, j]`` over
    ``i in I, j in J``, each pair weighted by ``node_weights[i] *
    node_weights[j]`` when given.  Pass a partition's group sizes as
    ``node_weights`` when coarsening an already coarsened graph and the
    result matches a single coarsening with the composed partition.

    Within-group averages are dropped so the result keeps a zero diagonal.
    ``keep_diagonal=True`` returns them instead, as a plain array, since a
    graph with self-loops is not a :class:`WeightedGraph`.
    """
    if P.groups.size != G.k:
        raise DomainError(f"partition covers {P.groups.size} nodes, graph has {G.k}")
    w = np.ones(G.k) if node_weights is None else np.asarray(node_weights, dtype=float)
    M = P.indicator() * w[:, None]
    sums = M.T @ G.weights @ M
    mass = M.sum(axis=0)
    pair_mass = np.outer(mass, mass) - np.diag((M**2).sum(axis=0))
    coarse = np.divide(sums, pair_mass, out=np.zeros_like(sums), where=pair_mass > 0)
    if keep_diagonal:
        return coarse
    np.fill_diagonal(coarse, 0.0)
    return WeightedGraph(coarse)


@dataclass(frozen=True)
class FeatureConfig:
    """Which ``(channel, kind)`` pairs to extract and how many atoms per end."""

    pairs: tuple
    r: int
    abs_order: bool = False
    partition: Partition | None = None

    @classmethod
    def build(cls, channels, kinds, r, abs_order=False, partition=None) -> "FeatureConfig":
        pairs = tuple((c, kind) for c in channels for kind in kinds)
        return cls(pairs, int(r), abs_order, partition)


def extract_features(ds: Dataset, config: FeatureConfig, standardize: bool = True):
    """Feature matrix ``(n, 2 r * len(pairs))`` and its column names."""
    rows = []
    for item in ds.items:
        parts = []
        for channel, kind in config.pairs:
            if channel not in item.channels:
                raise DomainError(f"item {item.id!r} has no channel {channel!r}")
            graph = item.channels[channel]
            if config.partition is not None:
                graph = coarsen(graph, config.partition)
            parts.append(truncate_features(channel_measure(graph, kind), config.r, config.abs_order))
        rows.append(np.concatenate(parts))
    X = np.vstack(rows)
    names = [n for channel, kind in config.pairs for n in feature_names(config.r, kind, channel)]
    if standardize:
        mean, scale = fit_standardizer(X)
        X = apply_standardizer(X, mean, scale)
    return X, names


@dataclass(frozen=True)
class LinearClassifier:
    """``sign(w . x + b)`` with labels mapped back to the two training classes."""

    w: np.ndarray
    b: float
    classes: tuple = (0, 1)
    objective: float = float("nan")

    def decision_function(self, X) -> np.ndarray:
        return np.atleast_2d(np.asarray(X, dtype=float)) @ self.w + self.b

    def predict(self, X) -> np.ndarray:
        # a zero score goes to the second class
        score = self.decision_function(X)
        return np.where(score >= 0, self.classes[1], self.classes[0])


def _signed_labels(y):
    y = np.asarray(y)
    classes = np.unique(y)
    if classes.size != 2:
        raise DomainError(f"need exactly two classes, found {classes.size}")
    return np.where(y == classes[1], 1.0, -1.0), (classes[0].item(), classes[1].item())


def hinge_l1_objective(X, y, w, b, lam) -> float:
    s, _ = _signed_labels(y)
    margins = s * (np.asarray(X, dtype=float) @ w + b)
    return float(np.mean(np.maximum(0.0, 1.0 - margins)) + lam * np.abs(w).sum())


def train_l1_linear(X, y, lam: float) -> LinearClassifier:
    """Minimize ``mean hinge loss + lam * ||w||_1`` exactly.

    The linear program is solved in its dual form, over one variable per
    sample::

        max sum(alpha)  s.t.  0 <= alpha_i <= 1/n,  sum_i alpha_i s_i = 0,
                              |sum_i alpha_i s_i x_ij| <= lam  for every j,

    with ``s_i = +-1``.  The weights and the intercept are the multipliers
    of the feature rows and of the balance row.  The intercept is not
    penalized.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise DomainError(f"need an n x p matrix with n >= 2, got shape {X.shape}")
    if lam < 0:
        raise DomainError(f"penalty must be nonnegative, got {lam}")
    s, classes = _signed_labels(y)
    n, p = X.shape
    rows = np.vstack([(s[:, None] * X).T, s[None, :]])

    lp = highspy.HighsLp()
    lp.num_col_ = n
    lp.num_row_ = p + 1
    lp.col_cost_ = np.full(n, -1.0)
    lp.col_lower_ = np.zeros(n)
    lp.col_upper_ = np.full(n, 1.0 / n)
    lp.row_lower_ = np.append(np.full(p, -float(lam)), 0.0)
    lp.row_upper_ = np.append(np.full(p, float(lam)), 0.0)
    lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
    lp.a_matrix_.start_ = np.arange(0, (p + 1) * n + 1, p + 1, dtype=np.int32)
    lp.a_matrix_.index_ = np.tile(np.arange(p + 1, dtype=np.int32), n)
    lp.a_matrix_.value_ = np.ascontiguousarray(rows.T).ravel()

    solver = highspy.Highs()
    solver.setOptionValue("output_flag", False)
    solver.setOptionValue("presolve", "off")
    solver.passModel(lp)
    solver.run()
    status = solver.getModelStatus()
    if status != highspy.HighsModelStatus.kOptimal:
        raise DecographError(f"linear program failed: {solver.modelStatusToString(status)}")
    duals = -np.asarray(solver.getSolution().row_dual)
    w = duals[:p]
    w[np.abs(w) < 1e-12] = 0.0
    b = float(duals[p])
    return LinearClassifier(w, b, classes, hinge_l1_objective(X, y, w, b, lam))


@dataclass
class CVResult:
    accuracy: float
    predictions: np.ndarray
    correct: np.ndarray = field(repr=False)


def loocv_predict(X, y, lam: float) -> CVResult:
    """Leave-one-out predictions; standardization is refit inside every fold.

    A fold whose training part holds a single class predicts that class.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    n = len(y)
    if n < 3:
        raise DomainError(f"leave-one-out needs at least 3 items, got {n}")
    preds = np.empty_like(y)
    for i in range(n):
        train = np.arange(n) != i
        seen = np.unique(y[train])
        if seen.size == 1:
            # the held-out item was the only member of its class
            preds[i] = seen[0]
            continue
        mean, scale = fit_standardizer(X[train])
        model = train_l1_linear(apply_standardizer(X[train], mean, scale), y[train], lam)
        preds[i] = model.predict(apply_standardizer(X[i:i + 1], mean, scale))[0]
    correct = preds == y
    return CVResult(float(correct.mean()), preds, correct)


def loocv_accuracy(X, y, lam: float) -> float:
    return loocv_predict(X, y, lam).accuracy


def permutation_pvalue(X, y, lam: float, n_perm: int = 99, seed=None,
                       observed: float | None = None) -> tuple[float, float, np.ndarray]:
    """Add-one Monte Carlo p-value of the LOOCV accuracy under label permutation.

    Returns ``(p_value, observed_accuracy, permuted_accuracies)``.
    """
    if n_perm < 19:
        raise DomainError(f"use at least 19 permutations, got {n_perm}")
    y = np.asarray(y)
    if observed is None:
        observed = loocv_accuracy(X, y, lam)
    rng = np.random.default_rng(seed)
    null = np.array([loocv_accuracy(X, rng.permutation(y), lam) for _ in range(n_perm)])
    p = (1 + np.count_nonzero(null >= observed)) / (1 + n_perm)
    return float(p), float(observed), null


def loocv(ds: Dataset, config: FeatureConfig, lam: float) -> CVResult:
    X, _ = extract_features(ds, config, standardize=False)
    return loocv_predict(X, ds.labels, lam)


def permutation_test(ds: Dataset, config: FeatureConfig, lam: float, n_perm: int = 99,
                     seed=None) -> tuple[float, float]:
    """``(p_value, observed_accuracy)`` for a dataset."""
    X, _ = extract_features(ds, config, standardize=False)
    p, observed, _ = permutation_pvalue(X, ds.labels, lam, n_perm, seed)
    return p, observed
