"""Step graphons, decorated graphons and weighted-graph sampling.

Every graphon here is a uniform-block step function: ``m`` blocks of
Lebesgue mass ``1/m`` and an ``m x m`` symmetric value table.  A decorated
graphon pairs such an expectation with a :class:`NoiseFamily` that turns a
mean ``w`` into a distribution on ``[0, 1]`` with expectation ``w``.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DomainError, ParseError, ShapeError, SizeError, ValidationError

_SYM_TOL = 1e-12
_ONE_MINUS_ULP = np.nextafter(1.0, 0.0)

CUT_NORM_MAX_BLOCKS = 16
CUT_DISTANCE_MAX_BLOCKS = 8


def _symmetric_matrix(values, name, lo, hi, zero_diagonal=False):
    arr = np.array(values, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"{name}: expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ShapeError(f"{name}: empty matrix")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: non-finite entries")
    if np.max(np.abs(arr - arr.T)) > _SYM_TOL:
        raise ValidationError(f"{name}: matrix is not symmetric")
    arr = 0.5 * (arr + arr.T)
    if arr.min() < lo or arr.max() > hi:
        raise ValidationError(
            f"{name}: entries must lie in [{lo}, {hi}], found range "
            f"[{arr.min():.6g}, {arr.max():.6g}]"
        )
    if zero_diagonal and np.any(np.diag(arr) != 0):
        raise ValidationError(f"{name}: diagonal must be zero")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StepGraphon:
    """Symmetric block-constant function on the unit square.

    ``values[i, j]`` is the value on the product of block ``i`` and block
    ``j``; block ``i`` is the interval ``[i/m, (i+1)/m)``.
    """

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _symmetric_matrix(self.values, "StepGraphon", 0.0, 1.0)
        )

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @classmethod
    def constant(cls, p: float) -> "StepGraphon":
        return cls([[p]])

    def evaluate(self, x, y):
        """Value at ``(x, y)``; accepts scalars or broadcastable arrays."""
        xa = np.asarray(x, dtype=float)
        ya = np.asarray(y, dtype=float)
        if np.any((xa < 0) | (xa > 1) | np.isnan(xa)) or np.any(
            (ya < 0) | (ya > 1) | np.isnan(ya)
        ):
            raise DomainError("graphon arguments must lie in [0, 1]")
        out = self.values[block_index(xa, self.m), block_index(ya, self.m)]
        return float(out) if out.ndim == 0 else out

    __call__ = evaluate

    def __eq__(self, other):
        if not isinstance(other, StepGraphon):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return f"StepGraphon(m={self.m})"

    def to_dict(self) -> dict:
        return {"m": self.m, "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "StepGraphon":
        try:
            m = int(data["m"])
            values = data["values"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"graphon: missing or malformed field ({exc})") from exc
        graphon = cls(values)
        if graphon.m != m:
            raise ParseError(f"graphon: field m={m} disagrees with a {graphon.m}x{graphon.m} table")
        return graphon


def block_index(x, m: int):
    """Block containing ``x``; ``x = 1`` belongs to the last block."""
    return np.floor(np.minimum(x, _ONE_MINUS_ULP) * m).astype(np.intp)


def evaluate(W: StepGraphon, x, y):
    return W.evaluate(x, y)


_NOISE_KINDS = ("none", "bernoulli", "beta", "bounded_uniform")


@dataclass(frozen=True)
class NoiseFamily:
    """Map from a mean ``w`` in [0, 1] to a distribution on [0, 1] with mean ``w``.

    * ``none`` -- point mass at ``w``
    * ``bernoulli`` -- ``P(1) = w``
    * ``beta`` -- ``Beta(kappa*w, kappa*(1-w))``; point mass when ``w`` is 0 or 1
    * ``bounded_uniform`` -- uniform on ``[w-h', w+h']`` with ``h' = min(h, w, 1-w)``
    """

    kind: str = "bernoulli"
    kappa: float | None = None
    h: float | None = None

    def __post_init__(self):
        if self.kind not in _NOISE_KINDS:
            raise ValidationError(f"unknown noise kind {self.kind!r}; expected one of {_NOISE_KINDS}")
        if self.kind == "beta":
            if self.kappa is None or not self.kappa > 0 or not math.isfinite(self.kappa):
                raise ValidationError("beta noise needs a finite concentration kappa > 0")
        if self.kind == "bounded_uniform":
            if self.h is None or not 0 <= self.h <= 0.5:
                raise ValidationError("bounded_uniform noise needs half-width h in [0, 0.5]")

    @classmethod
    def none(cls):
        return cls("none")

    @classmethod
    def bernoulli(cls):
        return cls("bernoulli")

    @classmethod
    def beta(cls, kappa: float):
        return cls("beta", kappa=float(kappa))

    @classmethod
    def bounded_uniform(cls, h: float):
        return cls("bounded_uniform", h=float(h))

    def sample(self, mean, rng: np.random.Generator) -> np.ndarray:
        w = np.asarray(mean, dtype=float)
        if self.kind == "none":
            return w.copy()
        if self.kind == "bernoulli":
            return (rng.random(w.shape) < w).astype(float)
        if self.kind == "beta":
            out = w.copy()
            inner = (w > 0) & (w < 1)
            wi = w[inner]
            out[inner] = rng.beta(self.kappa * wi, self.kappa * (1.0 - wi))
            return out
        half = np.minimum(self.h, np.minimum(w, 1.0 - w))
        return np.clip(w + half * (2.0 * rng.random(w.shape) - 1.0), 0.0, 1.0)

    def variance(self, mean) -> np.ndarray:
        w = np.asarray(mean, dtype=float)
        if self.kind == "none":
            return np.zeros_like(w)
        if self.kind == "bernoulli":
            return w * (1 - w)
        if self.kind == "beta":
            return w * (1 - w) / (self.kappa + 1)
        half = np.minimum(self.h, np.minimum(w, 1.0 - w))
        return half**2 / 3.0

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "beta":
            out["kappa"] = self.kappa
        if self.kind == "bounded_uniform":
            out["h"] = self.h
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseFamily":
        if not isinstance(data, dict) or "kind" not in data:
            raise ParseError("noise: expected an object with a 'kind' field")
        return cls(data["kind"], kappa=data.get("kappa"), h=data.get("h"))


@dataclass(frozen=True)
class DecoratedGraphon:
    """Expectation graphon plus a centered noise family."""

    expectation: StepGraphon
    noise: NoiseFamily = NoiseFamily()

    def sample(self, k: int, seed=None) -> "WeightedGraph":
        return sample_graph(self, k, seed)

    def to_dict(self) -> dict:
        return {"expectation": self.expectation.to_dict(), "noise": self.noise.to_dict()}

    @classmethod
    def from_dict(cls, data: dict) -> "DecoratedGraphon":
        if "expectation" in data:
            return cls(StepGraphon.from_dict(data["expectation"]),
                       NoiseFamily.from_dict(data.get("noise", {"kind": "bernoulli"})))
        # a bare graphon samples like a classical (Bernoulli) graphon
        return cls(StepGraphon.from_dict(data), NoiseFamily.bernoulli())


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Symmetric weight matrix with entries in [0, 1] and zero diagonal."""

    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self,
            "weights",
            _symmetric_matrix(self.weights, "WeightedGraph", 0.0, 1.0, zero_diagonal=True),
        )

    @property
    def k(self) -> int:
        return self.weights.shape[0]

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.weights.shape == other.weights.shape and bool(
            np.array_equal(self.weights, other.weights)
        )

    def __repr__(self):
        return f"WeightedGraph(k={self.k})"

    def relabel(self, perm) -> "WeightedGraph":
        perm = np.asarray(perm)
        return WeightedGraph(self.weights[np.ix_(perm, perm)])

    def to_dict(self) -> dict:
        iu = np.triu_indices(self.k, 1)
        return {"k": self.k, "weights_upper": self.weights[iu].tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "WeightedGraph":
        if not isinstance(data, dict) or "k" not in data:
            raise ParseError("graph: expected an object with a 'k' field")
        try:
            k = int(data["k"])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"graph: field k is not an integer ({exc})") from exc
        if k < 1:
            raise ParseError(f"graph: k must be positive, got {k}")
        if "weights_upper" in data:
            upper = np.asarray(data["weights_upper"], dtype=float)
            if upper.shape != (k * (k - 1) // 2,):
                raise ParseError(
                    f"graph: weights_upper has {upper.size} entries, expected {k * (k - 1) // 2}"
                )
            weights = np.zeros((k, k))
            iu = np.triu_indices(k, 1)
            weights[iu] = upper
            weights = weights + weights.T
        elif "weights" in data:
            weights = np.asarray(data["weights"], dtype=float)
            if weights.shape != (k, k):
                raise ParseError(f"graph: weights has shape {weights.shape}, expected ({k}, {k})")
        else:
            raise ParseError("graph: needs 'weights_upper' or 'weights'")
        return cls(weights)


def sample_graph(D: DecoratedGraphon, k: int, seed=None) -> WeightedGraph:
    """Draw one k-node weighted graph from a decorated graphon.

    Latent positions ``U_1..U_k`` are drawn first, then every upper-triangle
    weight from the noise family at mean ``W(U_i, U_j)``.  ``seed`` is
    anything :func:`numpy.random.default_rng` accepts.
    """
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    k = int(k)
    rng = np.random.default_rng(seed)
    blocks = block_index(rng.random(k), D.expectation.m)
    iu, ju = np.triu_indices(k, 1)
    means = D.expectation.values[blocks[iu], blocks[ju]]
    weights = np.zeros((k, k))
    weights[iu, ju] = D.noise.sample(means, rng)
    weights[ju, iu] = weights[iu, ju]
    return WeightedGraph(weights)


def spawn_seeds(seed, n: int) -> list[np.random.SeedSequence]:
    """Independent child streams, one per graph index."""
    if isinstance(seed, np.random.SeedSequence):
        return seed.spawn(n)
    return np.random.SeedSequence(seed).spawn(n)


def sample_graphs(D: DecoratedGraphon, k: int, n: int, seed=None) -> list[WeightedGraph]:
    return [sample_graph(D, k, s) for s in spawn_seeds(seed, n)]


def support_components(W: StepGraphon) -> np.ndarray:
    """Label blocks by connected component of the graphon's support."""
    _, labels = connected_components(W.values > 0, directed=False)
    return labels


def sample_graph_components(D: DecoratedGraphon, k: int, seed=None) -> list[WeightedGraph]:
    """Sample a k-graph as the list of its support components.

    Blocks in different support components never receive positive weight,
    so a sample is a disjoint union of independent pieces.  The returned
    graphs (empty pieces dropped) have sizes summing to ``k`` and their
    disjoint union has the same law as :func:`sample_graph`.  Densities of
    connected motifs are then additive over pieces (see
    :func:`decograph.motifs.hom_density_union`), which keeps large-k
    experiments on block-diagonal graphons tractable.
    """
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    rng = np.random.default_rng(seed)
    W = D.expectation
    labels = support_components(W)
    blocks = block_index(rng.random(int(k)), W.m)
    node_comp = labels[blocks]
    parts = []
    for comp in range(labels.max() + 1):
        nodes_blocks = blocks[node_comp == comp]
        size = nodes_blocks.size
        if size == 0:
            continue
        weights = np.zeros((size, size))
        if size > 1:
            iu, ju = np.triu_indices(size, 1)
            weights[iu, ju] = D.noise.sample(W.values[nodes_blocks[iu], nodes_blocks[ju]], rng)
            weights[ju, iu] = weights[iu, ju]
        parts.append(WeightedGraph(weights))
    return parts


def sample_edge_densities(D: DecoratedGraphon, k: int, n: int, seed=None) -> np.ndarray:
    """Edge densities ``t(K2, G_i)`` of ``n`` independent k-samples, without
    building the graphs.

    Only the per-block node counts and the sum of all edge weights matter.
    Node counts are multinomial; for ``none`` and ``bernoulli`` noise the
    weight sum within a block pair is deterministic resp. binomial, so each
    graph costs O(m^2).  Other noise kinds draw the individual weights.
    """
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k}")
    k, n = int(k), int(n)
    rng = np.random.default_rng(seed)
    W = D.expectation
    m = W.m
    counts = rng.multinomial(k, np.full(m, 1.0 / m), size=n)
    iu, ju = np.triu_indices(m, 1)
    pair_counts = np.concatenate(
        [counts * (counts - 1) // 2, counts[:, iu] * counts[:, ju]], axis=1
    )
    means = np.concatenate([np.diag(W.values), W.values[iu, ju]])
    kind = D.noise.kind
    if kind == "none":
        total = pair_counts @ means
    elif kind == "bernoulli":
        total = rng.binomial(pair_counts, means).sum(axis=1).astype(float)
    else:
        total = np.empty(n)
        for i in range(n):
            reps = np.repeat(means, pair_counts[i])
            total[i] = D.noise.sample(reps, rng).sum()
    return 2.0 * total / (k * k)


def graphon_of_graph(G: WeightedGraph) -> StepGraphon:
    """The step graphon with one block per node."""
    return StepGraphon(G.weights)


def refine(W: StepGraphon, factor: int) -> StepGraphon:
    """Split every block into ``factor`` equal sub-blocks; pointwise the same function."""
    if int(factor) != factor or factor < 1:
        raise DomainError(f"refinement factor must be a positive integer, got {factor}")
    return StepGraphon(np.kron(W.values, np.ones((int(factor), int(factor)))))


def _as_signed_table(S) -> np.ndarray:
    if isinstance(S, StepGraphon):
        return np.asarray(S.values, dtype=float)
    arr = np.asarray(S, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ShapeError(f"cut norm needs a nonempty square table, got shape {arr.shape}")
    return arr


def _subset_indicators(m: int) -> np.ndarray:
    codes = np.arange(1 << m, dtype=np.int64)
    return ((codes[:, None] >> np.arange(m)) & 1).astype(float)


def cut_norm(S) -> float:
    """Cut norm of a signed step function given by its ``m x m`` block table.

    For step functions the supremum over measurable ``S x T`` is attained on
    unions of blocks, so it suffices to enumerate row subsets ``A``; for a
    fixed ``A`` the best column subset takes all positive (or all negative)
    column sums.
    """
    table = _as_signed_table(S)
    m = table.shape[0]
    if m > CUT_NORM_MAX_BLOCKS:
        raise SizeError(f"exhaustive cut norm supports m <= {CUT_NORM_MAX_BLOCKS}, got {m}")
    col_sums = _subset_indicators(m) @ table
    best = np.maximum(np.clip(col_sums, 0, None).sum(axis=1), -np.clip(col_sums, None, 0).sum(axis=1))
    return float(best.max()) / (m * m)


def cut_distance_upper(W: StepGraphon, W2: StepGraphon) -> float:
    """Minimum of ``cut_norm(W - W2 o pi)`` over block permutations ``pi``.

    An upper bound on the cut distance (block permutations are a subset of
    all measure-preserving relabelings); exact when ``m == 1``.
    """
    if W.m != W2.m:
        raise ShapeError(
            f"block counts differ ({W.m} vs {W2.m}); refine both to a common block count first"
        )
    m = W.m
    if m > CUT_DISTANCE_MAX_BLOCKS:
        raise SizeError(f"permutation search supports m <= {CUT_DISTANCE_MAX_BLOCKS}, got {m}")
    ind = _subset_indicators(m)
    best = math.inf
    perms = np.array(list(itertools.permutations(range(m))), dtype=np.intp)
    for chunk in np.array_split(perms, max(1, len(perms) // 512)):
        diffs = W.values[None] - W2.values[chunk[:, :, None], chunk[:, None, :]]
        col_sums = np.einsum("sa,pab->psb", ind, diffs)
        norms = np.maximum(
            np.clip(col_sums, 0, None).sum(axis=2), -np.clip(col_sums, None, 0).sum(axis=2)
        ).max(axis=1)
        best = min(best, float(norms.min()))
    return best / (m * m)


def load_graphon(path) -> DecoratedGraphon:
    """Read a graphon or decorated-graphon JSON file.

    A bare ``{"m", "values"}`` file gets Bernoulli noise.
    """
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    return DecoratedGraphon.from_dict(data)


def save_graphon(D, path) -> None:
    Path(path).write_text(json.dumps(D.to_dict()) + "\n")


def load_graph(path) -> WeightedGraph:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    try:
        return WeightedGraph.from_dict(data)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}") from exc


def save_graph(G: WeightedGraph, path) -> None:
    Path(path).write_text(json.dumps(G.to_dict()) + "\n")
