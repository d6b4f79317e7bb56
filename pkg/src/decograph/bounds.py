"""Cut-distance lower bounds from motif densities and spectra.

Two groups of ``n`` graphs on ``k`` nodes each are sampled from decorated
graphons with expectations ``W`` and ``W'``.  The functions here turn the
distance between the groups' empirical density measures (or nested
Wasserstein distance between their spectra) into a lower bound on
``delta_cut(W, W')`` together with the probability that the bound holds.

Conventions fixed here:

* probability expressions carry a negative exponent,
  ``1 - 2 exp(-k n^(-2/3) / (2 e(F)^2)) - 2 exp(-0.09 c n^(2/3))``, and are
  clamped to [0, 1];
* bounds are returned unclamped, a negative bound means "uninformative";
* the absolute constant ``c`` is a parameter (default 1.0), so every
  confidence value is c-dependent;
* the unequal-sample motif bound subtracts ``5 (n1^(-1/3) + n2^(-1/3))``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DomainError
from .graphon import DecoratedGraphon, sample_edge_densities, sample_graph_components, spawn_seeds
from .motifs import Motif, PointMeasure, empirical_density_measure, hom_density_graphon, hom_density_union
from .spectral import ensemble
from .transport import nested_wasserstein, wasserstein_1d, wasserstein_1d_vs_uniform

LOG_4E = math.log(4 * math.e)
MEAN_W1_CONSTANT = 3.6462


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, x))


def _positive(name, value):
    if not value > 0:
        raise DomainError(f"{name} must be positive, got {value}")


def thm1_bound(dist: float, eF: int, n: int) -> float:
    """``(dist - 9 n^(-1/3)) / e(F)``."""
    _positive("e(F)", eF)
    _positive("n", n)
    return (dist - 9.0 * n ** (-1 / 3)) / eF


def thm1_confidence(k: int, n: int, eF: int, c: float = 1.0) -> float:
    for name, value in (("k", k), ("n", n), ("e(F)", eF), ("c", c)):
        _positive(name, value)
    return _clamp01(
        1.0
        - 2.0 * math.exp(-k * n ** (-2 / 3) / (2.0 * eF**2))
        - 2.0 * math.exp(-0.09 * c * n ** (2 / 3))
    )


def _spectral_coefficient(v: int) -> float:
    # v^-2 2^-1 (4e)^-v, evaluated in the log domain
    return math.exp(-(2.0 * math.log(v) + math.log(2.0) + v * LOG_4E))


def thm2_bound(nested_dist: float, v: int, n: int) -> float:
    """``v^-2 2^-1 (4e)^-v (d - 3/(pi v) - 18 v (4e)^v n^(-1/3))``.

    The sampling term simplifies to ``9 n^(-1/3) / v`` after multiplying
    out, so no power of ``4e`` is ever formed.
    """
    _positive("v", v)
    _positive("n", n)
    return _spectral_coefficient(v) * (nested_dist - 3.0 / (math.pi * v)) - 9.0 * n ** (-1 / 3) / v


def thm2_confidence(k: int, n: int, v: int, c: float = 1.0) -> float:
    for name, value in (("k", k), ("n", n), ("v", v), ("c", c)):
        _positive(name, value)
    return _clamp01(
        1.0
        - 2.0 * v * math.exp(-k * n ** (-2 / 3) / (2.0 * v**2))
        - 2.0 * v * math.exp(-0.09 * c * n ** (2 / 3))
    )


def hetero_thm1_bound(dist: float, eF: int, n1: int, n2: int) -> float:
    _positive("e(F)", eF)
    _positive("n1", n1)
    _positive("n2", n2)
    return (dist - 5.0 * n1 ** (-1 / 3) - 5.0 * n2 ** (-1 / 3)) / eF


def hetero_thm1_confidence(k: int, n1: int, n2: int, eF: int, c: float = 1.0) -> float:
    for name, value in (("k", k), ("n1", n1), ("n2", n2), ("e(F)", eF), ("c", c)):
        _positive(name, value)
    slack = sum(
        math.exp(-k * n ** (-2 / 3) / (2.0 * eF**2)) + math.exp(-0.09 * c * n ** (2 / 3))
        for n in (n1, n2)
    )
    return _clamp01(1.0 - slack)


def hetero_thm2_bound(nested_dist: float, v: int, n1: int, n2: int) -> float:
    _positive("v", v)
    _positive("n1", n1)
    _positive("n2", n2)
    sampling = 9.0 * (n1 ** (-1 / 3) + n2 ** (-1 / 3)) / v
    return _spectral_coefficient(v) * (nested_dist - 3.0 / (math.pi * v)) - sampling


def hetero_thm2_confidence(k: int, n1: int, n2: int, v: int, c: float = 1.0) -> float:
    for name, value in (("k", k), ("n1", n1), ("n2", n2), ("v", v), ("c", c)):
        _positive(name, value)
    slack = sum(
        v * math.exp(-k * n ** (-2 / 3) / (2.0 * v**2)) + v * math.exp(-0.09 * c * n ** (2 / 3))
        for n in (n1, n2)
    )
    return _clamp01(1.0 - slack)


@dataclass
class SeparationReport:
    """Outcome of a two-group separation test.

    ``verdict`` is ``"distinct"`` exactly when the bound is positive and the
    confidence reaches the requested threshold.
    """

    distance: float
    bound: float
    confidence: float
    params: dict = field(default_factory=dict)
    verdict: str = "inconclusive"

    def __post_init__(self):
        self.confidence = _clamp01(self.confidence)

    @classmethod
    def decide(cls, distance, bound, confidence, threshold, params) -> "SeparationReport":
        confidence = _clamp01(confidence)
        verdict = "distinct" if bound > 0 and confidence >= threshold else "inconclusive"
        return cls(float(distance), float(bound), confidence, dict(params), verdict)

    @property
    def distinct(self) -> bool:
        return self.verdict == "distinct"

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _graph_size(graphs1, graphs2) -> int:
    sizes = {g.k for g in graphs1} | {g.k for g in graphs2}
    if len(sizes) != 1:
        raise DomainError(f"all graphs must have the same node count, found {sorted(sizes)}")
    return sizes.pop()


def motif_separation(densities1, densities2, eF: int, k: int, c: float = 1.0,
                     threshold: float = 0.9, motif: str | None = None) -> SeparationReport:
    """Separation report from two samples of motif densities."""
    t1 = PointMeasure.uniform(np.clip(densities1, 0.0, 1.0))
    t2 = PointMeasure.uniform(np.clip(densities2, 0.0, 1.0))
    n1, n2 = t1.size, t2.size
    dist = wasserstein_1d(t1, t2)
    if n1 == n2:
        bound = thm1_bound(dist, eF, n1)
        confidence = thm1_confidence(k, n1, eF, c)
    else:
        bound = hetero_thm1_bound(dist, eF, n1, n2)
        confidence = hetero_thm1_confidence(k, n1, n2, eF, c)
    params = {"n1": n1, "n2": n2, "k": k, "eF": eF, "c": c, "threshold": threshold}
    if motif is not None:
        params["motif"] = motif
    return SeparationReport.decide(dist, bound, confidence, threshold, params)


def equality_test_motif(graphs1, graphs2, F: Motif, k: int | None = None, c: float = 1.0,
                        threshold: float = 0.9) -> SeparationReport:
    """Test whether two groups come from graphons that differ in cut distance,
    using the empirical measures of ``t(F, G)``."""
    graphs1, graphs2 = list(graphs1), list(graphs2)
    k = _graph_size(graphs1, graphs2) if k is None else k
    if F.e == 0:
        raise DomainError("motif needs at least one edge")
    t1 = empirical_density_measure(F, graphs1)
    t2 = empirical_density_measure(F, graphs2)
    return motif_separation(t1.values, t2.values, F.e, k, c, threshold, motif=f"v={F.v},e={F.e}")


def spectral_bound_scan(nested_dist: float, n1: int, n2: int, v_max: int) -> np.ndarray:
    """Spectral bound for ``v = 1..v_max``."""
    if n1 == n2:
        return np.array([thm2_bound(nested_dist, v, n1) for v in range(1, v_max + 1)])
    return np.array([hetero_thm2_bound(nested_dist, v, n1, n2) for v in range(1, v_max + 1)])


def equality_test_spectral(graphs1, graphs2, v: int | None = None, k: int | None = None,
                           c: float = 1.0, threshold: float = 0.9, v_max: int = 8,
                           channel: str = "adjacency") -> SeparationReport:
    """Test based on the nested Wasserstein distance between spectra.

    The bound is reported at ``v`` when given, otherwise at the ``v`` in
    ``1..v_max`` that maximizes it; ``params["best_v"]`` always records the
    maximizer.
    """
    graphs1, graphs2 = list(graphs1), list(graphs2)
    k = _graph_size(graphs1, graphs2) if k is None else k
    n1, n2 = len(graphs1), len(graphs2)
    dist = nested_wasserstein(ensemble(graphs1, channel), ensemble(graphs2, channel))
    scan = spectral_bound_scan(dist, n1, n2, v_max)
    best_v = int(np.argmax(scan)) + 1
    use_v = best_v if v is None else int(v)
    if n1 == n2:
        bound = thm2_bound(dist, use_v, n1)
        confidence = thm2_confidence(k, n1, use_v, c)
    else:
        bound = hetero_thm2_bound(dist, use_v, n1, n2)
        confidence = hetero_thm2_confidence(k, n1, n2, use_v, c)
    params = {"n1": n1, "n2": n2, "k": k, "v": use_v, "best_v": best_v, "v_max": v_max,
              "c": c, "threshold": threshold, "channel": channel}
    return SeparationReport.decide(dist, bound, confidence, threshold, params)


def concentration_bound(k: int, eps: float, v: int) -> float:
    """``2 exp(-k eps^2 / (2 v^2))``, the probability that ``|t(F,G) - t(F,W)| >= eps``
    may exceed."""
    return 2.0 * math.exp(-k * eps**2 / (2.0 * v**2))


def density_samples(D: DecoratedGraphon, motifs, k: int, trials: int, seed=None) -> np.ndarray:
    """``t(F, G)`` for ``trials`` independent k-samples, one column per motif.

    Graphs are sampled per support component of the graphon, so a
    block-diagonal expectation with many blocks keeps large ``k`` cheap.
    Single-edge motifs under ``none``/``bernoulli`` noise only need the edge
    density, which is drawn directly from its exact law.
    """
    motifs = list(motifs)
    if motifs and all(F.e == 1 for F in motifs) and D.noise.kind in ("none", "bernoulli"):
        edge = sample_edge_densities(D, k, trials, seed)
        return np.repeat(edge[:, None], len(motifs), axis=1)
    out = np.empty((trials, len(motifs)))
    for i, s in enumerate(spawn_seeds(seed, trials)):
        parts = sample_graph_components(D, k, s)
        out[i] = [hom_density_union(F, parts) for F in motifs]
    return out


def concentration_experiment(D: DecoratedGraphon, F: Motif, k: int, eps: float, trials: int,
                             seed=None) -> tuple[float, float]:
    """Fraction of samples with ``|t(F, G) - t(F, W)| >= eps`` and its bound."""
    if trials < 1:
        raise DomainError("need at least one trial")
    target = hom_density_graphon(F, D.expectation)
    samples = density_samples(D, [F], k, trials, seed)[:, 0]
    rate = float(np.mean(np.abs(samples - target) >= eps))
    return rate, concentration_bound(k, eps, F.v)


def mean_wasserstein_bound(n: int) -> float:
    return MEAN_W1_CONSTANT * n ** (-1 / 3)


def uniform_wasserstein_samples(n: int, trials: int, seed=None) -> np.ndarray:
    """``W1(mu_n, Unif[0,1])`` for ``trials`` empirical measures of ``n`` uniforms."""
    if n < 1 or trials < 1:
        raise DomainError("n and trials must be positive")
    return np.array([
        wasserstein_1d_vs_uniform(PointMeasure.uniform(np.random.default_rng(s).random(n)))
        for s in spawn_seeds(seed, trials)
    ])


def mean_wasserstein_experiment(n: int, trials: int, seed=None) -> tuple[float, float]:
    samples = uniform_wasserstein_samples(n, trials, seed)
    return float(samples.mean()), mean_wasserstein_bound(n)
