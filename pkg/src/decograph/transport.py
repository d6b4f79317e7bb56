"""Exact 1-Wasserstein distances on the line and between measure ensembles."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import DomainError, MassMismatchError, ShapeError, SizeError
from .motifs import PointMeasure
from .spectral import MeasureEnsemble

MASS_TOL = 1e-9
MAX_REPLICATED_SIZE = 10**4


@dataclass(frozen=True)
class CouplingPlan:
    """Transport plan as ``(source atom, target atom, mass)`` triples."""

    pairs: tuple
    objective: float

    def marginals(self, n_source: int, n_target: int) -> tuple[np.ndarray, np.ndarray]:
        src = np.zeros(n_source)
        dst = np.zeros(n_target)
        for i, j, mass in self.pairs:
            src[i] += mass
            dst[j] += mass
        return src, dst


def _check_masses(mu: PointMeasure, nu: PointMeasure) -> None:
    if abs(mu.masses.sum() - nu.masses.sum()) > MASS_TOL:
        raise MassMismatchError(
            f"total masses differ: {mu.masses.sum():.12g} vs {nu.masses.sum():.12g}"
        )


def _monotone_coupling(mu: PointMeasure, nu: PointMeasure):
    """Quantile coupling: pair the u-quantiles of both measures for every u."""
    oa = np.argsort(mu.values, kind="stable")
    ob = np.argsort(nu.values, kind="stable")
    ca = np.cumsum(mu.masses[oa])
    cb = np.cumsum(nu.masses[ob])
    breaks = np.union1d(ca, cb)
    breaks = breaks[breaks < 1.0 - 1e-15]
    breaks = np.concatenate([[0.0], breaks, [1.0]])
    widths = np.diff(breaks)
    mids = breaks[:-1] + widths / 2
    ia = np.minimum(np.searchsorted(ca, mids, side="right"), len(ca) - 1)
    ib = np.minimum(np.searchsorted(cb, mids, side="right"), len(cb) - 1)
    return oa[ia], ob[ib], widths


def wasserstein_1d(mu: PointMeasure, nu: PointMeasure, return_plan: bool = False):
    """``W1(mu, nu)`` by the monotone coupling, which is optimal on the line.

    With ``return_plan=True`` returns ``(cost, CouplingPlan)``.
    """
    _check_masses(mu, nu)
    if not return_plan and mu.size == nu.size and mu.is_uniform() and nu.is_uniform():
        return float(np.mean(np.abs(np.sort(mu.values) - np.sort(nu.values))))
    src, dst, widths = _monotone_coupling(mu, nu)
    cost = float(np.dot(widths, np.abs(mu.values[src] - nu.values[dst])))
    if not return_plan:
        return cost
    pairs = tuple((int(i), int(j), float(w)) for i, j, w in zip(src, dst, widths) if w > 0)
    return cost, CouplingPlan(pairs, cost)


def wasserstein_1d_vs_uniform(mu: PointMeasure) -> float:
    """Exact ``W1(mu, Unif[0, 1]) = int_0^1 |F(x) - x| dx``.

    ``F`` is constant between consecutive atoms and ``(t - c)|t - c|/2`` is
    an antiderivative of ``|t - c|``, so the integral is a finite sum.
    """
    if np.any(mu.values < 0) or np.any(mu.values > 1):
        raise DomainError("atoms must lie in [0, 1] to compare with Unif[0, 1]")
    order = np.argsort(mu.values, kind="stable")
    x = mu.values[order]
    cdf = np.cumsum(mu.masses[order])
    cdf[-1] = 1.0
    left = np.concatenate([[0.0], x])
    right = np.concatenate([x, [1.0]])
    level = np.concatenate([[0.0], cdf])

    def antiderivative(t):
        return (t - level) * np.abs(t - level) / 2

    return float(np.sum(antiderivative(right) - antiderivative(left)))


def assignment_solve(cost) -> tuple[np.ndarray, float]:
    """Minimum-cost perfect assignment; ``perm[i]`` is the column matched to row ``i``."""
    C = np.asarray(cost, dtype=float)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ShapeError(f"assignment needs a square cost matrix, got shape {C.shape}")
    if not np.all(np.isfinite(C)):
        raise DomainError("assignment costs must be finite")
    rows, cols = linear_sum_assignment(C)
    perm = np.empty(C.shape[0], dtype=np.intp)
    perm[rows] = cols
    return perm, float(C[rows, cols].sum())


def _uniform_block(members) -> np.ndarray | None:
    sizes = {mu.size for mu in members}
    if len(sizes) != 1 or not all(mu.is_uniform() for mu in members):
        return None
    return np.stack([np.sort(mu.values) for mu in members])


def wasserstein_matrix(left, right, chunk: int = 2**22) -> np.ndarray:
    """Pairwise ``W1`` between the members of two collections of measures."""
    left, right = list(left), list(right)
    a = _uniform_block(left)
    b = _uniform_block(right)
    if a is not None and b is not None and a.shape[1] == b.shape[1]:
        q = a.shape[1]
        out = np.empty((len(a), len(b)))
        rows = max(1, chunk // max(1, len(b) * q))
        for start in range(0, len(a), rows):
            block = a[start:start + rows]
            out[start:start + rows] = np.abs(block[:, None, :] - b[None, :, :]).mean(axis=2)
        return out
    return np.array([[wasserstein_1d(mu, nu) for nu in right] for mu in left])


def nested_wasserstein(L1: MeasureEnsemble, L2: MeasureEnsemble, return_plan: bool = False):
    """Wasserstein distance between ensembles with ground cost ``W1``.

    Optimal couplings of uniform empirical measures of equal size are
    permutations, so this is an assignment problem.  Unequal sizes are
    replicated to ``lcm(n1, n2)`` members each.
    """
    n1, n2 = len(L1), len(L2)
    size = math.lcm(n1, n2)
    if size > MAX_REPLICATED_SIZE:
        raise SizeError(f"lcm({n1}, {n2}) = {size} exceeds {MAX_REPLICATED_SIZE}")
    base = wasserstein_matrix(L1.members, L2.members)
    cost = np.repeat(np.repeat(base, size // n1, axis=0), size // n2, axis=1)
    perm, total = assignment_solve(cost)
    value = total / size
    if not return_plan:
        return value
    pairs = tuple((i // (size // n1), int(perm[i]) // (size // n2), 1.0 / size) for i in range(size))
    return value, CouplingPlan(pairs, value)
