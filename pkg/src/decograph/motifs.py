"""Homomorphism densities of small motifs in weighted graphs and step graphons.

Two routes are provided for each density:

* brute force over all vertex maps (:func:`hom_density_graph`,
  :func:`hom_density_graphon`), the ground truth;
* closed forms for cycles (spectral power sums / traces), stars (degree
  moments) and paths (walk counts), used by :func:`hom_density`.

Star convention: with normalized degrees ``d_i = (1/k) sum_j A_ij`` the star
``S_v`` (one centre, ``v - 1`` leaves) has density ``(1/k) sum_i d_i^(v-1)``.
This is the only normalization under which the degree formula matches the
map-counting definition exactly.
"""

from __future__ import annotations

import itertools
import json
import math
import re
import string
from dataclasses import dataclass

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DomainError, ParseError, SizeError, ValidationError
from .graphon import StepGraphon, WeightedGraph

# estimated floating-point operations of the contracted sum over all maps
BRUTE_FORCE_LIMIT = 10**9
INJECTIVE_LIMIT = 10**7
MAX_BRUTE_FORCE_NODES = 8

_MASS_TOL = 1e-12


@dataclass(frozen=True)
class Motif:
    """Small simple graph on nodes ``0..v-1``."""

    v: int
    edges: frozenset

    def __post_init__(self):
        if int(self.v) != self.v or self.v < 1:
            raise ValidationError(f"motif needs at least one node, got v={self.v}")
        clean = set()
        for edge in self.edges:
            a, b = (int(x) for x in edge)
            if a == b:
                raise ValidationError(f"motif edge ({a}, {b}) is a self-loop")
            if not (0 <= a < self.v and 0 <= b < self.v):
                raise ValidationError(f"motif edge ({a}, {b}) leaves node range 0..{self.v - 1}")
            pair = (min(a, b), max(a, b))
            if pair in clean:
                raise ValidationError(f"motif edge {pair} listed twice")
            clean.add(pair)
        object.__setattr__(self, "v", int(self.v))
        object.__setattr__(self, "edges", frozenset(clean))

    @classmethod
    def from_edges(cls, v, edges):
        return cls(v, frozenset(tuple(e) for e in edges))

    @property
    def e(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.v, dtype=int)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def components(self) -> list["Motif"]:
        """Connected components, each relabelled to ``0..v_c-1``."""
        adj = np.zeros((self.v, self.v), dtype=bool)
        for a, b in self.edges:
            adj[a, b] = adj[b, a] = True
        n_comp, labels = connected_components(adj, directed=False)
        out = []
        for c in range(n_comp):
            nodes = np.flatnonzero(labels == c)
            index = {int(u): i for i, u in enumerate(nodes)}
            edges = [(index[a], index[b]) for a, b in self.edges if a in index]
            out.append(Motif.from_edges(len(nodes), edges))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def shape(self) -> str | None:
        """'cycle', 'star' or 'path' when the motif is one of those, else None."""
        if self.e == 0 or not self.is_connected():
            return None
        deg = self.degrees()
        if self.v >= 3 and self.e == self.v and np.all(deg == 2):
            return "cycle"
        if self.e == self.v - 1:
            if deg.max() == self.v - 1:
                return "star"
            if deg.max() <= 2:
                return "path"
        return None

    def __str__(self):
        return f"Motif(v={self.v}, e={self.e})"


def Edge() -> Motif:
    return Motif.from_edges(2, [(0, 1)])


def Cycle(m: int) -> Motif:
    if m < 3:
        raise DomainError(f"cycles need at least 3 nodes, got {m}")
    return Motif.from_edges(m, [(i, (i + 1) % m) for i in range(m)])


def Star(v: int) -> Motif:
    """Star on ``v`` nodes: centre 0 joined to ``v - 1`` leaves."""
    if v < 2:
        raise DomainError(f"stars need at least 2 nodes, got {v}")
    return Motif.from_edges(v, [(0, i) for i in range(1, v)])


def Path(v: int) -> Motif:
    if v < 2:
        raise DomainError(f"paths need at least 2 nodes, got {v}")
    return Motif.from_edges(v, [(i, i + 1) for i in range(v - 1)])


def Complete(v: int) -> Motif:
    if v < 1:
        raise DomainError(f"complete graphs need at least 1 node, got {v}")
    return Motif.from_edges(v, itertools.combinations(range(v), 2))


_LITERAL = re.compile(r"^([CSPK])(\d+)$")


def parse_motif(text: str) -> Motif:
    """Parse ``C3``, ``S4``, ``P3``, ``K2`` or a JSON ``{"v", "edges"}`` literal."""
    text = text.strip()
    if text.startswith("{"):
        try:
            data = json.loads(text)
            return Motif.from_edges(int(data["v"]), [tuple(e) for e in data["edges"]])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad motif JSON {text!r}: {exc}") from exc
    match = _LITERAL.match(text.upper())
    if not match:
        raise ParseError(f"bad motif literal {text!r}; expected C<m>, S<v>, P<v>, K<v> or JSON")
    kind, size = match.group(1), int(match.group(2))
    return {"C": Cycle, "S": Star, "P": Path, "K": Complete}[kind](size)


@dataclass(frozen=True, eq=False)
class PointMeasure:
    """Finite atomic probability measure on [-1, 1].

    Masses are normalized to sum to one on construction.  Coincident atoms
    are kept unless :meth:`merged` is called; nothing downstream depends on
    whether they are.
    """

    values: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float).ravel()
        masses = np.array(self.masses, dtype=float).ravel()
        if values.size == 0:
            raise ValidationError("point measure needs at least one atom")
        if values.shape != masses.shape:
            raise ValidationError("values and masses differ in length")
        if not np.all(np.isfinite(values)) or np.any(np.abs(values) > 1 + 1e-9):
            raise ValidationError("atom values must lie in [-1, 1]")
        if not np.all(masses > 0) or not np.all(np.isfinite(masses)):
            raise ValidationError("atom masses must be positive and finite")
        values = np.clip(values, -1.0, 1.0)
        masses = masses / masses.sum()
        values.setflags(write=False)
        masses.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def uniform(cls, values) -> "PointMeasure":
        values = np.asarray(values, dtype=float).ravel()
        return cls(values, np.full(values.size, 1.0 / max(values.size, 1)))

    @property
    def size(self) -> int:
        return self.values.size

    def is_uniform(self) -> bool:
        return bool(np.all(self.masses == self.masses[0]))

    def moment(self, power: int) -> float:
        return float(np.dot(self.masses, self.values**power))

    def mean(self) -> float:
        return self.moment(1)

    def merged(self) -> "PointMeasure":
        uniq, inverse = np.unique(self.values, return_inverse=True)
        return PointMeasure(uniq, np.bincount(inverse, weights=self.masses))

    def sorted_values(self) -> np.ndarray:
        return np.sort(self.values, kind="stable")

    def __repr__(self):
        return f"PointMeasure(atoms={self.size})"


def _einsum_spec(F: Motif) -> tuple[str, int] | None:
    """Einsum subscripts for the edge product, ignoring isolated nodes."""
    if F.v > len(string.ascii_letters):
        raise SizeError(f"motif too large for brute force ({F.v} nodes)")
    used = sorted({u for e in F.edges for u in e})
    if not used:
        return None
    letters = string.ascii_letters
    terms = [letters[a] + letters[b] for a, b in F.sorted_edges()]
    return ",".join(terms) + "->", len(used)


def _contraction_flops(subscripts: str, table: np.ndarray, count: int) -> float:
    report = np.einsum_path(subscripts, *([table] * count), optimize="greedy")[1]
    match = re.search(r"Optimized FLOP count:\s*([0-9.eE+]+)", report)
    return float(match.group(1)) if match else float("inf")


def _brute_force(F: Motif, table: np.ndarray) -> float:
    """Exact sum of the edge-weight product over all maps, divided by ``n^v``.

    The sum is evaluated as a tensor contraction (variable elimination), so
    a cycle costs ``O(n^3)`` rather than ``O(n^v)``; the result is the same
    sum, only the order of the additions changes.
    """
    n = table.shape[0]
    if F.v > MAX_BRUTE_FORCE_NODES:
        raise SizeError(f"brute force supports motifs with at most {MAX_BRUTE_FORCE_NODES} nodes")
    spec = _einsum_spec(F)
    if spec is None:
        return 1.0
    subscripts, used = spec
    flops = _contraction_flops(subscripts, table, F.e)
    if flops > BRUTE_FORCE_LIMIT:
        raise SizeError(
            f"summing over all {n}^{F.v} maps needs about {flops:.1e} operations "
            f"(limit {BRUTE_FORCE_LIMIT:.0e}); use hom_density for cycles, stars and paths"
        )
    # isolated nodes contribute a factor n to the count and n to the normalization
    total = np.einsum(subscripts, *([table] * F.e), optimize="greedy")
    return float(total) / float(n) ** used


def hom_density_graph(F: Motif, G: WeightedGraph) -> float:
    """Average of the edge-weight product over all ``k^v`` maps V(F) -> V(G)."""
    return _brute_force(F, G.weights)


def hom_density_graphon(F: Motif, W: StepGraphon) -> float:
    """Exact ``t(F, W)`` for a step graphon (diagonal blocks included)."""
    return _brute_force(F, W.values)


def injective_hom_density(F: Motif, G: WeightedGraph) -> float:
    """Average of the edge-weight product over injective maps only."""
    k, v = G.k, F.v
    if v > k:
        raise DomainError(f"no injective map from {v} motif nodes into {k} graph nodes")
    count = math.perm(k, v)
    if count > INJECTIVE_LIMIT:
        raise SizeError(f"{count} injective maps exceed the limit {INJECTIVE_LIMIT:.0e}")
    if F.e == 0:
        return 1.0
    maps = np.array(list(itertools.permutations(range(k), v)), dtype=np.intp)
    prod = np.ones(len(maps))
    for a, b in F.sorted_edges():
        prod *= G.weights[maps[:, a], maps[:, b]]
    return float(prod.sum()) / count


def _normalized_adjacency(G) -> np.ndarray:
    A = G.weights if isinstance(G, WeightedGraph) else np.asarray(G, dtype=float)
    return A / A.shape[0]


def cycle_density_via_spectrum(m: int, spec: PointMeasure, k: int | None = None) -> float:
    """``t(C_m, G)`` as the m-th power sum of the eigenvalues of ``A/k``.

    ``spec`` is the normalized adjacency spectrum (``k`` atoms of mass
    ``1/k``); ``k`` defaults to the number of atoms.
    """
    if m < 3:
        raise DomainError(f"cycle length must be at least 3, got {m}")
    k = spec.size if k is None else k
    return k * spec.moment(m)


def cycle_density(m: int, G: WeightedGraph) -> float:
    """``t(C_m, G) = tr((A/k)^m)`` via repeated products."""
    if m < 3:
        raise DomainError(f"cycle length must be at least 3, got {m}")
    B = _normalized_adjacency(G)
    half = np.linalg.matrix_power(B, m // 2)
    other = half @ B if m % 2 else half
    # tr(X Y) = sum(X * Y) for symmetric X, Y
    return float(np.sum(half * other))


def star_density_via_degrees(v: int, G: WeightedGraph) -> float:
    """``t(S_v, G) = (1/k) sum_i d_i^(v-1)`` with normalized degrees."""
    if v < 2:
        raise DomainError(f"stars need at least 2 nodes, got {v}")
    B = _normalized_adjacency(G)
    degrees = B.sum(axis=1)
    return float(np.mean(degrees ** (v - 1)))


def path_density(v: int, G: WeightedGraph) -> float:
    """``t(P_v, G) = k^-v 1' A^(v-1) 1``."""
    if v < 2:
        raise DomainError(f"paths need at least 2 nodes, got {v}")
    B = _normalized_adjacency(G)
    x = np.ones(B.shape[0])
    for _ in range(v - 1):
        x = B @ x
    return float(np.mean(x))


def _connected_density(F: Motif, G: WeightedGraph) -> float:
    shape = F.shape()
    if shape == "cycle":
        return cycle_density(F.v, G)
    if shape == "star":
        return star_density_via_degrees(F.v, G)
    if shape == "path":
        return path_density(F.v, G)
    return hom_density_graph(F, G)


def hom_density(F: Motif, G: WeightedGraph) -> float:
    """``t(F, G)`` using closed forms where available, brute force otherwise.

    Disconnected motifs factor over their components.
    """
    parts = F.components()
    if len(parts) == 1:
        return _connected_density(F, G) if F.e else 1.0
    out = 1.0
    for part in parts:
        if part.e:
            out *= _connected_density(part, G)
    return out


def hom_density_union(F: Motif, parts) -> float:
    """``t(F, G)`` for ``G`` the disjoint union of the graphs in ``parts``.

    A connected motif maps into a single piece, so
    ``t(F, G) = sum_c (k_c/k)^v t(F, G_c)``; disconnected motifs factor
    over their components.
    """
    parts = list(parts)
    sizes = np.array([g.k for g in parts], dtype=float)
    k = sizes.sum()
    out = 1.0
    for comp in F.components():
        if comp.e == 0:
            continue
        out *= sum((size / k) ** comp.v * _connected_density(comp, g) for size, g in zip(sizes, parts))
    return float(out)


def empirical_density_measure(F: Motif, graphs) -> PointMeasure:
    """One atom of mass ``1/n`` at ``t(F, G_i)`` per graph."""
    densities = [hom_density(F, g) for g in graphs]
    if not densities:
        raise DomainError("need at least one graph")
    return PointMeasure.uniform(np.clip(densities, 0.0, 1.0))
