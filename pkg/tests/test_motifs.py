import itertools
from math import comb

import numpy as np
import pytest

from decograph.errors import DomainError, ParseError, SizeError, ValidationError
from decograph.graphon import DecoratedGraphon, NoiseFamily, StepGraphon, WeightedGraph, sample_graphs
from decograph.motifs import (
    Complete,
    Cycle,
    Edge,
    Motif,
    Path,
    PointMeasure,
    Star,
    cycle_density,
    cycle_density_via_spectrum,
    empirical_density_measure,
    hom_density,
    hom_density_graph,
    hom_density_graphon,
    injective_hom_density,
    parse_motif,
    path_density,
    star_density_via_degrees,
)
from decograph.spectral import adjacency_spectrum

from oracles import hom_density_enum, random_weights

K3 = WeightedGraph(np.ones((3, 3)) - np.eye(3))
ZERO = WeightedGraph(np.zeros((6, 6)))


def all_motifs(max_v):
    """Every labelled simple graph on 1..max_v nodes (isomorphic copies included)."""
    for v in range(1, max_v + 1):
        pairs = list(itertools.combinations(range(v), 2))
        for mask in range(1 << len(pairs)):
            yield Motif.from_edges(v, [p for i, p in enumerate(pairs) if mask >> i & 1])


def test_constructors():
    assert (Cycle(4).v, Cycle(4).e) == (4, 4)
    assert (Star(5).v, Star(5).e) == (5, 4)
    assert (Path(3).v, Path(3).e) == (3, 2)
    assert (Complete(4).v, Complete(4).e) == (4, 6)
    assert Edge().shape() == "star"
    assert Cycle(5).shape() == "cycle"
    assert Path(5).shape() == "path"
    assert Complete(4).shape() is None


def test_motif_validation():
    with pytest.raises(ValidationError):
        Motif.from_edges(2, [(0, 0)])
    with pytest.raises(ValidationError):
        Motif.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(ValidationError):
        Motif.from_edges(2, [(0, 2)])


@pytest.mark.parametrize("text,v,e", [("C3", 3, 3), ("S4", 4, 3), ("P3", 3, 2), ("K2", 2, 1), ("k4", 4, 6),
                                      ('{"v": 3, "edges": [[0, 1], [1, 2]]}', 3, 2)])
def test_parse_motif(text, v, e):
    F = parse_motif(text)
    assert (F.v, F.e) == (v, e)


@pytest.mark.parametrize("text", ["X3", "C", "{bad", '{"v": 2}'])
def test_parse_motif_errors(text):
    with pytest.raises(ParseError):
        parse_motif(text)


def test_brute_force_examples():
    assert hom_density_graph(Edge(), K3) == pytest.approx(6 / 9)
    assert hom_density_graph(Cycle(3), K3) == pytest.approx(6 / 27)
    assert hom_density_graph(Edge(), WeightedGraph([[0.0]])) == 0


def test_brute_force_matches_enumeration():
    rng = np.random.default_rng(0)
    G = WeightedGraph(random_weights(rng, 4))
    for F in all_motifs(4):
        assert hom_density_graph(F, G) == pytest.approx(hom_density_enum(F.sorted_edges(), F.v, G.weights), abs=1e-13)


def test_brute_force_guard():
    with pytest.raises(SizeError):
        hom_density_graph(Complete(6), WeightedGraph(np.zeros((50, 50))))


def test_graphon_density_examples():
    assert hom_density_graphon(Edge(), StepGraphon.constant(0.37)) == pytest.approx(0.37)
    assert hom_density_graphon(Cycle(3), StepGraphon.constant(0.5)) == pytest.approx(0.125)
    assert hom_density_graphon(Cycle(4), StepGraphon([[1, 0], [0, 1]])) == pytest.approx(2 / 16)


def test_graphon_density_matches_enumeration():
    W = StepGraphon([[0.3, 0.8, 0.1], [0.8, 0.6, 0.4], [0.1, 0.4, 0.9]])
    for F in (Edge(), Cycle(3), Cycle(4), Star(4), Path(4), Complete(4)):
        assert hom_density_graphon(F, W) == pytest.approx(hom_density_enum(F.sorted_edges(), F.v, W.values), abs=1e-13)


def test_injective_examples():
    assert injective_hom_density(Edge(), K3) == pytest.approx(1.0)
    assert injective_hom_density(Cycle(3), K3) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        injective_hom_density(Cycle(4), K3)


def test_injective_gap():
    rng = np.random.default_rng(1)
    for _ in range(50):
        k = int(rng.integers(4, 9))
        G = WeightedGraph(random_weights(rng, k))
        for F in (Edge(), Cycle(3), Path(3), Star(4), Cycle(4)):
            gap = abs(hom_density_graph(F, G) - injective_hom_density(F, G))
            assert gap <= comb(F.v, 2) / k + 1e-12


def test_cycle_via_spectrum_examples():
    spec = adjacency_spectrum(K3)
    assert cycle_density_via_spectrum(3, spec) == pytest.approx(8 / 27 - 2 / 27)
    assert cycle_density_via_spectrum(4, spec) == pytest.approx(18 / 81)
    assert cycle_density_via_spectrum(5, adjacency_spectrum(ZERO)) == 0
    with pytest.raises(DomainError):
        cycle_density_via_spectrum(2, spec)


def test_star_examples():
    assert star_density_via_degrees(2, K3) == pytest.approx(2 / 3)
    assert star_density_via_degrees(3, K3) == pytest.approx(12 / 27)
    assert hom_density_graph(Star(3), K3) == pytest.approx(12 / 27)
    assert star_density_via_degrees(4, ZERO) == 0


def test_path_examples():
    assert path_density(2, K3) == pytest.approx(2 / 3)
    assert path_density(3, K3) == pytest.approx(12 / 27)
    assert path_density(5, ZERO) == 0


def test_closed_forms_match_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(30):
        k = int(rng.integers(2, 9))
        G = WeightedGraph(random_weights(rng, k, density=rng.random()))
        for m in (3, 4):
            assert cycle_density(m, G) == pytest.approx(hom_density_graph(Cycle(m), G), abs=1e-10)
        for v in (2, 3, 4):
            assert star_density_via_degrees(v, G) == pytest.approx(hom_density_graph(Star(v), G), abs=1e-10)
            assert path_density(v, G) == pytest.approx(hom_density_graph(Path(v), G), abs=1e-10)


def test_dispatcher_matches_brute_force_on_all_small_motifs():
    rng = np.random.default_rng(3)
    for _ in range(5):
        G = WeightedGraph(random_weights(rng, 5))
        for F in all_motifs(4):
            assert hom_density(F, G) == pytest.approx(hom_density_graph(F, G), abs=1e-12)


def test_densities_monotone_in_weights():
    rng = np.random.default_rng(4)
    for _ in range(20):
        A = random_weights(rng, 6)
        i, j = rng.choice(6, 2, replace=False)
        B = A.copy()
        B[i, j] = B[j, i] = min(1.0, A[i, j] + rng.random())
        for F in (Edge(), Cycle(3), Cycle(4), Star(4), Path(4), Complete(4)):
            lo, hi = hom_density_graph(F, WeightedGraph(A)), hom_density_graph(F, WeightedGraph(B))
            assert 0 <= lo <= hi + 1e-15 <= 1 + 1e-15


def test_counting_lemma_constants():
    grid = np.arange(1, 10) / 10
    for F in (Edge(), Cycle(3), Cycle(4), Star(3), Path(3), Complete(4)):
        for p in grid:
            for q in grid:
                tp = hom_density_graphon(F, StepGraphon.constant(p))
                tq = hom_density_graphon(F, StepGraphon.constant(q))
                assert abs(tp - tq) <= F.e * abs(p - q) + 1e-15


def test_point_measure():
    mu = PointMeasure([0.5, -0.2, 0.5], [1, 2, 1])
    assert mu.masses.sum() == pytest.approx(1)
    merged = mu.merged()
    assert merged.size == 2
    assert merged.moment(3) == pytest.approx(mu.moment(3))
    with pytest.raises(ValidationError):
        PointMeasure([1.5], [1])
    with pytest.raises(ValidationError):
        PointMeasure([0.1], [0])


def test_empirical_density_measure():
    mu = empirical_density_measure(Edge(), [K3])
    assert mu.values.tolist() == pytest.approx([2 / 3]) and mu.masses.tolist() == [1.0]
    twin = empirical_density_measure(Cycle(3), [K3, K3])
    assert twin.merged().size == 1
    with pytest.raises(DomainError):
        empirical_density_measure(Edge(), [])


def test_empirical_density_measure_concentrates():
    D = DecoratedGraphon(StepGraphon.constant(0.5), NoiseFamily.bernoulli())
    mu = empirical_density_measure(Cycle(3), sample_graphs(D, 200, 10, 8))
    assert np.all(np.abs(mu.values - 0.125) < 0.05)
