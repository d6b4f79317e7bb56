"""
Spectra as probability measures
===============================

Each graph is summarized by point measures on the real line: adjacency
eigenvalues, Laplacian eigenvalues and degrees, all scaled by 1/k and given
mass 1/k per atom.  Cycle densities are moments of the adjacency measure,
which is what ties the spectral and motif views together.
"""

import numpy as np

from decograph import (Cycle, DecoratedGraphon, NoiseFamily, StepGraphon, adjacency_spectrum,
                       degree_measure, ensemble, hom_density_graph, laplacian_spectrum,
                       nested_wasserstein, sample_graphs, truncate_features, wasserstein_1d)

D = DecoratedGraphon(StepGraphon(np.array([[0.6, 0.1], [0.1, 0.6]])), NoiseFamily.bernoulli())
G = sample_graphs(D, 60, 1, seed=5)[0]

spec = adjacency_spectrum(G)
print("total mass of the adjacency measure:", spec.masses.sum())
print("two largest scaled eigenvalues:", np.round(np.sort(spec.values)[-2:], 4))

# t(C_m, G) = k * sum of mass * value^m, with mass 1/k per atom
for m in (3, 4, 5):
    moment = G.k * np.sum(spec.masses * spec.values ** m)
    print(f"C{m}: spectral moment {moment:.6f}  direct count {hom_density_graph(Cycle(m), G):.6f}")

lap = laplacian_spectrum(G)
deg = degree_measure(G)
print("laplacian atoms lie in", (round(float(lap.values.min()), 3), round(float(lap.values.max()), 3)))
print("mean scaled degree:", round(float(np.sum(deg.masses * deg.values)), 4))

# the r most negative and r most positive atoms make a fixed-length feature
print("truncated adjacency features (r=3):", np.round(truncate_features(spec, 3), 4))

# comparing single graphs and whole groups
H = sample_graphs(DecoratedGraphon(StepGraphon(np.array([[0.35]])), NoiseFamily.bernoulli()),
                  60, 1, seed=6)[0]
print("W1 between one graph from each model:", round(wasserstein_1d(spec, adjacency_spectrum(H)), 5))
A = sample_graphs(D, 60, 6, seed=7)
B = sample_graphs(DecoratedGraphon(StepGraphon(np.array([[0.35]])), NoiseFamily.bernoulli()), 60, 6, seed=8)
print("nested W1 between the two groups:", round(nested_wasserstein(ensemble(A), ensemble(B)), 5))
print("nested W1 of a group with itself:", nested_wasserstein(ensemble(A), ensemble(A)))
