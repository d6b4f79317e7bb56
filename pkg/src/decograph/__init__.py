"""Motif densities, spectra and cut-metric separation bounds for populations
of weighted graphs sampled from decorated graphons."""

from .bounds import (
    SeparationReport,
    concentration_experiment,
    equality_test_motif,
    equality_test_spectral,
    mean_wasserstein_experiment,
    thm1_bound,
    thm1_confidence,
    thm2_bound,
    thm2_confidence,
)
from .errors import (
    DecographError,
    DomainError,
    MassMismatchError,
    ParseError,
    ShapeError,
    SizeError,
    ValidationError,
)
from .graphon import (
    DecoratedGraphon,
    NoiseFamily,
    StepGraphon,
    WeightedGraph,
    cut_distance_upper,
    cut_norm,
    graphon_of_graph,
    refine,
    sample_graph,
    sample_graphs,
)
from .motifs import (
    Complete,
    Cycle,
    Edge,
    Motif,
    Path,
    PointMeasure,
    Star,
    empirical_density_measure,
    hom_density,
    hom_density_graph,
    hom_density_graphon,
    injective_hom_density,
    parse_motif,
)
from .spectral import (
    MeasureEnsemble,
    adjacency_spectrum,
    degree_measure,
    ensemble,
    laplacian_spectrum,
    standardize,
    truncate_features,
)
from .transport import assignment_solve, nested_wasserstein, wasserstein_1d, wasserstein_1d_vs_uniform

__all__ = [
    "SeparationReport",
    "concentration_experiment",
    "equality_test_motif",
    "equality_test_spectral",
    "mean_wasserstein_experiment",
    "thm1_bound",
    "thm1_confidence",
    "thm2_bound",
    "thm2_confidence",
    "DecographError",
    "DomainError",
    "MassMismatchError",
    "ParseError",
    "ShapeError",
    "SizeError",
    "ValidationError",
    "DecoratedGraphon",
    "NoiseFamily",
    "StepGraphon",
    "WeightedGraph",
    "cut_distance_upper",
    "cut_norm",
    "graphon_of_graph",
    "refine",
    "sample_graph",
    "sample_graphs",
    "Complete",
    "Cycle",
    "Edge",
    "Motif",
    "Path",
    "PointMeasure",
    "Star",
    "empirical_density_measure",
    "hom_density",
    "hom_density_graph",
    "hom_density_graphon",
    "injective_hom_density",
    "parse_motif",
    "MeasureEnsemble",
    "adjacency_spectrum",
    "degree_measure",
    "ensemble",
    "laplacian_spectrum",
    "standardize",
    "truncate_features",
    "assignment_solve",
    "nested_wasserstein",
    "wasserstein_1d",
    "wasserstein_1d_vs_uniform",
]

__version__ = "0.1.0"
