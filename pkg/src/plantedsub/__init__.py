"""Detection and recovery of a structure planted as an induced subgraph of G(n, q)."""

from .detectors import (
    SpectralConfig,
    TestVerdict,
    scan_test,
    spectral_norm,
    spectral_test,
    total_degree_risk_bound,
    total_degree_test,
)
from .ensembles import (
    PlantParams,
    PlantedSample,
    sample,
    sample_null,
    sample_subgraph_ensemble,
    sample_union_ensemble,
    trial_rng,
)
from .errors import DomainError, InvalidArgument, ResourceLimitError
from .graphcore import (
    Graph,
    VertexEmbedding,
    are_isomorphic,
    automorphism_count,
    complement,
    complete_graph,
    count_induced_copies,
    cycle_graph,
    empty_graph,
    format_graph,
    induced_subgraph,
    max_structure_size,
    parse_graph,
    path_graph,
    read_graph,
    star_graph,
    structure_complement,
    write_graph,
)
from .harness import GridSpec, RiskEstimate, estimate_risk, phase_diagram
from .lowdegree import (
    LowDegreeReport,
    character_mean_h1,
    exact_lowdegree_norm,
    fourier_character,
    lowdegree_bound_conditions,
)
from .recovery import RecoveryResult, exhaustive_recover, max_degree_recover
from .structstats import (
    StructureReport,
    dh_min,
    dh_statistic,
    is_strictly_balanced,
    max_subgraph_density,
    regime_classify,
    structure_report,
)

__version__ = "0.1.0"
