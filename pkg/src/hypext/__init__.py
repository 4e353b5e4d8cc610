"""Extensions of uniform hypergraphs: constructions, strong colorings,
Lagrangians, exact Turán numbers and distances to complete blowups."""

from .canon import CanonicalCertificate, brute_force_certificate, canonical_certificate
from .coloring import (
    SpikeReport,
    check_phi,
    critical_edges,
    enumerate_link_families,
    find_phi,
    is_freely_critical,
    is_sharply_critical,
    is_strong_coloring,
    is_strongly_colorable,
    is_t_critical,
    is_t_spike,
    link_is_matching,
    strong_coloring,
)
from .constructions import (
    add_isolated,
    balanced_blowup,
    balanced_parts,
    blowup_partition,
    complete,
    complete_multipartite,
    edgeless,
    expansion,
    extension,
    path,
    star,
    weak_extensions,
)
from .distance import (
    DistanceReport,
    StabilityReport,
    WeightedDistanceReport,
    coupling_blowups,
    distance_to_complete_blowups,
    distance_to_family,
    is_blowup_partition,
    is_eps_balanced,
    partition_cost,
    stability_probe,
    weighted_distance_fixed,
    weighted_distance_upper,
)
from .errors import GraphParseError, InvalidArgument, ResourceLimit
from .hypergraph import (
    Family,
    HyperGraph,
    blowup,
    canonical_form,
    clone_vertex,
    contains_subgraph,
    covered_pairs,
    covers_pairs,
    dumps,
    family_from_obj,
    family_to_obj,
    find_embedding,
    graph_from_dict,
    graph_to_dict,
    is_family_free,
    is_isomorphic,
    link,
    loads,
    symmetric_difference_size,
    uncovered_pairs,
)
from .lagrangian import (
    LagrangianResult,
    MonotoneReport,
    ProbeReport,
    WeightVector,
    d_norm,
    density,
    e_norm,
    f,
    lagrangian,
    monotone_threshold,
    pair_density,
    real_binom,
    sidolem_probe,
    sidorenko_probe,
    vertex_density,
    vertex_densities,
)
from .turan import (
    BlowupReport,
    Budget,
    ExtremalVerdict,
    SearchReport,
    brute_force_turan,
    max_blowup_edges,
    turan_number,
    verify_extremal_claim,
)

__version__ = "0.1.0"
