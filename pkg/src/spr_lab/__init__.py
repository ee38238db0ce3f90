"""Exact desk-scale toolkit for stretch lower bounds on pendant-terminal graphs.

The pipeline: build a unit-weight high-girth cubic core, hang one
weighted pendant terminal per chosen core vertex, propose a terminal
sparsifier, then measure and certify how much the sparsifier must
stretch some terminal pair. All arithmetic is exact (integers and
fractions); every randomized step is seeded and reproducible.
"""

from .cages import CATALOG, cage, cage_for
from .certify import (
    Certificate,
    InvalidSolutionError,
    SweepRow,
    certificate_to_dict,
    certify,
    render_csv,
    sweep,
    sweep_entries,
)
from .covering import (
    CapacityError,
    CovEstimate,
    CovResult,
    CoverFamily,
    SuperadditivityError,
    SuperadditivityResult,
    build_cover_family,
    check_superadditivity,
    count_length_s_paths,
    cov,
    coverable_window_count,
    decompose,
    estimate_cov_distribution,
    family_window_sum,
    find_high_cov_path,
    iter_length_s_paths,
    sample_nb_path,
    verify_superadditivity,
)
from .graphs import (
    INF,
    DisconnectedError,
    Path,
    WeightedGraph,
    concat,
    distances_from,
    dump_json,
    girth,
    girth_dichotomy,
    graph_from_dict,
    graph_to_dict,
    load_graph,
    make_path,
    save_graph,
    shortest_cycle,
    shortest_path,
)
from .instances import (
    GenerationError,
    Instance,
    InstanceParams,
    ValidationReport,
    assemble_instance,
    build_instance,
    derive_params,
    generate_cubic_high_girth,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
    validate_instance,
)
from .solutions import (
    SizeLimitError,
    SprSolution,
    StretchReport,
    brute_force_optimal,
    core_trace,
    enumerate_partition_solutions,
    image_path,
    load_solution,
    save_solution,
    solution_from_dict,
    solution_to_dict,
    stretch,
    validate_solution,
    voronoi_solution,
)

__version__ = "0.1.0"

__all__ = [
    "CATALOG",
    "CapacityError",
    "Certificate",
    "CovEstimate",
    "CovResult",
    "CoverFamily",
    "DisconnectedError",
    "GenerationError",
    "INF",
    "Instance",
    "InstanceParams",
    "InvalidSolutionError",
    "Path",
    "SizeLimitError",
    "SprSolution",
    "StretchReport",
    "SuperadditivityError",
    "SuperadditivityResult",
    "SweepRow",
    "ValidationReport",
    "WeightedGraph",
    "assemble_instance",
    "brute_force_optimal",
    "build_cover_family",
    "build_instance",
    "cage",
    "cage_for",
    "certificate_to_dict",
    "certify",
    "check_superadditivity",
    "concat",
    "core_trace",
    "count_length_s_paths",
    "cov",
    "coverable_window_count",
    "decompose",
    "derive_params",
    "distances_from",
    "dump_json",
    "enumerate_partition_solutions",
    "estimate_cov_distribution",
    "family_window_sum",
    "find_high_cov_path",
    "generate_cubic_high_girth",
    "girth",
    "girth_dichotomy",
    "graph_from_dict",
    "graph_to_dict",
    "image_path",
    "instance_from_dict",
    "instance_to_dict",
    "iter_length_s_paths",
    "load_graph",
    "load_instance",
    "load_solution",
    "make_path",
    "render_csv",
    "sample_nb_path",
    "save_graph",
    "save_instance",
    "save_solution",
    "shortest_cycle",
    "shortest_path",
    "solution_from_dict",
    "solution_to_dict",
    "stretch",
    "sweep",
    "sweep_entries",
    "validate_instance",
    "validate_solution",
    "verify_superadditivity",
    "voronoi_solution",
]
