"""percolab: a percolation laboratory for random graphs.

Generate configuration-model, rank-1 inhomogeneous, and attachment graphs;
percolate them; measure component and surplus statistics; and compare
against critical windows, scaling exponents, and closed-form limits.
"""

from .degrees import (
    DegreeSequence,
    PowerLawSpec,
    WeightSequence,
    coupled_quantiles,
    empirical_moment,
    iid_degrees_coupled,
    nu_n,
    power_law_weights,
    quantile_degrees,
    size_biased_distribution,
    size_biased_reordering,
)
from .dynamics import (
    FixedPointReport,
    SusceptibilityTrack,
    alpha_exponent,
    component_one_trajectory,
    fixed_points,
    s2_infinity,
    sa_residual_check,
    susceptibility,
    susceptibility_drift,
    track_growth,
)
from .experiment import (
    ExperimentConfig,
    concentration_check,
    estimate_exponent,
    run,
)
from .exploration import (
    ExplorationTrace,
    drift_estimate,
    explore_cm,
    rescaled_path,
    rewritten_process_check,
    surplus_from_trace,
)
from .generators import (
    GrowthTrace,
    PASpec,
    chung_lu,
    configuration_model,
    grg,
    nr_graph,
    nr_multigraph,
    preferential_attachment,
    uniform_attachment,
    yule_arrival_times,
)
from .graphs import (
    ComponentDecomposition,
    MultiGraph,
    OrderedPairVector,
    UnionFind,
    build_graph,
    component_vector,
    components,
    l2_distance,
    ord_pairs,
    read_edge_list,
    u0_distance,
    write_edge_list,
)
from .limits import (
    ExcursionSet,
    LimitPath,
    ThetaSequence,
    bm_parameters,
    excursions,
    limit_component_vector,
    poisson_marks,
    power_law_thetas,
    reflect,
    simulate_bm_parabolic,
    simulate_tau23_process,
    simulate_thinned_levy,
)
from .percolation import (
    ExplodedDegrees,
    cm_pi_c,
    janson_degree_pmf,
    janson_explode,
    janson_percolate,
    pa_pi_c,
    percolate,
    pi_window_finite_third,
    pi_window_heavy,
    pi_window_single_edge,
    pi_window_tau23,
    regime_diagnostic,
    scaling_constants,
    theta_survival,
    tv_distance,
    ua_pi_c,
)
from .tinygiant import (
    a_alpha,
    lambda_c,
    mean_weight,
    rho_fixed_point,
    tiny_giant_graph,
    zeta,
    zeta_limit,
)

__version__ = "0.1.0"
