"""Exact combinatorics of subspace families over finite fields.

Layers: q-binomial arithmetic and prime machinery (qcombin), canonical
subspaces and the containment lattice (gfspace), lattice transforms and
inversion checks (moebius), family checkers, bounds, partitions, and the
Gram analysis (families), rank-based independence certificates
(certificates), exhaustive clique search and generators (search), and the
command-line surface (cli).
"""

from .errors import (
    DomainError,
    QLatticeError,
    ResourceLimitError,
    StructureError,
    UnsupportedParametersError,
)
from .qcombin import (
    BoundReport,
    ZsigmondyException,
    alt_sum,
    capital_N,
    ceil_log,
    g_of,
    h_of,
    is_prime,
    multiplicative_order,
    prime_power,
    primorial_prime_set,
    qbinom,
    qbinom_product,
    require_zsigmondy_prime,
    trial_factor,
    zsigmondy_exception,
    zsigmondy_prime,
)
from .gfspace import (
    ContainmentVector,
    FieldContext,
    Lattice,
    Subspace,
    SubspaceIndex,
    canonicalize,
    containment_vector,
    contains,
    enumerate_subspaces,
    field,
    field_from_dict,
    full_space,
    index_of,
    intersect,
    lattice,
    lattice_budget,
    lattice_size,
    subspace_at,
    union_space,
    zero_subspace,
)
from .moebius import (
    InversionCheck,
    LatticeFunction,
    VanishingReport,
    gap_of,
    generalized_inversion_check,
    interval_sum,
    join_sum,
    moebius_transform,
    moebius_value,
    vanishing_check,
    zeta_transform,
)
from .families import (
    CheckResult,
    Family,
    FractionSet,
    GramReport,
    ModularProfile,
    PartitionJK,
    bound_frac_general,
    bound_frankl_graham,
    bound_singleton,
    bound_theorem1,
    check_fractional,
    check_modular,
    det_bareiss,
    family_from_dict,
    family_to_dict,
    fractional_cell_bound,
    fractions_from_strings,
    fractions_to_strings,
    gram_analysis,
    integer_rank,
    partition_dims,
    partition_jk,
    partition_mod_prime,
    power_cell,
    profile_from_dict,
    profile_to_dict,
)
from .certificates import (
    VARIANTS,
    CertificateContext,
    CertificateMatrix,
    SpanReport,
    certificate_context,
    eval_f,
    eval_g_i,
    eval_g_xy,
    independence_certificate,
    product_reduce,
    rank_mod_p,
    span_check,
)
from .search import (
    BisectionExample,
    CompatGraph,
    FracUniformExample,
    SearchLimits,
    SearchResult,
    UniformExample,
    build_graph,
    gen_example_bisection,
    gen_example_frac_uniform,
    gen_example_uniform,
    max_family,
)

__version__ = "0.1.0"
