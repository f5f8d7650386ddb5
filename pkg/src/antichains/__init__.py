"""Exact combinatorics of dense infinite antichains.

The package constructs finite slices of boundary-constrained set families,
counts them by big-integer lattice-path dynamic programming, and verifies
the supporting inequalities (Kraft sums, cycle-lemma head bounds, curved
random-walk boundary crossings, binomial estimates) with exact left-hand
sides.
"""

from .model import (
    AmbiguityError,
    GrowthFunction,
    GuardError,
    LatticePath,
    SubsetMask,
    log2_int,
    path_to_set,
    set_to_path,
)
from .kraft import (
    AntichainViolation,
    CodeWord,
    antichain_partial_sum,
    density_ratios,
    is_antichain,
    is_prefix_free,
    kraft_sum,
    word_for_set,
)
from .families import (
    FamilySpec,
    ballot_closed_form,
    catalan_number,
    check_union_antichain,
    enumerate_family,
    is_ballot_member,
    is_family_member,
)
from .counting import (
    HeightCounts,
    above_line_path_count,
    ballot_density_ratio,
    convolution_check,
    cumulative_count,
    family_path_count,
    good_path_count,
    prefix_counts,
    suffix_counts,
)
from .cycle import (
    CircularSequence,
    HeadReport,
    construct_heads,
    good_fraction,
    head_bound,
    heads,
    is_good_sequence,
    rotation_class_goods,
)
from .walks import (
    Bandwidth,
    WalkDistribution,
    band_mass_check,
    bandwidth,
    bandwidth_sandwich,
    binomial_lower_bound_check,
    chernoff_tail_check,
    completion_chain_check,
    completion_min_check,
    crossing_probability_exact,
    crossing_probability_mc,
    dyadic_sum,
    family_size_check,
    survival_distribution,
)

__version__ = "0.1.0"
