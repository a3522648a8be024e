# SPDX-FileCopyrightText: 2025 Cake AI Technologies, Inc.
#
# SPDX-License-Identifier: Apache-2.0

"""Library layer of cake-tmlod: digit kernels, Farey dissection, metrics, LoD sums and Gowers graphs."""

from cake_tmlod.core.digitcore import (
    DigitKernel,
    TruncationWindow,
    dist_to_integer,
    frac,
    fractional_part_facts_check,
    nearest_integer,
    sum_of_digits,
    tm_sign,
    truncated_digit_sum,
    twofold_digit_sum,
)
from cake_tmlod.core.farey import (
    FareyApprox,
    FareyConstruction,
    build_farey_construction,
    exceptions_census,
    farey_approx,
    farey_neighbors,
    mediant,
    q_divisibility_measure,
    spaced_points_divisibility_count,
)
from cake_tmlod.core.gowers import (
    GowersGraph,
    OffsetFamily,
    build_graph,
    contraction_check,
    decay_rate,
    delta,
    edge_weight,
    gowers_bruteforce,
    path_weight_powers,
    recursion_value,
)
from cake_tmlod.core.lod import (
    APWindowStat,
    LoDSummary,
    PSExperiment,
    ap_signed_prefix_extremes,
    beatty_count,
    lod_error_total,
    ps_frequency,
    s0_beatty,
    s0_discrete,
    slope_fit,
)
from cake_tmlod.core.rationals import DyadicRational, Rational
from cake_tmlod.core.sequences import (
    BoxQuery,
    PointSet,
    box_count,
    carry_census,
    discrepancy,
    mean_discrepancy_sum,
    vdc_check,
)
