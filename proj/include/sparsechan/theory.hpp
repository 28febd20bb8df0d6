// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "sparsechan/types.hpp"

namespace sparsechan::theory {

/// N strictly ascending positive cluster powers, each split over M rays.
/// R = N * M rays in total.
struct ClusterPowerSet {
    Eigen::ArrayXd powers;  // ascending, P_1 < ... < P_N
    int m_rays = 2;         // M >= 2

    int n_clusters() const { return static_cast<int>(powers.size()); }
    int ray_count() const { return n_clusters() * m_rays; }
};

void validate(const ClusterPowerSet& cps);

/// After the ICK reallocation the pooled ray vector either keeps the sorted
/// layout of the equal split (every dominant ray stays below the next
/// cluster's remaining rays) or does not.
enum class Situation { order_preserved, order_changed };

/// Per-cluster power handed from each remaining ray to the dominant one:
/// alpha_n = P_n / M - P_n / ((I+1)(M-1)), nonnegative whenever
/// I >= 1/(M-1).
struct DifferenceTerms {
    Eigen::ArrayXd given_out;
    Situation situation = Situation::order_preserved;
};

/// Closed-form Gini of the equal intra-cluster split:
/// G1 = 1 - (2/|p|_1) sum_n sum_m (P_n/M) (R - M(n-1) - m + 1/2) / R.
double g1_closed_form(const ClusterPowerSet& cps);

/// The pooled ray vector behind G1: M copies of P_n/M per cluster,
/// ascending by construction.
PowerVector expand_equal(const ClusterPowerSet& cps);

/// The pooled ray vector after the ICK reallocation (unsorted construction;
/// PowerVector sorts).
PowerVector expand_ick(const ClusterPowerSet& cps, double ick_linear);

/// Gini after the ICK reallocation, computed by constructing the reallocated
/// vector, sorting, and applying the Gini sum. Valid in both situations.
double gk_closed_form(const ClusterPowerSet& cps, double ick_linear);

/// The closed form with hard-coded sorted positions (remaining rays of
/// cluster n at (n-1)M+1 .. nM-1, dominant at nM). Only correct when the
/// reallocation preserves the sort order; kept as a cross-check.
double gk_printed_form(const ClusterPowerSet& cps, double ick_linear);

/// Requires I >= 1/(M-1). order_changed as soon as some cluster's dominant
/// ray strictly exceeds the next cluster's remaining rays.
Situation classify_situation(const ClusterPowerSet& cps, double ick_linear);

DifferenceTerms difference_terms(const ClusterPowerSet& cps, double ick_linear);

/// G_k - G_1 in the order-preserved situation:
/// sum_n (alpha_n / |p|_1) (M^2 - M) / R. Throws "wrong situation" when the
/// order changed.
double difference_order_preserved(const ClusterPowerSet& cps, double ick_linear);

/// G_k - G_1 for the two-cluster order-changed case, evaluated term by term
/// from the displaced-dominant layout (the first cluster's dominant ray
/// lands at sorted position R-1). Ties with the second cluster's remaining
/// rays are accepted; both formulas agree there.
double difference_order_changed(const ClusterPowerSet& cps, double ick_linear);

struct TheoremReport {
    double g1 = 0.0;
    double gk = 0.0;
    double delta = 0.0;
    Situation situation = Situation::order_preserved;
    bool holds = false;
};

/// Checks the sparsity-enhancement statement G_k >= G_1 for one instance;
/// requires I >= 1/(M-1). delta is exactly zero (to rounding) at the
/// boundary I = 1/(M-1).
TheoremReport verify_theorem(const ClusterPowerSet& cps, double ick_linear);

}  // namespace sparsechan::theory
