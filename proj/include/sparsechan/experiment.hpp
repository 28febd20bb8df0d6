// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

#include "sparsechan/band_profile.hpp"
#include "sparsechan/channel_gen.hpp"
#include "sparsechan/types.hpp"

namespace sparsechan::mc {

/// How the specular LoS power enters the with-LoS Gini.
///
/// separate_ray scores the flagged specular as its own ray. folded removes
/// the flag and redistributes the specular power over the first cluster's
/// rays proportionally to their allocation, which reproduces the standard
/// cluster-delay-line bookkeeping where the first cluster's power pot
/// includes the LoS contribution. The without-LoS variant is identical under
/// both treatments.
enum class SpecularTreatment { separate_ray, folded };

inline std::string to_string(SpecularTreatment t) {
    return t == SpecularTreatment::separate_ray ? "separate" : "folded";
}

inline SpecularTreatment treatment_from_string(const std::string& s) {
    if (s == "separate") return SpecularTreatment::separate_ray;
    if (s == "folded") return SpecularTreatment::folded;
    throw std::invalid_argument("unknown specular treatment: " + s);
}

/// Default treatment for table comparisons: folded, for both allocation
/// modes. This is what reproduces the embedded reference percentiles.
SpecularTreatment default_treatment(AllocationMode mode);

struct RunSpec {
    BandProfile profile;
    gen::GenConfig cfg;
    AllocationMode mode = AllocationMode::equal;
    int drops = 10000;
    bool with_los = true;
    bool without_los = true;
    std::optional<SpecularTreatment> treatment;  // default_treatment(mode) when unset
    int workers = 1;
};

/// The power vector a variant sees, after applying the specular treatment.
Eigen::ArrayXd variant_powers(const ChannelRealization& r, LosVariant variant,
                              SpecularTreatment treatment);

/// Independent drops, one GiniSample per requested variant per drop, ordered
/// by (drop_index, with_los-first). The stream depends only on
/// (master_seed, drops, variants), never on the worker count.
std::vector<GiniSample> run_monte_carlo(const RunSpec& spec);

/// Linear interpolation between order statistics: quantile q of sorted x is
/// x[h] interpolated at h = (n-1)q.
double quantile(const std::vector<double>& sorted_values, double q);

struct ReferenceRow {
    double p20 = 0.0, p50 = 0.0, p80 = 0.0;
};

/// Embedded reference percentiles from the indoor-office study at
/// 6/26/132 GHz: measured channels, the equal-allocation simulation, and the
/// ICK-modified simulation. Measurement rows are context only and never gate
/// a comparison.
enum class ReferenceTable { baseline_3gpp, measurement, modified_ick };

std::string to_string(ReferenceTable t);
ReferenceTable table_from_string(const std::string& s);
ReferenceTable table_for_mode(AllocationMode mode);

std::optional<ReferenceRow> reference_row(ReferenceTable table, Band band, LosVariant variant);

/// A p50 comparison that participates in the pass/fail exit status.
struct Gate {
    ReferenceTable table;
    Band band;
    LosVariant variant;
    double p50 = 0.0;
    double tolerance = 0.0;
};

const std::vector<Gate>& gates();
std::optional<Gate> gate_for(ReferenceTable table, Band band, LosVariant variant);

struct PercentileReport {
    Band band = Band::custom;
    AllocationMode mode = AllocationMode::equal;
    LosVariant variant = LosVariant::with_los;
    double p20 = 0.0, p50 = 0.0, p80 = 0.0;
    int n_drops = 0;
    std::optional<ReferenceTable> reference_table;
    std::optional<ReferenceRow> reference;
    std::optional<ReferenceRow> deltas;  // report minus reference
    bool gated = false;
    bool pass = true;  // false only when a gated p50 misses its tolerance
};

PercentileReport percentiles(const std::vector<GiniSample>& samples, Band band,
                             AllocationMode mode, LosVariant variant);

/// Attaches the matching reference row, deltas, and the gate verdict.
/// Throws when the (band, variant) pair has no row in the table.
PercentileReport compare_to_reference(PercentileReport report, ReferenceTable table);

/// Empirical CDF points (value ascending, fraction (i - 1/2) / n).
std::vector<std::pair<double, double>> emit_cdf(const std::vector<GiniSample>& samples);

}  // namespace sparsechan::mc
