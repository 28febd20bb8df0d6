// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sparsechan/experiment.hpp"
#include "sparsechan/types.hpp"

namespace sparsechan::io {

/// Formats a double so that parsing it back yields the identical bit
/// pattern (shortest %.17g form). All numeric serialization goes through
/// this, which is what makes write -> read -> write byte-stable.
std::string format_double(double v);

/// Plain-text drop file, version 1:
///
///   # sparsechan drop file
///   format 1
///   seed <u64>            (per-drop derived stream seed)
///   drop <u64>
///   band <cmWave|mmWave|subTHz|custom>
///   mode <equal|ick>
///   has_los <0|1>
///   rays <N>
///   # delay_s power aoa_az_deg aoa_el_deg is_los
///   <N whitespace-separated records>
struct DropRecord {
    ChannelRealization realization;
    std::uint64_t drop_index = 0;
};

void write_drop(std::ostream& os, const DropRecord& drop);
void write_drop_file(const std::filesystem::path& path, const DropRecord& drop);

/// Throws std::runtime_error naming the offending file and field on any
/// malformed input.
DropRecord read_drop(std::istream& is, const std::string& name);
DropRecord read_drop_file(const std::filesystem::path& path);

/// One line of the samples CSV: band,mode,variant,drop_index,gini.
struct SampleRow {
    Band band = Band::custom;
    GiniSample sample;
};

void write_samples_csv(std::ostream& os, const std::vector<SampleRow>& rows);
std::vector<SampleRow> read_samples_csv(const std::filesystem::path& path);

/// CDF series as CSV: gini,cdf.
void write_cdf_csv(std::ostream& os, const std::vector<std::pair<double, double>>& series);

/// Structured summary of one or more percentile reports (JSON).
std::string summary_json(const std::vector<mc::PercentileReport>& reports,
                         std::uint64_t master_seed, const std::string& treatment_note);

/// Self-contained CDF line plot.
std::string cdf_svg(const std::vector<std::pair<double, double>>& series,
                    const std::string& title);

}  // namespace sparsechan::io
