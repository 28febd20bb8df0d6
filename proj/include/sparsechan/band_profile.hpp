// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sparsechan/types.hpp"

namespace sparsechan {

/// Per-band large-scale statistics plus the band's reference intra-cluster
/// K-factor (ICK). Delay spread is lognormal (parameters in log10 seconds),
/// the Ricean K-factor is normal in dB, and the cluster count is fixed.
struct BandProfile {
    Band band = Band::custom;
    std::string name = "custom";
    double ds_log10_mu = 0.0;     // log10(DS / 1 s)
    double ds_log10_sigma = 0.0;
    double k_mu_db = 0.0;
    double k_sigma_db = 0.0;
    int n_clusters = 1;
    double ick_db = 0.0;          // reference intra-cluster K-factor
};

inline void validate(const BandProfile& p) {
    if (p.ds_log10_sigma < 0.0) throw std::invalid_argument("ds_log10_sigma must be >= 0");
    if (p.k_sigma_db < 0.0) throw std::invalid_argument("k_sigma_db must be >= 0");
    if (p.n_clusters < 1) throw std::invalid_argument("n_clusters must be >= 1");
}

namespace presets {

// Indoor-office statistics measured at 6 / 26 / 132 GHz.
BandProfile cm_wave();
BandProfile mm_wave();
BandProfile sub_thz();

/// The three built-in profiles in fixed order (cmWave, mmWave, subTHz).
std::vector<BandProfile> all();

/// Lookup by band tag; Band::custom is rejected (custom profiles come from
/// configuration, not presets).
BandProfile by_band(Band b);

}  // namespace presets

}  // namespace sparsechan
