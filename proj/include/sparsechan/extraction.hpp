// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

#include "sparsechan/rng.hpp"
#include "sparsechan/types.hpp"

namespace sparsechan::extract {

/// Discrete-time channel impulse response at one antenna pointing.
struct Cir {
    Eigen::VectorXcd taps;
    double sample_interval_s = 0.0;
    double az_deg = 0.0;
    double el_deg = 0.0;
};

/// Power delay profile: squared tap magnitudes of a Cir.
struct Pdp {
    Eigen::ArrayXd bins;
    double sample_interval_s = 0.0;
    double az_deg = 0.0;
    double el_deg = 0.0;
};

/// Rotating-horn sounder model. The angle grid lists every (az, el)
/// pointing; temporal resolution is 1/bandwidth_hz. The antenna pattern is a
/// Gaussian main lobe normalized to unity at boresight (antenna_gain_db is
/// carried as metadata; the extraction chain is scale-invariant).
/// noise_floor_db is relative to the strongest tap; values at or below
/// -200 dB mean noiseless synthesis.
struct SounderModel {
    double beamwidth_az_3db_deg = 10.0;
    double antenna_gain_db = 0.0;
    std::vector<std::array<double, 2>> angle_grid;  // {az_deg, el_deg}
    double bandwidth_hz = 1.0e9;
    double noise_floor_db = -25.0;

    double sample_interval_s() const { return 1.0 / bandwidth_hz; }
};

void validate(const SounderModel& sm);

/// 132 GHz indoor sounder: 1.2 GHz bandwidth, 9.9 deg beamwidth, azimuth
/// sweep in 10 deg steps with elevation cuts at -10/0/+10 deg.
SounderModel sub_thz_indoor_sounder();

Pdp pdp_from_cir(const Cir& cir);

/// Synthesizes one Cir per grid pointing from ground-truth rays. Each ray
/// lands in its nearest delay bin with amplitude
/// sqrt(power) * g(angle offset) * e^{j phi}, phi uniform per (pointing,
/// ray); g is the Gaussian main lobe (half power at half the 3 dB
/// beamwidth). Complex Gaussian noise is added at the configured floor.
/// n_taps = 0 sizes the window from the largest truth delay; with an
/// explicit window, rays beyond it throw.
std::vector<Cir> synthesize_measurement(const std::vector<Ray>& truth, const SounderModel& sm,
                                        RandomStream& rng, int n_taps = 0);

struct Peak {
    double delay_s = 0.0;
    double power = 0.0;
};

/// Strict interior local maxima of the PDP above the floor (dB relative to
/// the strongest bin). Maxima closer together than min_separation_s keep
/// only the strongest. First and last bins never qualify (one-sided
/// neighborhoods).
std::vector<Peak> find_peaks(const Pdp& pdp, double min_separation_s, double floor_db);

struct AngledPeaks {
    double az_deg = 0.0;
    double el_deg = 0.0;
    std::vector<Peak> peaks;
};

/// Merges duplicate detections of the same ray across pointings: peaks whose
/// delays agree within half a resolution bin and whose pointings lie within
/// 1.5x the 3 dB beamwidth collapse to the strongest one, which keeps its
/// pointing as the ray angle.
std::vector<Ray> screen_same_delay(const std::vector<AngledPeaks>& per_angle,
                                   const SounderModel& sm);

struct ClusteringOptions {
    int max_k = 10;
    double elbow_threshold = 0.10;  // marginal within-distance reduction
    std::uint64_t seed = 0;
    int max_iterations = 64;
};

/// Power-weighted k-means over (delay, az, el) standardized to unit
/// variance. k comes from target_n when given, otherwise from the elbow rule
/// (smallest k whose marginal reduction falls under the threshold). Rays are
/// canonicalized internally, so the result is invariant to input order and
/// deterministic for a fixed seed. Clusters come back ordered by mean delay.
std::vector<Cluster> cluster_rays(const std::vector<Ray>& rays,
                                  std::optional<int> target_n = std::nullopt,
                                  const ClusteringOptions& opts = {});

/// Intra-cluster K-factor of a measured cluster:
/// I = max(p) / (|p|_1 - max(p)). Undefined for single-ray clusters.
double estimate_ick(const Cluster& cluster);

struct LspEstimate {
    double ds_s = 0.0;   // power-weighted rms delay spread
    double k_db = 0.0;   // strongest ray over the rest, dB
};

LspEstimate estimate_lsp(const std::vector<Ray>& rays);

}  // namespace sparsechan::extract
