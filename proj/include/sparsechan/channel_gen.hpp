// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

#include "sparsechan/band_profile.hpp"
#include "sparsechan/rng.hpp"
#include "sparsechan/types.hpp"

namespace sparsechan::gen {

/// Generator knobs that are not per-band statistics. The delay scaling
/// factor and per-cluster shadowing follow the indoor-office values of the
/// standard cluster-delay-line recipe; both are configurable.
struct GenConfig {
    int m_rays = 20;             // rays per cluster, >= 2
    double r_tau = 3.6;          // delay scaling factor, > 1
    double zeta_db = 6.0;        // per-cluster shadowing std dev, >= 0
    std::uint64_t master_seed = 0;
    double doppler_hz_min = 0.0;  // static scenario by default
    double doppler_hz_max = 0.0;
};

void validate(const GenConfig& c);

/// One draw of the large-scale parameters.
struct LspDraw {
    double ds_s = 0.0;     // delay spread, seconds
    double k_db = 0.0;     // Ricean K-factor, dB
    int n_clusters = 1;
};

/// ds = 10^x with x ~ N(ds_log10_mu, ds_log10_sigma); k_db ~ N(k_mu_db,
/// k_sigma_db); the cluster count is the profile's fixed value.
LspDraw draw_lsp(const BandProfile& profile, RandomStream& rng);

/// Cluster delays from explicit uniform draws xs in (0, 1]:
/// tau'_n = -r_tau * ds * ln(x_n), sorted ascending and shifted so the first
/// delay is zero. Split out so the formula is testable without an engine.
Eigen::ArrayXd cluster_delays_from_uniforms(double ds_s, double r_tau, const Eigen::ArrayXd& xs);

Eigen::ArrayXd gen_cluster_delays(double ds_s, int n, double r_tau, RandomStream& rng);

/// Normalized cluster powers plus the specular line-of-sight share.
/// cluster.sum() + specular == 1.
struct ClusterPowers {
    Eigen::ArrayXd cluster;
    double specular = 0.0;
};

/// Single-slope power-delay law with per-cluster lognormal shadowing:
/// P'_n = exp(-tau_n (r_tau - 1) / (r_tau ds)) * 10^(-Z_n / 10), normalized
/// to unit sum. With LoS present, all cluster powers scale by 1/(K_R + 1)
/// and the specular component carries K_R/(K_R + 1), K_R = 10^(k_db/10)
/// (k_db capped at 60 dB).
ClusterPowers cluster_powers_from_draws(const Eigen::ArrayXd& delays_s, double ds_s, double r_tau,
                                        double k_db, bool has_los,
                                        const Eigen::ArrayXd& shadow_db);

ClusterPowers gen_cluster_powers(const Eigen::ArrayXd& delays_s, double ds_s, double r_tau,
                                 double k_db, double zeta_db, bool has_los, RandomStream& rng);

/// Uniform split of a cluster power over m rays.
Eigen::ArrayXd allocate_equal(double p_n, int m);

/// Intra-cluster K-factor split: the dominant ray (element 0) carries
/// I/(I+1) of the cluster power, the remaining m-1 rays share the rest
/// equally. I = 1/(m-1) reduces to the equal split.
Eigen::ArrayXd allocate_ick(double p_n, int m, double ick_linear);

/// One ray of the complex channel coefficient sum. The squared amplitude
/// equals the allocated linear ray power; the unit-modulus phase factor and
/// Doppler shift carry the stochastic part.
struct RayCoefficient {
    std::complex<double> amplitude;
    double doppler_hz = 0.0;
    double phase_rad = 0.0;  // in [0, 2*pi)
};

std::vector<RayCoefficient> draw_ray_coefficients(const Cluster& cluster, double doppler_hz_min,
                                                  double doppler_hz_max, RandomStream& rng);

std::complex<double> cluster_coefficient(const std::vector<RayCoefficient>& rays, double t_s);

/// Per-cluster coefficients H_n(t) = sum_m sqrt(p_m) c_m exp(j 2 pi v_m t)
/// with |c_m| = 1. The equal and ICK forms differ only through the allocated
/// ray powers already present in the clusters. Dopplers come from the
/// configured range (default static).
std::vector<std::complex<double>> synthesize_coefficients(const std::vector<Cluster>& clusters,
                                                          AllocationMode mode, double t_s,
                                                          RandomStream& rng,
                                                          double doppler_hz_min = 0.0,
                                                          double doppler_hz_max = 0.0);

/// Full drop: LSPs -> cluster delays -> cluster powers -> intra-cluster
/// allocation. The specular LoS component is injected as one extra flagged
/// ray at the first cluster's delay. Rays of a cluster share the cluster
/// delay and angle (intra-cluster offsets are zero). The per-drop stream is
/// derived from (master_seed, drop_index), so distinct drops are
/// independent and any drop is reproducible in isolation.
ChannelRealization generate_drop(const BandProfile& profile, const GenConfig& cfg,
                                 AllocationMode mode, std::uint64_t drop_index);

/// Groups a realization's rays into clusters of identical delay (the LoS
/// ray, if any, is skipped). Construction order is preserved.
std::vector<Cluster> clusters_by_delay(const ChannelRealization& r);

}  // namespace sparsechan::gen
