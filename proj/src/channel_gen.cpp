// SPDX-License-Identifier: Apache-2.0

#include "sparsechan/channel_gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sparsechan::gen {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kMaxKDb = 60.0;  // cap keeps 10^(k/10) finite in the specular split
}  // namespace

void validate(const GenConfig& c) {
    if (c.m_rays < 2) throw std::invalid_argument("m_rays must be >= 2");
    if (!(c.r_tau > 1.0)) throw std::invalid_argument("r_tau must be > 1");
    if (c.zeta_db < 0.0) throw std::invalid_argument("zeta_db must be >= 0");
    if (c.doppler_hz_max < c.doppler_hz_min)
        throw std::invalid_argument("doppler range inverted");
}

LspDraw draw_lsp(const BandProfile& profile, RandomStream& rng) {
    validate(profile);
    const double x = rng.normal(profile.ds_log10_mu, profile.ds_log10_sigma);
    const double k = rng.normal(profile.k_mu_db, profile.k_sigma_db);
    return LspDraw{std::pow(10.0, x), k, profile.n_clusters};
}

Eigen::ArrayXd cluster_delays_from_uniforms(double ds_s, double r_tau, const Eigen::ArrayXd& xs) {
    if (!(ds_s > 0.0)) throw std::invalid_argument("delay spread must be > 0");
    if (xs.size() < 1) throw std::invalid_argument("need at least one cluster");
    Eigen::ArrayXd d = -r_tau * ds_s * xs.log();
    std::sort(d.data(), d.data() + d.size());
    d -= d[0];
    return d;
}

Eigen::ArrayXd gen_cluster_delays(double ds_s, int n, double r_tau, RandomStream& rng) {
    if (n < 1) throw std::invalid_argument("need at least one cluster");
    Eigen::ArrayXd xs(n);
    for (int i = 0; i < n; ++i) xs[i] = rng.uniform_open0();
    return cluster_delays_from_uniforms(ds_s, r_tau, xs);
}

ClusterPowers cluster_powers_from_draws(const Eigen::ArrayXd& delays_s, double ds_s, double r_tau,
                                        double k_db, bool has_los,
                                        const Eigen::ArrayXd& shadow_db) {
    if (delays_s.size() != shadow_db.size())
        throw std::invalid_argument("delay/shadowing draw size mismatch");
    Eigen::ArrayXd p =
        (-delays_s * (r_tau - 1.0) / (r_tau * ds_s)).exp() * Eigen::pow(10.0, -shadow_db / 10.0);
    p /= p.sum();
    double specular = 0.0;
    if (has_los) {
        const double k_r = std::pow(10.0, std::min(k_db, kMaxKDb) / 10.0);
        p /= (k_r + 1.0);
        specular = k_r / (k_r + 1.0);
    }
    return ClusterPowers{std::move(p), specular};
}

ClusterPowers gen_cluster_powers(const Eigen::ArrayXd& delays_s, double ds_s, double r_tau,
                                 double k_db, double zeta_db, bool has_los, RandomStream& rng) {
    Eigen::ArrayXd z(delays_s.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal(0.0, zeta_db);
    return cluster_powers_from_draws(delays_s, ds_s, r_tau, k_db, has_los, z);
}

Eigen::ArrayXd allocate_equal(double p_n, int m) {
    if (!(p_n > 0.0)) throw std::invalid_argument("nonpositive power");
    if (m < 1) throw std::invalid_argument("need at least one ray");
    return Eigen::ArrayXd::Constant(m, p_n / static_cast<double>(m));
}

Eigen::ArrayXd allocate_ick(double p_n, int m, double ick_linear) {
    if (!(p_n > 0.0)) throw std::invalid_argument("nonpositive power");
    if (m < 2) throw std::invalid_argument("ICK needs >= 2 rays");
    if (!(ick_linear > 0.0)) throw std::invalid_argument("ICK must be > 0");
    Eigen::ArrayXd out(m);
    out[0] = ick_linear / (ick_linear + 1.0) * p_n;
    const double rest = p_n / ((ick_linear + 1.0) * static_cast<double>(m - 1));
    for (int i = 1; i < m; ++i) out[i] = rest;
    return out;
}

std::vector<RayCoefficient> draw_ray_coefficients(const Cluster& cluster, double doppler_hz_min,
                                                  double doppler_hz_max, RandomStream& rng) {
    validate(cluster);
    std::vector<RayCoefficient> out;
    out.reserve(cluster.rays.size());
    for (const Ray& ray : cluster.rays) {
        const double phase = rng.uniform(0.0, kTwoPi);
        const double doppler = doppler_hz_min == doppler_hz_max
                                   ? doppler_hz_min
                                   : rng.uniform(doppler_hz_min, doppler_hz_max);
        out.push_back(RayCoefficient{std::polar(std::sqrt(ray.power), phase), doppler, phase});
    }
    return out;
}

std::complex<double> cluster_coefficient(const std::vector<RayCoefficient>& rays, double t_s) {
    std::complex<double> h{0.0, 0.0};
    for (const RayCoefficient& rc : rays)
        h += rc.amplitude * std::polar(1.0, kTwoPi * rc.doppler_hz * t_s);
    return h;
}

std::vector<std::complex<double>> synthesize_coefficients(const std::vector<Cluster>& clusters,
                                                          AllocationMode mode, double t_s,
                                                          RandomStream& rng, double doppler_hz_min,
                                                          double doppler_hz_max) {
    std::vector<std::complex<double>> out;
    out.reserve(clusters.size());
    for (const Cluster& c : clusters) {
        if (mode == AllocationMode::ick && c.rays.size() >= 2) {
            const auto strongest =
                std::max_element(c.rays.begin(), c.rays.end(),
                                 [](const Ray& a, const Ray& b) { return a.power < b.power; });
            if (strongest != c.rays.begin())
                throw std::invalid_argument("ick clusters must lead with the dominant ray");
        }
        const auto coeffs = draw_ray_coefficients(c, doppler_hz_min, doppler_hz_max, rng);
        out.push_back(cluster_coefficient(coeffs, t_s));
    }
    return out;
}

ChannelRealization generate_drop(const BandProfile& profile, const GenConfig& cfg,
                                 AllocationMode mode, std::uint64_t drop_index) {
    validate(profile);
    validate(cfg);

    RandomStream rng = RandomStream::for_drop(cfg.master_seed, drop_index);
    const LspDraw lsp = draw_lsp(profile, rng);
    const Eigen::ArrayXd delays = gen_cluster_delays(lsp.ds_s, lsp.n_clusters, cfg.r_tau, rng);
    const ClusterPowers powers = gen_cluster_powers(delays, lsp.ds_s, cfg.r_tau, lsp.k_db,
                                                    cfg.zeta_db, /*has_los=*/true, rng);

    Eigen::ArrayXd az(lsp.n_clusters), el(lsp.n_clusters);
    for (int n = 0; n < lsp.n_clusters; ++n) {
        az[n] = rng.uniform(-180.0, 180.0);
        el[n] = rng.uniform(-20.0, 20.0);
    }

    const double ick_linear = std::pow(10.0, profile.ick_db / 10.0);

    ChannelRealization out;
    out.band = profile.band;
    out.has_los = true;
    out.seed = derive_stream_seed(cfg.master_seed, drop_index);
    out.mode = mode;
    out.rays.reserve(static_cast<std::size_t>(lsp.n_clusters) * cfg.m_rays + 1);

    // The specular component rides on the first cluster's delay (zero by
    // construction) and the boresight direction.
    out.rays.push_back(Ray{0.0, powers.specular, 0.0, 0.0, true});

    for (int n = 0; n < lsp.n_clusters; ++n) {
        const Eigen::ArrayXd alloc = mode == AllocationMode::equal
                                         ? allocate_equal(powers.cluster[n], cfg.m_rays)
                                         : allocate_ick(powers.cluster[n], cfg.m_rays, ick_linear);
        for (Eigen::Index m = 0; m < alloc.size(); ++m)
            out.rays.push_back(Ray{delays[n], alloc[m], az[n], el[n], false});
    }
    validate(out);
    return out;
}

std::vector<Cluster> clusters_by_delay(const ChannelRealization& r) {
    std::vector<Cluster> out;
    for (const Ray& ray : r.rays) {
        if (ray.is_los) continue;
        if (out.empty() || out.back().rays.back().delay_s != ray.delay_s) {
            out.push_back(Cluster{{ray}, ray.power});
        } else {
            out.back().rays.push_back(ray);
            out.back().power += ray.power;
        }
    }
    return out;
}

}  // namespace sparsechan::gen
