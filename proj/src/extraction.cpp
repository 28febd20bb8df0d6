// SPDX-License-Identifier: Apache-2.0

#include "sparsechan/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sparsechan::extract {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kLn2 = 0.69314718055994530941723212145818;

double wrap_deg(double d) {
    while (d < -180.0) d += 360.0;
    while (d >= 180.0) d -= 360.0;
    return d;
}

double angular_distance_deg(double az1, double el1, double az2, double el2) {
    const double daz = wrap_deg(az1 - az2);
    const double del = el1 - el2;
    return std::sqrt(daz * daz + del * del);
}

/// Gaussian main-lobe amplitude gain, unity at boresight, half power at an
/// offset of half the 3 dB beamwidth.
double lobe_amplitude(double offset_deg, double beamwidth_3db_deg) {
    const double u = 2.0 * offset_deg / beamwidth_3db_deg;
    return std::exp(-0.5 * kLn2 * u * u);
}

}  // namespace

void validate(const SounderModel& sm) {
    if (!(sm.beamwidth_az_3db_deg > 0.0)) throw std::invalid_argument("beamwidth must be > 0");
    if (!(sm.bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be > 0");
    if (sm.angle_grid.empty()) throw std::invalid_argument("empty angle grid");
}

SounderModel sub_thz_indoor_sounder() {
    SounderModel sm;
    sm.beamwidth_az_3db_deg = 9.9;
    sm.antenna_gain_db = 25.1;
    sm.bandwidth_hz = 1.2e9;
    sm.noise_floor_db = -25.0;
    for (double el : {-10.0, 0.0, 10.0})
        for (double az = -180.0; az < 180.0; az += 10.0)
            sm.angle_grid.push_back({az, el});
    return sm;
}

Pdp pdp_from_cir(const Cir& cir) {
    if (cir.taps.size() == 0) throw std::invalid_argument("empty CIR");
    if (!(cir.sample_interval_s > 0.0)) throw std::invalid_argument("sample interval must be > 0");
    return Pdp{cir.taps.array().abs2(), cir.sample_interval_s, cir.az_deg, cir.el_deg};
}

std::vector<Cir> synthesize_measurement(const std::vector<Ray>& truth, const SounderModel& sm,
                                        RandomStream& rng, int n_taps) {
    validate(sm);
    if (truth.empty()) throw std::invalid_argument("no truth rays");
    const double dt = sm.sample_interval_s();

    double max_delay = 0.0;
    double max_power = 0.0;
    for (const Ray& r : truth) {
        validate(r);
        max_delay = std::max(max_delay, r.delay_s);
        max_power = std::max(max_power, r.power);
    }
    if (n_taps <= 0) n_taps = static_cast<int>(std::llround(max_delay / dt)) + 9;

    const bool noiseless = sm.noise_floor_db <= -200.0;
    const double noise_sigma =
        noiseless ? 0.0 : std::sqrt(max_power * std::pow(10.0, sm.noise_floor_db / 10.0) / 2.0);

    std::vector<Cir> out;
    out.reserve(sm.angle_grid.size());
    for (const auto& [az, el] : sm.angle_grid) {
        Cir cir;
        cir.taps = Eigen::VectorXcd::Zero(n_taps);
        cir.sample_interval_s = dt;
        cir.az_deg = az;
        cir.el_deg = el;
        for (const Ray& r : truth) {
            const auto bin = static_cast<Eigen::Index>(std::llround(r.delay_s / dt));
            if (bin >= n_taps)
                throw std::invalid_argument("ray delay beyond tap window");
            const double gain =
                lobe_amplitude(angular_distance_deg(az, el, r.aoa_az_deg, r.aoa_el_deg),
                               sm.beamwidth_az_3db_deg);
            const double phase = rng.uniform(0.0, kTwoPi);
            cir.taps[bin] += std::polar(std::sqrt(r.power) * gain, phase);
        }
        if (!noiseless)
            for (Eigen::Index i = 0; i < n_taps; ++i)
                cir.taps[i] += std::complex<double>(rng.normal(0.0, noise_sigma),
                                                    rng.normal(0.0, noise_sigma));
        out.push_back(std::move(cir));
    }
    return out;
}

std::vector<Peak> find_peaks(const Pdp& pdp, double min_separation_s, double floor_db) {
    if (min_separation_s < pdp.sample_interval_s)
        throw std::invalid_argument("min_separation below the temporal resolution");
    const Eigen::Index n = pdp.bins.size();
    if (n < 3) return {};
    const double floor = pdp.bins.maxCoeff() * std::pow(10.0, floor_db / 10.0);

    std::vector<Peak> candidates;
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double p = pdp.bins[i];
        if (p > pdp.bins[i - 1] && p > pdp.bins[i + 1] && p > floor)
            candidates.push_back(Peak{static_cast<double>(i) * pdp.sample_interval_s, p});
    }
    // Strongest-first suppression of near-coincident maxima.
    std::stable_sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
        if (a.power != b.power) return a.power > b.power;
        return a.delay_s < b.delay_s;
    });
    std::vector<Peak> kept;
    for (const Peak& c : candidates) {
        const bool close = std::any_of(kept.begin(), kept.end(), [&](const Peak& k) {
            return std::abs(k.delay_s - c.delay_s) < min_separation_s;
        });
        if (!close) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end(),
              [](const Peak& a, const Peak& b) { return a.delay_s < b.delay_s; });
    return kept;
}

std::vector<Ray> screen_same_delay(const std::vector<AngledPeaks>& per_angle,
                                   const SounderModel& sm) {
    validate(sm);
    struct Entry {
        double az, el, delay, power;
    };
    std::vector<Entry> entries;
    for (const AngledPeaks& ap : per_angle)
        for (const Peak& p : ap.peaks) entries.push_back({ap.az_deg, ap.el_deg, p.delay_s, p.power});
    if (entries.empty()) return {};

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.delay != b.delay) return a.delay < b.delay;
        if (a.az != b.az) return a.az < b.az;
        return a.el < b.el;
    });

    const double delay_tol = 0.5 * sm.sample_interval_s();
    const double angle_tol = 1.5 * sm.beamwidth_az_3db_deg;

    std::vector<Ray> rays;
    std::size_t group_start = 0;
    for (std::size_t i = 1; i <= entries.size(); ++i) {
        if (i < entries.size() && entries[i].delay - entries[i - 1].delay <= delay_tol) continue;

        // One same-delay group [group_start, i). Components of angularly
        // adjacent detections collapse to their strongest member.
        const std::size_t count = i - group_start;
        std::vector<int> comp(count, -1);
        int n_comp = 0;
        for (std::size_t a = 0; a < count; ++a) {
            if (comp[a] >= 0) continue;
            comp[a] = n_comp++;
            std::vector<std::size_t> stack{a};
            while (!stack.empty()) {
                const std::size_t u = stack.back();
                stack.pop_back();
                const Entry& eu = entries[group_start + u];
                for (std::size_t v = 0; v < count; ++v) {
                    if (comp[v] >= 0) continue;
                    const Entry& ev = entries[group_start + v];
                    if (angular_distance_deg(eu.az, eu.el, ev.az, ev.el) <= angle_tol) {
                        comp[v] = comp[a];
                        stack.push_back(v);
                    }
                }
            }
        }
        for (int c = 0; c < n_comp; ++c) {
            const Entry* best = nullptr;
            for (std::size_t a = 0; a < count; ++a)
                if (comp[a] == c) {
                    const Entry& e = entries[group_start + a];
                    if (!best || e.power > best->power) best = &e;
                }
            rays.push_back(Ray{best->delay, best->power, best->az, best->el, false});
        }
        group_start = i;
    }
    std::sort(rays.begin(), rays.end(), [](const Ray& a, const Ray& b) {
        if (a.delay_s != b.delay_s) return a.delay_s < b.delay_s;
        return a.power > b.power;
    });
    return rays;
}

namespace {

using Feature = Eigen::Vector3d;

std::vector<Feature> standardized_features(const std::vector<Ray>& rays) {
    const auto n = static_cast<Eigen::Index>(rays.size());
    Eigen::Matrix<double, Eigen::Dynamic, 3> f(n, 3);
    for (Eigen::Index i = 0; i < n; ++i)
        f.row(i) << rays[i].delay_s, rays[i].aoa_az_deg, rays[i].aoa_el_deg;
    for (int c = 0; c < 3; ++c) {
        const double mean = f.col(c).mean();
        const double var = (f.col(c).array() - mean).square().sum() / static_cast<double>(n);
        const double sd = std::sqrt(var);
        if (sd > 0.0)
            f.col(c) = (f.col(c).array() - mean) / sd;
        else
            f.col(c).setZero();
    }
    std::vector<Feature> out(rays.size());
    for (Eigen::Index i = 0; i < n; ++i) out[i] = f.row(i).transpose();
    return out;
}

struct KmeansResult {
    std::vector<int> assignment;
    double within = 0.0;
};

KmeansResult run_kmeans(const std::vector<Feature>& x, const std::vector<double>& w, int k,
                        const ClusteringOptions& opts) {
    const std::size_t n = x.size();
    RandomStream rng(derive_stream_seed(opts.seed, static_cast<std::uint64_t>(k)));

    // Weighted k-means++ start, anchored at the most powerful ray.
    std::vector<Feature> centroids;
    centroids.push_back(x[std::distance(w.begin(), std::max_element(w.begin(), w.end()))]);
    std::vector<double> d2(n);
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const Feature& c : centroids)
                best = std::min(best, (x[i] - c).squaredNorm());
            d2[i] = w[i] * best;
            total += d2[i];
        }
        if (total <= 0.0) {
            centroids.push_back(x[centroids.size() % n]);
            continue;
        }
        double u = rng.uniform() * total;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            u -= d2[i];
            if (u <= 0.0) {
                pick = i;
                break;
            }
        }
        centroids.push_back(x[pick]);
    }

    std::vector<int> assignment(n, 0);
    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (x[i] - centroids[c]).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }
        std::vector<Feature> sums(k, Feature::Zero());
        std::vector<double> weights(k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[assignment[i]] += w[i] * x[i];
            weights[assignment[i]] += w[i];
        }
        for (int c = 0; c < k; ++c) {
            if (weights[c] > 0.0) {
                centroids[c] = sums[c] / weights[c];
            } else {
                // Re-seed an empty cluster at the point farthest from its centroid.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = w[i] * (x[i] - centroids[assignment[i]]).squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centroids[c] = x[far];
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
    }

    double within = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        within += w[i] * (x[i] - centroids[assignment[i]]).squaredNorm();
    return KmeansResult{std::move(assignment), within};
}

}  // namespace

std::vector<Cluster> cluster_rays(const std::vector<Ray>& rays, std::optional<int> target_n,
                                  const ClusteringOptions& opts) {
    if (rays.empty()) throw std::invalid_argument("no rays to cluster");
    if (target_n && (*target_n < 1 || static_cast<std::size_t>(*target_n) > rays.size()))
        throw std::invalid_argument("fewer rays than requested clusters");

    // Canonical order makes the result independent of input permutation.
    std::vector<Ray> sorted = rays;
    std::sort(sorted.begin(), sorted.end(), [](const Ray& a, const Ray& b) {
        if (a.delay_s != b.delay_s) return a.delay_s < b.delay_s;
        if (a.aoa_az_deg != b.aoa_az_deg) return a.aoa_az_deg < b.aoa_az_deg;
        if (a.aoa_el_deg != b.aoa_el_deg) return a.aoa_el_deg < b.aoa_el_deg;
        return a.power < b.power;
    });

    const std::vector<Feature> x = standardized_features(sorted);
    std::vector<double> w(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) w[i] = sorted[i].power;

    int k;
    KmeansResult result;
    if (target_n) {
        k = *target_n;
        result = run_kmeans(x, w, k, opts);
    } else {
        const int k_max = static_cast<int>(std::min<std::size_t>(opts.max_k, sorted.size()));
        std::vector<KmeansResult> by_k(k_max + 1);
        for (int kk = 1; kk <= k_max; ++kk) by_k[kk] = run_kmeans(x, w, kk, opts);
        k = k_max;
        for (int kk = 1; kk <= k_max; ++kk) {
            if (by_k[kk].within <= 0.0) {
                k = kk;
                break;
            }
            if (kk < k_max) {
                const double reduction = (by_k[kk].within - by_k[kk + 1].within) / by_k[kk].within;
                if (reduction < opts.elbow_threshold) {
                    k = kk;
                    break;
                }
            }
        }
        result = std::move(by_k[k]);
    }

    std::vector<Cluster> clusters(k);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        clusters[result.assignment[i]].rays.push_back(sorted[i]);
        clusters[result.assignment[i]].power += sorted[i].power;
    }
    clusters.erase(std::remove_if(clusters.begin(), clusters.end(),
                                  [](const Cluster& c) { return c.rays.empty(); }),
                   clusters.end());
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        const auto mean_delay = [](const Cluster& c) {
            double s = 0.0;
            for (const Ray& r : c.rays) s += r.delay_s;
            return s / static_cast<double>(c.rays.size());
        };
        return mean_delay(a) < mean_delay(b);
    });
    return clusters;
}

double estimate_ick(const Cluster& cluster) {
    validate(cluster);
    if (cluster.rays.size() < 2) throw std::invalid_argument("ICK undefined");
    std::size_t strongest = 0;
    for (std::size_t i = 1; i < cluster.rays.size(); ++i)
        if (cluster.rays[i].power > cluster.rays[strongest].power) strongest = i;
    // |p|_1 - max(p), summed directly over the non-dominant rays; the
    // subtraction form cancels badly when the dominant ray carries nearly
    // all of the power.
    double rest = 0.0;
    for (std::size_t i = 0; i < cluster.rays.size(); ++i)
        if (i != strongest) rest += cluster.rays[i].power;
    if (!(rest > 0.0)) throw std::invalid_argument("ICK undefined");
    return cluster.rays[strongest].power / rest;
}

LspEstimate estimate_lsp(const std::vector<Ray>& rays) {
    if (rays.size() < 2) throw std::invalid_argument("need at least two rays");
    double sum_p = 0.0, sum_pt = 0.0;
    double max_p = 0.0;
    for (const Ray& r : rays) {
        validate(r);
        sum_p += r.power;
        sum_pt += r.power * r.delay_s;
        max_p = std::max(max_p, r.power);
    }
    const double mean = sum_pt / sum_p;
    double var = 0.0;
    for (const Ray& r : rays) var += r.power * (r.delay_s - mean) * (r.delay_s - mean);
    var /= sum_p;
    const double rest = sum_p - max_p;
    return LspEstimate{std::sqrt(var), 10.0 * std::log10(max_p / rest)};
}

}  // namespace sparsechan::extract
