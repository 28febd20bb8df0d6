// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sparsechan {

enum class Band { cm_wave, mm_wave, sub_thz, custom };
enum class AllocationMode { equal, ick };
enum class LosVariant { with_los, without_los };

inline std::string to_string(Band b) {
    switch (b) {
        case Band::cm_wave: return "cmWave";
        case Band::mm_wave: return "mmWave";
        case Band::sub_thz: return "subTHz";
        case Band::custom: return "custom";
    }
    return "custom";
}

inline Band band_from_string(const std::string& s) {
    if (s == "cmWave") return Band::cm_wave;
    if (s == "mmWave") return Band::mm_wave;
    if (s == "subTHz") return Band::sub_thz;
    if (s == "custom") return Band::custom;
    throw std::invalid_argument("unknown band name: " + s);
}

inline std::string to_string(AllocationMode m) {
    return m == AllocationMode::equal ? "equal" : "ick";
}

inline AllocationMode mode_from_string(const std::string& s) {
    if (s == "equal") return AllocationMode::equal;
    if (s == "ick") return AllocationMode::ick;
    throw std::invalid_argument("unknown allocation mode: " + s);
}

inline std::string to_string(LosVariant v) {
    return v == LosVariant::with_los ? "with_los" : "without_los";
}

inline LosVariant variant_from_string(const std::string& s) {
    if (s == "with_los") return LosVariant::with_los;
    if (s == "without_los") return LosVariant::without_los;
    throw std::invalid_argument("unknown variant: " + s);
}

/// One resolvable multipath component.
struct Ray {
    double delay_s = 0.0;      // >= 0
    double power = 0.0;        // linear, > 0
    double aoa_az_deg = 0.0;   // [-180, 180)
    double aoa_el_deg = 0.0;
    bool is_los = false;
};

inline void validate(const Ray& r) {
    if (!(r.power > 0.0)) throw std::invalid_argument("nonpositive power");
    if (r.delay_s < 0.0) throw std::invalid_argument("negative ray delay");
}

/// Positive linear powers kept in ascending order. Construction sorts
/// (stably) and validates, so downstream consumers can rely on the order.
class PowerVector {
  public:
    explicit PowerVector(const Eigen::ArrayXd& powers_any_order)
        : values_(sorted_checked(powers_any_order)) {}

    explicit PowerVector(const std::vector<double>& powers_any_order)
        : PowerVector(to_array(powers_any_order)) {}

    const Eigen::ArrayXd& values() const { return values_; }
    Eigen::Index size() const { return values_.size(); }
    double l1_norm() const { return values_.sum(); }

  private:
    static Eigen::ArrayXd to_array(const std::vector<double>& v) {
        Eigen::ArrayXd a(static_cast<Eigen::Index>(v.size()));
        for (std::size_t i = 0; i < v.size(); ++i) a[static_cast<Eigen::Index>(i)] = v[i];
        return a;
    }

    static Eigen::ArrayXd sorted_checked(const Eigen::ArrayXd& p) {
        if (p.size() == 0) throw std::invalid_argument("empty power vector");
        std::vector<double> v(p.data(), p.data() + p.size());
        for (double x : v)
            if (!(x > 0.0)) throw std::invalid_argument("nonpositive power");
        std::stable_sort(v.begin(), v.end());
        return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
    }

    Eigen::ArrayXd values_;
};

/// Group of rays sharing a delay/angle neighborhood; power is the sum of the
/// member ray powers.
struct Cluster {
    std::vector<Ray> rays;
    double power = 0.0;
};

inline Cluster make_cluster(std::vector<Ray> rays) {
    if (rays.empty()) throw std::invalid_argument("cluster needs at least one ray");
    double p = 0.0;
    for (const Ray& r : rays) {
        validate(r);
        p += r.power;
    }
    return Cluster{std::move(rays), p};
}

inline void validate(const Cluster& c) {
    if (c.rays.empty()) throw std::invalid_argument("cluster needs at least one ray");
    double p = 0.0;
    for (const Ray& r : c.rays) p += r.power;
    if (std::abs(p - c.power) > 1e-12 * std::max(1.0, std::abs(c.power)))
        throw std::invalid_argument("cluster power does not match sum of ray powers");
}

/// One stochastic channel drop.
struct ChannelRealization {
    std::vector<Ray> rays;
    Band band = Band::custom;
    bool has_los = false;
    std::uint64_t seed = 0;   // per-drop derived stream seed
    AllocationMode mode = AllocationMode::equal;
};

inline void validate(const ChannelRealization& r) {
    std::size_t los = 0;
    for (const Ray& ray : r.rays) {
        validate(ray);
        if (ray.is_los) ++los;
    }
    if (los > 1) throw std::invalid_argument("more than one LoS ray");
    if (r.has_los != (los == 1))
        throw std::invalid_argument("has_los flag inconsistent with flagged rays");
}

/// A single Gini evaluation with its provenance.
struct GiniSample {
    double value = 0.0;  // in [0, 1]
    std::uint64_t drop_index = 0;
    LosVariant variant = LosVariant::with_los;
    AllocationMode mode = AllocationMode::equal;
};

inline void validate(const GiniSample& s) {
    if (!(s.value >= 0.0 && s.value <= 1.0))
        throw std::invalid_argument("gini sample out of [0,1]");
}

}  // namespace sparsechan
