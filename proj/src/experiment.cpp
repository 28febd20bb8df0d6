// SPDX-License-Identifier: Apache-2.0

#include "sparsechan/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "sparsechan/gini.hpp"

namespace sparsechan::mc {

SpecularTreatment default_treatment(AllocationMode) { return SpecularTreatment::folded; }

Eigen::ArrayXd variant_powers(const ChannelRealization& r, LosVariant variant,
                              SpecularTreatment treatment) {
    validate(r);
    if (variant == LosVariant::without_los && !r.has_los)
        throw std::invalid_argument("realization has no LoS ray to remove");

    std::vector<double> powers;
    powers.reserve(r.rays.size());

    if (variant == LosVariant::with_los && treatment == SpecularTreatment::folded && r.has_los) {
        double specular = 0.0;
        double first_delay = 0.0;
        bool first_set = false;
        for (const Ray& ray : r.rays) {
            if (ray.is_los) {
                specular = ray.power;
                continue;
            }
            if (!first_set || ray.delay_s < first_delay) {
                first_delay = ray.delay_s;
                first_set = true;
            }
        }
        double first_cluster_power = 0.0;
        for (const Ray& ray : r.rays)
            if (!ray.is_los && ray.delay_s == first_delay) first_cluster_power += ray.power;
        const double scale = (first_cluster_power + specular) / first_cluster_power;
        for (const Ray& ray : r.rays) {
            if (ray.is_los) continue;
            powers.push_back(ray.delay_s == first_delay ? ray.power * scale : ray.power);
        }
    } else {
        for (const Ray& ray : r.rays) {
            if (variant == LosVariant::without_los && ray.is_los) continue;
            powers.push_back(ray.power);
        }
    }
    if (powers.size() < 2) throw std::invalid_argument("degenerate ray set");
    return Eigen::Map<const Eigen::ArrayXd>(powers.data(),
                                            static_cast<Eigen::Index>(powers.size()));
}

std::vector<GiniSample> run_monte_carlo(const RunSpec& spec) {
    validate(spec.profile);
    gen::validate(spec.cfg);
    if (spec.drops < 1) throw std::invalid_argument("drops must be >= 1");
    if (!spec.with_los && !spec.without_los)
        throw std::invalid_argument("no variant requested");

    const SpecularTreatment treatment = spec.treatment.value_or(default_treatment(spec.mode));
    const int per_drop = (spec.with_los ? 1 : 0) + (spec.without_los ? 1 : 0);
    std::vector<GiniSample> samples(static_cast<std::size_t>(spec.drops) * per_drop);

    const auto evaluate = [&](std::uint64_t d) {
        const ChannelRealization r =
            gen::generate_drop(spec.profile, spec.cfg, spec.mode, d);
        std::size_t slot = static_cast<std::size_t>(d) * per_drop;
        if (spec.with_los) {
            const double g = gini(variant_powers(r, LosVariant::with_los, treatment));
            samples[slot++] = GiniSample{g, d, LosVariant::with_los, spec.mode};
        }
        if (spec.without_los) {
            const double g = gini(variant_powers(r, LosVariant::without_los, treatment));
            samples[slot] = GiniSample{g, d, LosVariant::without_los, spec.mode};
        }
    };

    const int workers = std::max(1, spec.workers);
    if (workers == 1) {
        for (int d = 0; d < spec.drops; ++d) evaluate(static_cast<std::uint64_t>(d));
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int d = w; d < spec.drops; d += workers)
                    evaluate(static_cast<std::uint64_t>(d));
            });
        for (auto& t : pool) t.join();
    }
    return samples;
}

double quantile(const std::vector<double>& sorted_values, double q) {
    if (sorted_values.empty()) throw std::invalid_argument("no samples");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile outside [0,1]");
    const std::size_t n = sorted_values.size();
    if (n == 1) return sorted_values[0];
    const double h = static_cast<double>(n - 1) * q;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted_values[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

std::string to_string(ReferenceTable t) {
    switch (t) {
        case ReferenceTable::baseline_3gpp: return "3gpp";
        case ReferenceTable::measurement: return "measurement";
        case ReferenceTable::modified_ick: return "modified";
    }
    return "?";
}

ReferenceTable table_from_string(const std::string& s) {
    if (s == "3gpp") return ReferenceTable::baseline_3gpp;
    if (s == "measurement") return ReferenceTable::measurement;
    if (s == "modified") return ReferenceTable::modified_ick;
    throw std::invalid_argument("unknown reference table: " + s);
}

ReferenceTable table_for_mode(AllocationMode mode) {
    return mode == AllocationMode::equal ? ReferenceTable::baseline_3gpp
                                         : ReferenceTable::modified_ick;
}

std::optional<ReferenceRow> reference_row(ReferenceTable table, Band band, LosVariant variant) {
    const bool with = variant == LosVariant::with_los;
    switch (table) {
        case ReferenceTable::measurement:
            switch (band) {
                case Band::cm_wave: return with ? ReferenceRow{0.89, 0.92, 0.94}
                                                : ReferenceRow{0.58, 0.61, 0.68};
                case Band::mm_wave: return with ? ReferenceRow{0.91, 0.95, 0.96}
                                                : ReferenceRow{0.65, 0.73, 0.79};
                case Band::sub_thz: return with ? ReferenceRow{0.96, 0.98, 0.98}
                                                : ReferenceRow{0.74, 0.80, 0.82};
                case Band::custom: return std::nullopt;
            }
            break;
        case ReferenceTable::baseline_3gpp:
            switch (band) {
                case Band::cm_wave: return with ? ReferenceRow{0.78, 0.83, 0.86}
                                                : ReferenceRow{0.50, 0.61, 0.68};
                case Band::mm_wave: return with ? ReferenceRow{0.76, 0.82, 0.85}
                                                : ReferenceRow{0.48, 0.58, 0.67};
                case Band::sub_thz: return with ? ReferenceRow{0.36, 0.49, 0.61}
                                                : ReferenceRow{0.32, 0.48, 0.61};
                case Band::custom: return std::nullopt;
            }
            break;
        case ReferenceTable::modified_ick:
            switch (band) {
                case Band::cm_wave: return with ? ReferenceRow{0.89, 0.92, 0.93}
                                                : ReferenceRow{0.57, 0.64, 0.68};
                case Band::mm_wave: return with ? ReferenceRow{0.92, 0.94, 0.96}
                                                : ReferenceRow{0.75, 0.77, 0.79};
                case Band::sub_thz: return with ? ReferenceRow{0.96, 0.97, 0.98}
                                                : ReferenceRow{0.80, 0.83, 0.87};
                case Band::custom: return std::nullopt;
            }
            break;
    }
    return std::nullopt;
}

const std::vector<Gate>& gates() {
    static const std::vector<Gate> g = {
        {ReferenceTable::modified_ick, Band::sub_thz, LosVariant::with_los, 0.97, 0.02},
        {ReferenceTable::modified_ick, Band::mm_wave, LosVariant::with_los, 0.94, 0.03},
        {ReferenceTable::modified_ick, Band::cm_wave, LosVariant::with_los, 0.92, 0.03},
        {ReferenceTable::modified_ick, Band::sub_thz, LosVariant::without_los, 0.83, 0.05},
        {ReferenceTable::baseline_3gpp, Band::sub_thz, LosVariant::with_los, 0.49, 0.08},
        {ReferenceTable::baseline_3gpp, Band::cm_wave, LosVariant::with_los, 0.83, 0.08},
        {ReferenceTable::baseline_3gpp, Band::mm_wave, LosVariant::with_los, 0.82, 0.08},
    };
    return g;
}

std::optional<Gate> gate_for(ReferenceTable table, Band band, LosVariant variant) {
    for (const Gate& g : gates())
        if (g.table == table && g.band == band && g.variant == variant) return g;
    return std::nullopt;
}

PercentileReport percentiles(const std::vector<GiniSample>& samples, Band band,
                             AllocationMode mode, LosVariant variant) {
    std::vector<double> values;
    values.reserve(samples.size());
    for (const GiniSample& s : samples)
        if (s.variant == variant) values.push_back(s.value);
    if (values.empty()) throw std::invalid_argument("no samples");
    std::sort(values.begin(), values.end());

    PercentileReport rep;
    rep.band = band;
    rep.mode = mode;
    rep.variant = variant;
    rep.p20 = quantile(values, 0.2);
    rep.p50 = quantile(values, 0.5);
    rep.p80 = quantile(values, 0.8);
    rep.n_drops = static_cast<int>(values.size());
    return rep;
}

PercentileReport compare_to_reference(PercentileReport report, ReferenceTable table) {
    const auto ref = reference_row(table, report.band, report.variant);
    if (!ref)
        throw std::invalid_argument("no reference row for band " + sparsechan::to_string(report.band));
    report.reference_table = table;
    report.reference = ref;
    report.deltas = ReferenceRow{report.p20 - ref->p20, report.p50 - ref->p50,
                                 report.p80 - ref->p80};
    if (const auto g = gate_for(table, report.band, report.variant)) {
        report.gated = true;
        report.pass = std::abs(report.p50 - g->p50) <= g->tolerance;
    }
    return report;
}

std::vector<std::pair<double, double>> emit_cdf(const std::vector<GiniSample>& samples) {
    if (samples.empty()) throw std::invalid_argument("no samples");
    std::vector<double> values;
    values.reserve(samples.size());
    for (const GiniSample& s : samples) values.push_back(s.value);
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(values.size());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out.emplace_back(values[i], (static_cast<double>(i) + 0.5) / n);
    return out;
}

}  // namespace sparsechan::mc
