// SPDX-License-Identifier: Apache-2.0
//
// sparsechan: stochastic multipath channel generation, Gini sparsity
// metrics, closed-form checks, and a synthetic sounder round trip.
//
// Exit codes: 0 success, 1 usage, 2 gated comparison or theorem failure,
// 3 I/O or data error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sparsechan/band_profile.hpp"
#include "sparsechan/channel_gen.hpp"
#include "sparsechan/drop_io.hpp"
#include "sparsechan/experiment.hpp"
#include "sparsechan/extraction.hpp"
#include "sparsechan/gini.hpp"
#include "sparsechan/theory.hpp"

namespace fs = std::filesystem;
using namespace sparsechan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitGateFail = 2;
constexpr int kExitIo = 3;

struct ProfileOpts {
    std::string band = "subTHz";
    double custom_ds_mu = -8.0;
    double custom_ds_sigma = 0.5;
    double custom_k_mu_db = 5.0;
    double custom_k_sigma_db = 4.0;
    int custom_clusters = 4;
    double custom_ick_db = 10.0;
    std::optional<double> ick_db_override;
};

void add_profile_options(CLI::App* cmd, ProfileOpts& p, bool multi_band,
                         std::vector<std::string>* bands) {
    if (multi_band) {
        cmd->add_option("--band", *bands,
                        "Band(s): cmWave, mmWave, subTHz, custom (default: all presets)")
            ->check(CLI::IsMember({"cmWave", "mmWave", "subTHz", "custom"}));
    } else {
        cmd->add_option("--band", p.band, "Band: cmWave, mmWave, subTHz, custom")
            ->check(CLI::IsMember({"cmWave", "mmWave", "subTHz", "custom"}));
    }
    cmd->add_option("--custom-ds-mu", p.custom_ds_mu, "Custom profile: log10(DS/1s) mean");
    cmd->add_option("--custom-ds-sigma", p.custom_ds_sigma, "Custom profile: log10(DS/1s) std");
    cmd->add_option("--custom-k-mu-db", p.custom_k_mu_db, "Custom profile: K-factor mean (dB)");
    cmd->add_option("--custom-k-sigma-db", p.custom_k_sigma_db, "Custom profile: K-factor std (dB)");
    cmd->add_option("--custom-clusters", p.custom_clusters, "Custom profile: cluster count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--custom-ick-db", p.custom_ick_db, "Custom profile: reference ICK (dB)");
    auto* ick = cmd->add_option("--ick-db", "Override the profile's reference ICK (dB)");
    ick->each([&p](const std::string& s) { p.ick_db_override = std::stod(s); });
}

BandProfile resolve_profile(const ProfileOpts& p, const std::string& band_name) {
    BandProfile profile;
    if (band_name == "custom") {
        profile = BandProfile{Band::custom,         "custom",
                              p.custom_ds_mu,       p.custom_ds_sigma,
                              p.custom_k_mu_db,     p.custom_k_sigma_db,
                              p.custom_clusters,    p.custom_ick_db};
    } else {
        profile = presets::by_band(band_from_string(band_name));
    }
    if (p.ick_db_override) profile.ick_db = *p.ick_db_override;
    validate(profile);
    return profile;
}

struct GenOpts {
    std::uint64_t seed = 1;
    int m_rays = 20;
    double r_tau = 3.6;
    double zeta_db = 6.0;
};

void add_gen_options(CLI::App* cmd, GenOpts& g) {
    cmd->add_option("--seed", g.seed, "Master seed");
    cmd->add_option("--m-rays", g.m_rays, "Rays per cluster")->check(CLI::Range(2, 1000));
    cmd->add_option("--r-tau", g.r_tau, "Delay scaling factor (> 1)");
    cmd->add_option("--zeta-db", g.zeta_db, "Per-cluster shadowing std (dB)");
}

gen::GenConfig to_gen_config(const GenOpts& g) {
    gen::GenConfig cfg;
    cfg.m_rays = g.m_rays;
    cfg.r_tau = g.r_tau;
    cfg.zeta_db = g.zeta_db;
    cfg.master_seed = g.seed;
    gen::validate(cfg);
    return cfg;
}

std::vector<fs::path> collect_drop_files(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const std::string& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".txt")
                    files.push_back(e.path());
        } else if (fs::is_regular_file(p)) {
            files.push_back(p);
        } else {
            throw std::runtime_error("no such file or directory: " + in);
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw std::runtime_error("no drop files found in the given inputs");
    return files;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir.string());
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << content;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::string run_tag(Band band, AllocationMode mode, LosVariant variant) {
    return to_string(band) + "_" + to_string(mode) + "_" + to_string(variant);
}

void print_report_line(const mc::PercentileReport& r) {
    std::printf("band=%-7s mode=%-5s variant=%-11s n=%-6d p20=%.4f p50=%.4f p80=%.4f",
                to_string(r.band).c_str(), to_string(r.mode).c_str(),
                to_string(r.variant).c_str(), r.n_drops, r.p20, r.p50, r.p80);
    if (r.reference) {
        std::printf("  ref_p50=%.2f delta=%+.4f", r.reference->p50, r.deltas->p50);
        if (r.gated) std::printf("  [gated: %s]", r.pass ? "PASS" : "FAIL");
    }
    std::printf("\n");
}

// ---------------------------------------------------------------- generate

int run_generate(const ProfileOpts& popts, const GenOpts& gopts, const std::string& mode_name,
                 int drops, const std::string& out_dir, bool fixture) {
    const BandProfile profile = resolve_profile(popts, popts.band);
    const AllocationMode mode = mode_from_string(mode_name);
    gen::GenConfig cfg = to_gen_config(gopts);
    ensure_dir(out_dir);

    const extract::SounderModel sounder = extract::sub_thz_indoor_sounder();
    for (int d = 0; d < drops; ++d) {
        ChannelRealization r = gen::generate_drop(profile, cfg, mode, d);
        if (fixture) {
            // Re-place rays so the extract round trip can resolve each one:
            // clusters at widely separated delay blocks, rays two bins apart
            // inside a block, angles snapped to the sounder grid, nothing on
            // the window edges. Powers are untouched.
            const double res = sounder.sample_interval_s();
            const int block = 2 * cfg.m_rays + 10;
            int cluster = -1, in_cluster = 0;
            double last_delay = -1.0;
            for (Ray& ray : r.rays) {
                if (ray.is_los) {
                    ray.delay_s = 4.0 * res;
                    ray.aoa_az_deg = 0.0;
                    ray.aoa_el_deg = 0.0;
                    continue;
                }
                if (ray.delay_s != last_delay) {
                    last_delay = ray.delay_s;
                    ++cluster;
                    in_cluster = 0;
                }
                ray.aoa_az_deg = std::clamp(std::round(ray.aoa_az_deg / 10.0) * 10.0, -180.0, 170.0);
                ray.aoa_el_deg = std::clamp(std::round(ray.aoa_el_deg / 10.0) * 10.0, -10.0, 10.0);
                ray.delay_s = (10.0 + cluster * block + 2.0 * in_cluster++) * res;
            }
        }
        const fs::path path = fs::path(out_dir) / ("drop_" + std::to_string(d) + ".txt");
        io::write_drop_file(path, io::DropRecord{std::move(r), static_cast<std::uint64_t>(d)});
        std::printf("wrote %s\n", path.string().c_str());
    }
    return kExitOk;
}

// ------------------------------------------------------------------ metrics

int run_metrics(const std::vector<std::string>& inputs, const std::string& variant_name,
                const std::string& out_dir) {
    const std::vector<fs::path> files = collect_drop_files(inputs);
    std::vector<LosVariant> variants;
    if (variant_name == "both" || variant_name == "with_los")
        variants.push_back(LosVariant::with_los);
    if (variant_name == "both" || variant_name == "without_los")
        variants.push_back(LosVariant::without_los);

    std::vector<io::SampleRow> rows;
    for (const fs::path& f : files) {
        io::DropRecord drop;
        try {
            drop = io::read_drop_file(f);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: %s\n", e.what());
            continue;
        }
        for (LosVariant v : variants) {
            try {
                const GiniSample s = gini_realization(drop.realization, v, drop.drop_index);
                rows.push_back(io::SampleRow{drop.realization.band, s});
            } catch (const std::invalid_argument& e) {
                if (v == LosVariant::with_los && drop.realization.rays.size() == 1) {
                    std::fprintf(stderr,
                                 "warning: %s: single-ray drop, Gini is 0 by convention\n",
                                 f.filename().string().c_str());
                    rows.push_back(io::SampleRow{
                        drop.realization.band,
                        GiniSample{0.0, drop.drop_index, v, drop.realization.mode}});
                } else {
                    std::fprintf(stderr, "error: %s (%s): %s\n", f.filename().string().c_str(),
                                 to_string(v).c_str(), e.what());
                }
            }
        }
    }
    if (rows.empty()) throw std::runtime_error("no usable samples in the given inputs");

    ensure_dir(out_dir);
    std::ofstream csv(fs::path(out_dir) / "samples.csv");
    io::write_samples_csv(csv, rows);

    // Percentile summary per (band, mode, variant) group.
    std::vector<mc::PercentileReport> reports;
    for (Band band : {Band::cm_wave, Band::mm_wave, Band::sub_thz, Band::custom}) {
        for (AllocationMode mode : {AllocationMode::equal, AllocationMode::ick}) {
            for (LosVariant v : {LosVariant::with_los, LosVariant::without_los}) {
                std::vector<GiniSample> group;
                for (const io::SampleRow& r : rows)
                    if (r.band == band && r.sample.mode == mode && r.sample.variant == v)
                        group.push_back(r.sample);
                if (group.empty()) continue;
                if (group.size() < 10)
                    std::fprintf(stderr,
                                 "warning: %s %s %s: only %zu samples, percentiles are noisy\n",
                                 to_string(band).c_str(), to_string(mode).c_str(),
                                 to_string(v).c_str(), group.size());
                reports.push_back(mc::percentiles(group, band, mode, v));
            }
        }
    }
    for (const auto& r : reports) print_report_line(r);
    write_text_file(fs::path(out_dir) / "summary.json", io::summary_json(reports, 0, ""));
    return kExitOk;
}

// --------------------------------------------------------------- montecarlo

int run_montecarlo(const ProfileOpts& popts, const GenOpts& gopts,
                   const std::vector<std::string>& bands, const std::vector<std::string>& modes,
                   int drops, int workers, const std::string& treatment_name,
                   const std::string& out_dir, bool svg) {
    const std::vector<std::string> band_names =
        bands.empty() ? std::vector<std::string>{"cmWave", "mmWave", "subTHz"} : bands;
    const std::vector<std::string> mode_names =
        modes.empty() ? std::vector<std::string>{"equal", "ick"} : modes;
    const mc::SpecularTreatment treatment = mc::treatment_from_string(treatment_name);

    ensure_dir(out_dir);
    std::vector<io::SampleRow> all_rows;
    std::vector<mc::PercentileReport> reports;
    bool all_gates_pass = true;

    for (const std::string& band_name : band_names) {
        const BandProfile profile = resolve_profile(popts, band_name);
        for (const std::string& mode_name : mode_names) {
            mc::RunSpec spec;
            spec.profile = profile;
            spec.cfg = to_gen_config(gopts);
            spec.mode = mode_from_string(mode_name);
            spec.drops = drops;
            spec.treatment = treatment;
            spec.workers = workers;
            const std::vector<GiniSample> samples = mc::run_monte_carlo(spec);
            for (const GiniSample& s : samples)
                all_rows.push_back(io::SampleRow{profile.band, s});

            for (LosVariant v : {LosVariant::with_los, LosVariant::without_los}) {
                mc::PercentileReport rep = mc::percentiles(samples, profile.band, spec.mode, v);
                if (profile.band != Band::custom)
                    rep = mc::compare_to_reference(rep, mc::table_for_mode(spec.mode));
                if (rep.gated && !rep.pass) all_gates_pass = false;
                print_report_line(rep);
                reports.push_back(rep);

                std::vector<GiniSample> variant_samples;
                for (const GiniSample& s : samples)
                    if (s.variant == v) variant_samples.push_back(s);
                const auto series = mc::emit_cdf(variant_samples);
                std::ofstream cdf(fs::path(out_dir) /
                                  ("cdf_" + run_tag(profile.band, spec.mode, v) + ".csv"));
                io::write_cdf_csv(cdf, series);
                if (svg)
                    write_text_file(fs::path(out_dir) /
                                        ("cdf_" + run_tag(profile.band, spec.mode, v) + ".svg"),
                                    io::cdf_svg(series, run_tag(profile.band, spec.mode, v)));
            }
        }
    }

    std::ofstream csv(fs::path(out_dir) / "samples.csv");
    io::write_samples_csv(csv, all_rows);
    write_text_file(fs::path(out_dir) / "summary.json",
                    io::summary_json(reports, gopts.seed, mc::to_string(treatment)));
    return all_gates_pass ? kExitOk : kExitGateFail;
}

// ------------------------------------------------------------- theory-check

theory::ClusterPowerSet random_cps(RandomStream& rng, int n_min, int n_max, int m_min, int m_max) {
    const int n = n_min + static_cast<int>(rng.uniform() * (n_max - n_min + 1));
    const int m = m_min + static_cast<int>(rng.uniform() * (m_max - m_min + 1));
    Eigen::ArrayXd p(n);
    for (int i = 0; i < n; ++i) p[i] = rng.uniform(0.05, 10.0);
    std::sort(p.data(), p.data() + p.size());
    for (int i = 1; i < n; ++i)
        if (p[i] <= p[i - 1]) p[i] = p[i - 1] * (1.0 + 1e-9);
    return theory::ClusterPowerSet{std::move(p), m};
}

double random_ick(RandomStream& rng, int m) {
    const double boundary = 1.0 / static_cast<double>(m - 1);
    // Half the draws stay near the boundary so the order-preserved situation
    // shows up often; the rest sweep up to 1e4.
    if (rng.uniform() < 0.5) return boundary * std::pow(10.0, rng.uniform(0.0, 0.3));
    return boundary * std::pow(10.0, rng.uniform(0.0, std::log10(1.0e4 / boundary)));
}

int run_theory_check(int sweep, std::uint64_t seed, std::optional<double> single_ick,
                     int single_m, const std::string& out_path) {
    nlohmann::json j;
    if (single_ick) {
        if (*single_ick < 1.0 / static_cast<double>(single_m - 1)) {
            std::fprintf(stderr, "error: --ick-linear below 1/(M-1) = %g\n",
                         1.0 / static_cast<double>(single_m - 1));
            return kExitUsage;
        }
        RandomStream rng(seed);
        const theory::ClusterPowerSet cps = random_cps(rng, 2, 2, single_m, single_m);
        const theory::TheoremReport rep = theory::verify_theorem(cps, *single_ick);
        j["instance"] = {{"m_rays", cps.m_rays},
                         {"powers", std::vector<double>(cps.powers.data(),
                                                        cps.powers.data() + cps.powers.size())},
                         {"ick_linear", *single_ick},
                         {"g1", rep.g1},
                         {"gk", rep.gk},
                         {"delta", rep.delta},
                         {"situation", rep.situation == theory::Situation::order_preserved
                                           ? "order_preserved"
                                           : "order_changed"},
                         {"holds", rep.holds}};
        const std::string text = j.dump(2) + "\n";
        if (out_path.empty())
            std::fputs(text.c_str(), stdout);
        else
            write_text_file(out_path, text);
        return rep.holds ? kExitOk : kExitGateFail;
    }

    RandomStream rng(seed);
    int preserved = 0, changed = 0, counterexamples = 0;
    double min_delta = std::numeric_limits<double>::infinity();
    nlohmann::json worst;
    for (int i = 0; i < sweep; ++i) {
        const theory::ClusterPowerSet cps = random_cps(rng, 1, 12, 2, 25);
        const double ick = random_ick(rng, cps.m_rays);
        const theory::TheoremReport rep = theory::verify_theorem(cps, ick);
        (rep.situation == theory::Situation::order_preserved ? preserved : changed) += 1;
        if (!rep.holds) ++counterexamples;
        if (rep.delta < min_delta) {
            min_delta = rep.delta;
            worst = {{"m_rays", cps.m_rays},
                     {"powers", std::vector<double>(cps.powers.data(),
                                                    cps.powers.data() + cps.powers.size())},
                     {"ick_linear", ick},
                     {"g1", rep.g1},
                     {"gk", rep.gk},
                     {"delta", rep.delta}};
        }
    }
    j["instances"] = sweep;
    j["seed"] = seed;
    j["order_preserved"] = preserved;
    j["order_changed"] = changed;
    j["counterexamples"] = counterexamples;
    j["min_delta"] = min_delta;
    j["worst_instance"] = worst;
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::fputs(text.c_str(), stdout);
    else
        write_text_file(out_path, text);
    return counterexamples == 0 ? kExitOk : kExitGateFail;
}

// ------------------------------------------------------------------ extract

int run_extract(const std::vector<std::string>& inputs, double beamwidth_deg,
                double bandwidth_hz, double floor_db, std::uint64_t seed,
                std::optional<int> target_clusters, bool hide_truth,
                const std::string& out_path) {
    extract::SounderModel sounder = extract::sub_thz_indoor_sounder();
    sounder.beamwidth_az_3db_deg = beamwidth_deg;
    sounder.bandwidth_hz = bandwidth_hz;
    sounder.noise_floor_db = floor_db;

    const std::vector<fs::path> files = collect_drop_files(inputs);
    std::ostringstream report;
    for (const fs::path& f : files) {
        const io::DropRecord drop = io::read_drop_file(f);
        const std::vector<Ray>& truth = drop.realization.rays;

        RandomStream rng(derive_stream_seed(seed, drop.drop_index));
        const std::vector<extract::Cir> cirs =
            extract::synthesize_measurement(truth, sounder, rng);

        std::vector<extract::AngledPeaks> per_angle;
        for (const extract::Cir& cir : cirs) {
            const extract::Pdp pdp = extract::pdp_from_cir(cir);
            per_angle.push_back(extract::AngledPeaks{
                cir.az_deg, cir.el_deg,
                extract::find_peaks(pdp, sounder.sample_interval_s(), sounder.noise_floor_db)});
        }
        const std::vector<Ray> rays = extract::screen_same_delay(per_angle, sounder);
        report << "file " << f.filename().string() << "\n";
        report << "  estimated rays: " << rays.size() << "\n";
        if (rays.size() >= 2) {
            const extract::LspEstimate lsp = extract::estimate_lsp(rays);
            report << "  estimated ds_s: " << io::format_double(lsp.ds_s)
                   << "  k_db: " << io::format_double(lsp.k_db) << "\n";
            const std::vector<Cluster> clusters =
                extract::cluster_rays(rays, target_clusters);
            report << "  clusters: " << clusters.size() << "\n";
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                report << "    cluster " << c << ": rays=" << clusters[c].rays.size()
                       << " power=" << io::format_double(clusters[c].power);
                if (clusters[c].rays.size() >= 2) {
                    const double ick = extract::estimate_ick(clusters[c]);
                    report << " ick_db=" << io::format_double(10.0 * std::log10(ick));
                }
                report << "\n";
            }
        }
        if (!hide_truth) {
            report << "  truth rays: " << truth.size() << "\n";
            int matched = 0;
            const double half_bin = 0.5 * sounder.sample_interval_s();
            for (const Ray& t : truth) {
                for (const Ray& e : rays)
                    if (std::abs(e.delay_s - t.delay_s) < half_bin) {
                        ++matched;
                        break;
                    }
            }
            report << "  truth rays matched in delay: " << matched << "/" << truth.size()
                   << "\n";
        }
    }
    if (out_path.empty())
        std::fputs(report.str().c_str(), stdout);
    else
        write_text_file(out_path, report.str());
    return kExitOk;
}

// ------------------------------------------------------------------- report

int run_report(const std::string& in_csv, const std::string& table_name,
               const std::string& out_dir, bool svg) {
    const std::vector<io::SampleRow> rows = io::read_samples_csv(in_csv);
    if (rows.empty()) throw std::runtime_error(in_csv + ": no sample rows");

    ensure_dir(out_dir);
    std::vector<mc::PercentileReport> reports;
    bool all_pass = true;
    for (Band band : {Band::cm_wave, Band::mm_wave, Band::sub_thz, Band::custom}) {
        for (AllocationMode mode : {AllocationMode::equal, AllocationMode::ick}) {
            for (LosVariant v : {LosVariant::with_los, LosVariant::without_los}) {
                std::vector<GiniSample> group;
                for (const io::SampleRow& r : rows)
                    if (r.band == band && r.sample.mode == mode && r.sample.variant == v)
                        group.push_back(r.sample);
                if (group.empty()) continue;
                mc::PercentileReport rep = mc::percentiles(group, band, mode, v);
                if (band != Band::custom) {
                    const mc::ReferenceTable table = table_name.empty()
                                                         ? mc::table_for_mode(mode)
                                                         : mc::table_from_string(table_name);
                    rep = mc::compare_to_reference(rep, table);
                }
                if (rep.gated && !rep.pass) all_pass = false;
                print_report_line(rep);
                reports.push_back(rep);
                if (svg) {
                    const auto series = mc::emit_cdf(group);
                    write_text_file(fs::path(out_dir) /
                                        ("cdf_" + run_tag(band, mode, v) + ".svg"),
                                    io::cdf_svg(series, run_tag(band, mode, v)));
                }
            }
        }
    }
    write_text_file(fs::path(out_dir) / "summary.json", io::summary_json(reports, 0, ""));
    return all_pass ? kExitOk : kExitGateFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparsechan: multipath channel sparsity toolkit"};
    app.set_config("--config", "", "Config file (INI-style, one section per subcommand)");
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Write channel drops as text files");
    ProfileOpts gen_profile;
    GenOpts gen_gen;
    std::string gen_mode = "equal";
    int gen_drops = 1;
    std::string gen_out = "out";
    bool gen_fixture = false;
    add_profile_options(generate, gen_profile, false, nullptr);
    add_gen_options(generate, gen_gen);
    generate->add_option("--mode", gen_mode, "Allocation mode: equal or ick")
        ->check(CLI::IsMember({"equal", "ick"}));
    generate->add_option("--drops", gen_drops, "Number of drops")->check(CLI::PositiveNumber);
    generate->add_option("--out", gen_out, "Output directory");
    generate->add_flag("--fixture", gen_fixture,
                       "Spread rays over distinct delay bins and snap angles to the sounder "
                       "grid (round-trip fixtures for 'extract')");

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Gini metrics over existing drop files");
    std::vector<std::string> metrics_in;
    std::string metrics_variant = "both";
    std::string metrics_out = "out";
    metrics->add_option("inputs", metrics_in, "Drop files or directories")->required();
    metrics->add_option("--variant", metrics_variant, "with_los, without_los, or both")
        ->check(CLI::IsMember({"with_los", "without_los", "both"}));
    metrics->add_option("--out", metrics_out, "Output directory");

    // montecarlo
    auto* montecarlo =
        app.add_subcommand("montecarlo", "Monte Carlo percentile reproduction and comparison");
    ProfileOpts mc_profile;
    GenOpts mc_gen;
    std::vector<std::string> mc_bands;
    std::vector<std::string> mc_modes;
    int mc_drops = 10000;
    int mc_workers = 1;
    std::string mc_treatment = "folded";
    std::string mc_out = "out";
    bool mc_svg = false;
    add_profile_options(montecarlo, mc_profile, true, &mc_bands);
    add_gen_options(montecarlo, mc_gen);
    montecarlo->add_option("--mode", mc_modes, "Allocation mode(s) (default: both)")
        ->check(CLI::IsMember({"equal", "ick"}));
    montecarlo->add_option("--drops", mc_drops, "Drops per run")->check(CLI::PositiveNumber);
    montecarlo->add_option("--workers", mc_workers, "Worker threads")->check(CLI::PositiveNumber);
    montecarlo->add_option("--specular", mc_treatment,
                           "Specular treatment for the with-LoS Gini: folded or separate")
        ->check(CLI::IsMember({"folded", "separate"}));
    montecarlo->add_option("--out", mc_out, "Output directory");
    montecarlo->add_flag("--svg", mc_svg, "Also write CDF plots as SVG");

    // theory-check
    auto* theory_check =
        app.add_subcommand("theory-check", "Randomized verification of the closed-form results");
    int tc_sweep = 10000;
    std::uint64_t tc_seed = 1;
    std::optional<double> tc_ick;
    int tc_m = 20;
    std::string tc_out;
    theory_check->add_option("--sweep", tc_sweep, "Number of random instances")
        ->check(CLI::PositiveNumber);
    theory_check->add_option("--seed", tc_seed, "Sweep seed");
    auto* tc_ick_opt = theory_check->add_option(
        "--ick-linear", "Check a single instance at this linear ICK instead of sweeping");
    tc_ick_opt->each([&tc_ick](const std::string& s) { tc_ick = std::stod(s); });
    theory_check->add_option("--m-rays", tc_m, "Rays per cluster for the single-instance check")
        ->check(CLI::Range(2, 1000));
    theory_check->add_option("--out", tc_out, "Write the JSON report here instead of stdout");

    // extract
    auto* extract_cmd =
        app.add_subcommand("extract", "Synthetic sounder round trip over drop fixtures");
    std::vector<std::string> ex_in;
    double ex_beamwidth = 9.9;
    double ex_bandwidth = 1.2e9;
    double ex_floor = -25.0;
    std::uint64_t ex_seed = 1;
    int ex_clusters = 0;
    bool ex_hide_truth = false;
    std::string ex_out;
    extract_cmd->add_option("inputs", ex_in, "Drop files or directories (truth fixtures)")
        ->required();
    extract_cmd->add_option("--beamwidth-deg", ex_beamwidth, "3 dB beamwidth (deg)");
    extract_cmd->add_option("--bandwidth-hz", ex_bandwidth, "RF bandwidth (Hz)");
    extract_cmd->add_option("--noise-floor-db", ex_floor,
                            "Noise floor relative to the strongest tap (<= -200: noiseless)");
    extract_cmd->add_option("--seed", ex_seed, "Synthesis seed");
    extract_cmd->add_option("--target-clusters", ex_clusters,
                            "Cluster count (0 = choose by elbow rule)");
    extract_cmd->add_flag("--no-truth", ex_hide_truth, "Report estimates only, no truth deltas");
    extract_cmd->add_option("--out", ex_out, "Write the report here instead of stdout");

    // report
    auto* report_cmd = app.add_subcommand("report", "Percentile report from a samples CSV");
    std::string rp_in;
    std::string rp_table;
    std::string rp_out = "out";
    bool rp_svg = false;
    report_cmd->add_option("--in", rp_in, "samples.csv produced by metrics/montecarlo")
        ->required();
    report_cmd->add_option("--table", rp_table,
                           "Reference table: 3gpp, measurement, or modified (default by mode)")
        ->check(CLI::IsMember({"3gpp", "measurement", "modified"}));
    report_cmd->add_option("--out", rp_out, "Output directory");
    report_cmd->add_flag("--svg", rp_svg, "Also write CDF plots as SVG");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (generate->parsed())
            return run_generate(gen_profile, gen_gen, gen_mode, gen_drops, gen_out, gen_fixture);
        if (metrics->parsed()) return run_metrics(metrics_in, metrics_variant, metrics_out);
        if (montecarlo->parsed())
            return run_montecarlo(mc_profile, mc_gen, mc_bands, mc_modes, mc_drops, mc_workers,
                                  mc_treatment, mc_out, mc_svg);
        if (theory_check->parsed())
            return run_theory_check(tc_sweep, tc_seed, tc_ick, tc_m, tc_out);
        if (extract_cmd->parsed())
            return run_extract(ex_in, ex_beamwidth, ex_bandwidth, ex_floor, ex_seed,
                               ex_clusters > 0 ? std::optional<int>(ex_clusters) : std::nullopt,
                               ex_hide_truth, ex_out);
        if (report_cmd->parsed()) return run_report(rp_in, rp_table, rp_out, rp_svg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return kExitUsage;
}
