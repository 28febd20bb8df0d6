// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "sparsechan/channel_gen.hpp"
#include "sparsechan/gini.hpp"
#include "test_support.hpp"

using namespace sparsechan;
using namespace sparsechan::gen;

TEST_CASE("band presets carry the published statistics") {
    const BandProfile cm = presets::cm_wave();
    CHECK(cm.ds_log10_mu == -7.17);
    CHECK(cm.k_mu_db == 4.23);
    CHECK(cm.n_clusters == 9);
    CHECK(cm.ick_db == 4.93);
    const BandProfile sub = presets::sub_thz();
    CHECK(sub.ds_log10_mu == -8.47);
    CHECK(sub.ds_log10_sigma == 0.67);
    CHECK(sub.k_sigma_db == 7.9);
    CHECK(sub.n_clusters == 3);
    CHECK(sub.ick_db == 17.99);
    CHECK(presets::mm_wave().n_clusters == 8);
    CHECK_THROWS_AS(presets::by_band(Band::custom), std::invalid_argument);
}

TEST_CASE("degenerate sigma pins the LSP draw") {
    BandProfile p = presets::sub_thz();
    p.ds_log10_sigma = 0.0;
    p.k_sigma_db = 0.0;
    RandomStream rng(1);
    const LspDraw d = draw_lsp(p, rng);
    CHECK(d.ds_s == doctest::Approx(std::pow(10.0, -8.47)).epsilon(1e-12));
    CHECK(d.k_db == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(d.n_clusters == 3);

    BandProfile cm = presets::cm_wave();
    cm.k_sigma_db = 0.0;
    RandomStream rng2(1);
    CHECK(draw_lsp(cm, rng2).k_db == doctest::Approx(4.23).epsilon(1e-12));
}

TEST_CASE("LSP draws are seed-deterministic") {
    const BandProfile p = presets::mm_wave();
    RandomStream a(42), b(42);
    const LspDraw da = draw_lsp(p, a);
    const LspDraw db = draw_lsp(p, b);
    CHECK(da.ds_s == db.ds_s);
    CHECK(da.k_db == db.k_db);
}

TEST_CASE("cluster delays") {
    RandomStream rng(7);
    SUBCASE("single cluster is pinned at zero") {
        const Eigen::ArrayXd d = gen_cluster_delays(1e-9, 1, 3.6, rng);
        CHECK(d.size() == 1);
        CHECK(d[0] == 0.0);
    }
    SUBCASE("ascending and nonnegative") {
        const Eigen::ArrayXd d = gen_cluster_delays(5e-9, 12, 3.6, rng);
        CHECK(d[0] == 0.0);
        for (Eigen::Index i = 1; i < d.size(); ++i) CHECK(d[i] >= d[i - 1]);
    }
    SUBCASE("hand-evaluated draw") {
        // x = {e^-1, e^-2}, ds = 1 ns, r_tau = 2: raw delays {2, 4} ns,
        // normalized [0, 2] ns.
        Eigen::ArrayXd xs(2);
        xs << std::exp(-1.0), std::exp(-2.0);
        const Eigen::ArrayXd d = cluster_delays_from_uniforms(1e-9, 2.0, xs);
        CHECK(d[0] == 0.0);
        CHECK(d[1] == doctest::Approx(2e-9).epsilon(1e-12));
    }
}

TEST_CASE("cluster powers") {
    SUBCASE("power ratio follows the delay law with shadowing off") {
        Eigen::ArrayXd delays(2);
        const double tau = 4e-9, ds = 2e-9, r_tau = 3.6;
        delays << 0.0, tau;
        const ClusterPowers p = cluster_powers_from_draws(delays, ds, r_tau, 0.0, false,
                                                          Eigen::ArrayXd::Zero(2));
        CHECK(p.specular == 0.0);
        CHECK(p.cluster.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(p.cluster[0] / p.cluster[1] ==
              doctest::Approx(std::exp(tau * (r_tau - 1.0) / (r_tau * ds))).epsilon(1e-12));
    }
    SUBCASE("huge K-factor sends everything into the specular") {
        Eigen::ArrayXd delays(3);
        delays << 0.0, 1e-9, 2e-9;
        const ClusterPowers p = cluster_powers_from_draws(delays, 1e-9, 3.6, 1000.0, true,
                                                          Eigen::ArrayXd::Zero(3));
        CHECK(p.specular >= 0.999999);  // k capped at 60 dB
        CHECK(p.cluster.sum() + p.specular == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("normalization holds under random shadowing") {
        RandomStream rng(3);
        const Eigen::ArrayXd delays = gen_cluster_delays(3e-9, 9, 3.6, rng);
        const ClusterPowers p =
            gen_cluster_powers(delays, 3e-9, 3.6, 4.2, 6.0, true, rng);
        CHECK(p.cluster.sum() + p.specular == doctest::Approx(1.0).epsilon(1e-12));
        CHECK((p.cluster > 0.0).all());
    }
}

TEST_CASE("equal allocation") {
    const Eigen::ArrayXd a = allocate_equal(1.0, 20);
    CHECK(a.size() == 20);
    for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a[i] == 0.05);
    CHECK(a.sum() == doctest::Approx(1.0).epsilon(1e-15));
    const Eigen::ArrayXd one = allocate_equal(1.0, 1);
    CHECK(one.size() == 1);
    CHECK(one[0] == 1.0);
}

TEST_CASE("ick allocation") {
    SUBCASE("reference sub-THz concentration") {
        const double ick = std::pow(10.0, 17.99 / 10.0);
        const Eigen::ArrayXd a = allocate_ick(10.0, 20, ick);
        CHECK(a[0] == doctest::Approx(ick / (ick + 1.0) * 10.0).epsilon(1e-15));
        CHECK(a[0] == doctest::Approx(9.8436).epsilon(1e-4));
        for (int i = 1; i < 20; ++i) {
            CHECK(a[i] == doctest::Approx(10.0 / ((ick + 1.0) * 19.0)).epsilon(1e-15));
            CHECK(a[i] == doctest::Approx(0.00823).epsilon(1e-3));
        }
        CHECK(a.sum() == doctest::Approx(10.0).epsilon(1e-12));
    }
    SUBCASE("boundary value reduces to the equal split") {
        const Eigen::ArrayXd a = allocate_ick(1.0, 20, 1.0 / 19.0);
        const Eigen::ArrayXd e = allocate_equal(1.0, 20);
        for (int i = 0; i < 20; ++i) CHECK(std::abs(a[i] - e[i]) <= 1e-15);
    }
    SUBCASE("two-ray split") {
        const Eigen::ArrayXd a = allocate_ick(1.0, 2, 4.0);
        CHECK(a[0] == 0.8);
        CHECK(a[1] == doctest::Approx(0.2).epsilon(1e-15));
    }
    SUBCASE("needs at least two rays") {
        CHECK_THROWS_WITH_AS(allocate_ick(1.0, 1, 4.0), "ICK needs >= 2 rays",
                             std::invalid_argument);
    }
}

TEST_CASE("generated drops have the documented shape") {
    GenConfig cfg;
    cfg.master_seed = 9;
    const BandProfile sub = presets::sub_thz();

    const ChannelRealization r = generate_drop(sub, cfg, AllocationMode::equal, 0);
    CHECK(r.rays.size() == 61);  // 3 clusters x 20 rays + LoS
    CHECK(r.has_los);
    CHECK(r.band == Band::sub_thz);
    int flagged = 0;
    double total = 0.0;
    for (const Ray& ray : r.rays) {
        total += ray.power;
        flagged += ray.is_los ? 1 : 0;
        CHECK(ray.power > 0.0);
        CHECK(ray.delay_s >= 0.0);
    }
    CHECK(flagged == 1);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("drops are bitwise reproducible") {
    GenConfig cfg;
    cfg.master_seed = 1234;
    const BandProfile p = presets::cm_wave();
    const ChannelRealization a = generate_drop(p, cfg, AllocationMode::ick, 17);
    const ChannelRealization b = generate_drop(p, cfg, AllocationMode::ick, 17);
    REQUIRE(a.rays.size() == b.rays.size());
    for (std::size_t i = 0; i < a.rays.size(); ++i) {
        CHECK(a.rays[i].delay_s == b.rays[i].delay_s);
        CHECK(a.rays[i].power == b.rays[i].power);
        CHECK(a.rays[i].aoa_az_deg == b.rays[i].aoa_az_deg);
        CHECK(a.rays[i].aoa_el_deg == b.rays[i].aoa_el_deg);
        CHECK(a.rays[i].is_los == b.rays[i].is_los);
    }
    CHECK(a.seed == b.seed);
    const ChannelRealization c = generate_drop(p, cfg, AllocationMode::ick, 18);
    CHECK(a.rays[1].power != c.rays[1].power);
}

TEST_CASE("ick drops concentrate I/(I+1) per cluster") {
    GenConfig cfg;
    cfg.master_seed = 5;
    const BandProfile sub = presets::sub_thz();
    const ChannelRealization r = generate_drop(sub, cfg, AllocationMode::ick, 2);
    const double ick = std::pow(10.0, sub.ick_db / 10.0);
    const auto clusters = clusters_by_delay(r);
    REQUIRE(clusters.size() == 3);
    int dominant_count = 0;
    for (const Cluster& c : clusters) {
        CHECK(c.rays.size() == 20);
        CHECK(c.rays[0].power ==
              doctest::Approx(ick / (ick + 1.0) * c.power).epsilon(1e-12));
        ++dominant_count;
    }
    CHECK(dominant_count == 3);
}

TEST_CASE("boundary ick equals the equal-mode drop ray by ray") {
    BandProfile p = presets::sub_thz();
    p.ick_db = 10.0 * std::log10(1.0 / 19.0);
    GenConfig cfg;
    cfg.master_seed = 77;
    const ChannelRealization eq = generate_drop(p, cfg, AllocationMode::equal, 4);
    const ChannelRealization ick = generate_drop(p, cfg, AllocationMode::ick, 4);
    REQUIRE(eq.rays.size() == ick.rays.size());
    for (std::size_t i = 0; i < eq.rays.size(); ++i)
        CHECK(std::abs(eq.rays[i].power - ick.rays[i].power) <= 1e-15);
}

TEST_CASE("ick drops are at least as sparse as equal drops") {
    GenConfig cfg;
    cfg.master_seed = 31;
    for (const BandProfile& p : presets::all()) {
        for (std::uint64_t d = 0; d < 50; ++d) {
            const auto eq = generate_drop(p, cfg, AllocationMode::equal, d);
            const auto ick = generate_drop(p, cfg, AllocationMode::ick, d);
            CHECK(gini_realization(ick, LosVariant::without_los).value >=
                  gini_realization(eq, LosVariant::without_los).value - 1e-12);
        }
    }
}

TEST_CASE("ray coefficients carry the allocated power") {
    const Cluster c = make_cluster({Ray{0, 0.5, 0, 0, false}, Ray{0, 0.3, 0, 0, false},
                                    Ray{0, 0.2, 0, 0, false}});
    RandomStream rng(6);
    const auto coeffs = draw_ray_coefficients(c, 0.0, 0.0, rng);
    REQUIRE(coeffs.size() == 3);
    CHECK(std::norm(coeffs[0].amplitude) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::norm(coeffs[1].amplitude) == doctest::Approx(0.3).epsilon(1e-12));
    for (const auto& rc : coeffs) {
        CHECK(rc.phase_rad >= 0.0);
        CHECK(rc.phase_rad < 6.2831853072);
        CHECK(rc.doppler_hz == 0.0);
    }
    const auto moving = draw_ray_coefficients(c, 5.0, 20.0, rng);
    for (const auto& rc : moving) {
        CHECK(rc.doppler_hz >= 5.0);
        CHECK(rc.doppler_hz <= 20.0);
    }
    const auto pinned = draw_ray_coefficients(c, 7.5, 7.5, rng);
    for (const auto& rc : pinned) CHECK(rc.doppler_hz == 7.5);
}

TEST_CASE("static single ray with zero phase gives sqrt(P)") {
    const std::vector<RayCoefficient> rays = {
        RayCoefficient{std::polar(std::sqrt(0.36), 0.0), 0.0, 0.0}};
    const std::complex<double> h = cluster_coefficient(rays, 12.5);
    CHECK(h.real() == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(h.imag() == 0.0);
}

TEST_CASE("phase-averaged coefficient power equals the cluster power") {
    const Cluster c = make_cluster({Ray{0, 0.5, 0, 0, false}, Ray{0, 0.3, 0, 0, false},
                                    Ray{0, 0.2, 0, 0, false}});
    RandomStream rng(99);
    double mean_sq = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const auto coeffs = draw_ray_coefficients(c, 0.0, 0.0, rng);
        mean_sq += std::norm(cluster_coefficient(coeffs, 0.0));
    }
    mean_sq /= draws;
    CHECK(mean_sq == doctest::Approx(c.power).epsilon(0.03));
}

TEST_CASE("coefficient synthesis is identical across modes at the boundary ick") {
    // With I = 1/(M-1) the allocated powers coincide, so the same stream
    // must give the same coefficients term by term.
    const double ick = 1.0 / 2.0;
    std::vector<Ray> rays_eq, rays_ick;
    const Eigen::ArrayXd eq = allocate_equal(1.0, 3);
    const Eigen::ArrayXd ik = allocate_ick(1.0, 3, ick);
    for (int i = 0; i < 3; ++i) {
        rays_eq.push_back(Ray{0, eq[i], 0, 0, false});
        rays_ick.push_back(Ray{0, ik[i], 0, 0, false});
    }
    RandomStream ra(404), rb(404);
    const auto ha = synthesize_coefficients({make_cluster(rays_eq)}, AllocationMode::equal, 0.5, ra);
    const auto hb = synthesize_coefficients({make_cluster(rays_ick)}, AllocationMode::ick, 0.5, rb);
    REQUIRE(ha.size() == 1);
    CHECK(std::abs(ha[0] - hb[0]) <= 1e-15);
}

TEST_CASE("config validation") {
    GenConfig bad;
    bad.m_rays = 1;
    CHECK_THROWS_AS(gen::validate(bad), std::invalid_argument);
    bad = GenConfig{};
    bad.r_tau = 1.0;
    CHECK_THROWS_AS(gen::validate(bad), std::invalid_argument);
    bad = GenConfig{};
    bad.zeta_db = -1.0;
    CHECK_THROWS_AS(gen::validate(bad), std::invalid_argument);
}
