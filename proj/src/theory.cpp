// SPDX-License-Identifier: Apache-2.0

#include "sparsechan/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "sparsechan/channel_gen.hpp"
#include "sparsechan/gini.hpp"

namespace sparsechan::theory {

void validate(const ClusterPowerSet& cps) {
    if (cps.powers.size() < 1) throw std::invalid_argument("empty cluster power set");
    if (cps.m_rays < 2) throw std::invalid_argument("m_rays must be >= 2");
    for (Eigen::Index i = 0; i < cps.powers.size(); ++i) {
        if (!(cps.powers[i] > 0.0)) throw std::invalid_argument("nonpositive power");
        if (i > 0 && !(cps.powers[i] > cps.powers[i - 1]))
            throw std::invalid_argument("cluster powers must be strictly ascending");
    }
}

double g1_closed_form(const ClusterPowerSet& cps) {
    validate(cps);
    const int n_clusters = cps.n_clusters();
    const int m = cps.m_rays;
    const double r = static_cast<double>(cps.ray_count());
    const double l1 = cps.powers.sum();
    double acc = 0.0;
    for (int n = 1; n <= n_clusters; ++n) {
        const double share = cps.powers[n - 1] / static_cast<double>(m);
        for (int j = 1; j <= m; ++j)
            acc += share * (r - static_cast<double>(m) * (n - 1) - j + 0.5) / r;
    }
    double g = 1.0 - 2.0 * acc / l1;
    return g < 0.0 && g > -1e-12 ? 0.0 : g;
}

PowerVector expand_equal(const ClusterPowerSet& cps) {
    validate(cps);
    Eigen::ArrayXd p(cps.ray_count());
    Eigen::Index k = 0;
    for (Eigen::Index n = 0; n < cps.powers.size(); ++n) {
        const double share = cps.powers[n] / static_cast<double>(cps.m_rays);
        for (int j = 0; j < cps.m_rays; ++j) p[k++] = share;
    }
    return PowerVector(p);
}

PowerVector expand_ick(const ClusterPowerSet& cps, double ick_linear) {
    validate(cps);
    Eigen::ArrayXd d(cps.ray_count());
    Eigen::Index k = 0;
    for (Eigen::Index n = 0; n < cps.powers.size(); ++n) {
        const Eigen::ArrayXd alloc = gen::allocate_ick(cps.powers[n], cps.m_rays, ick_linear);
        for (Eigen::Index j = 0; j < alloc.size(); ++j) d[k++] = alloc[j];
    }
    return PowerVector(d);
}

double gk_closed_form(const ClusterPowerSet& cps, double ick_linear) {
    return gini(expand_ick(cps, ick_linear));
}

double gk_printed_form(const ClusterPowerSet& cps, double ick_linear) {
    validate(cps);
    if (!(ick_linear > 0.0)) throw std::invalid_argument("ICK must be > 0");
    const int n_clusters = cps.n_clusters();
    const int m = cps.m_rays;
    const double r = static_cast<double>(cps.ray_count());
    const double l1 = cps.powers.sum();
    double acc = 0.0;
    for (int n = 1; n <= n_clusters; ++n) {
        const double p_n = cps.powers[n - 1];
        const double small = p_n / ((ick_linear + 1.0) * static_cast<double>(m - 1));
        for (int j = 1; j <= m - 1; ++j)
            acc += small * (r - static_cast<double>(m) * (n - 1) - j + 0.5) / r;
        acc += ick_linear * p_n / (ick_linear + 1.0) * (r - static_cast<double>(m) * n + 0.5) / r;
    }
    return 1.0 - 2.0 * acc / l1;
}

namespace {

double min_boundary(int m) { return 1.0 / static_cast<double>(m - 1); }

void require_concentrating(const ClusterPowerSet& cps, double ick_linear) {
    if (ick_linear < min_boundary(cps.m_rays) * (1.0 - 1e-12))
        throw std::invalid_argument("ICK below 1/(M-1): dominant ray would not dominate");
}

double dominant_power(double p_n, double ick_linear) {
    return ick_linear / (ick_linear + 1.0) * p_n;
}

double remaining_power(double p_n, int m, double ick_linear) {
    return p_n / ((ick_linear + 1.0) * static_cast<double>(m - 1));
}

}  // namespace

Situation classify_situation(const ClusterPowerSet& cps, double ick_linear) {
    validate(cps);
    require_concentrating(cps, ick_linear);
    for (Eigen::Index n = 0; n + 1 < cps.powers.size(); ++n) {
        const double dom = dominant_power(cps.powers[n], ick_linear);
        const double rem_next = remaining_power(cps.powers[n + 1], cps.m_rays, ick_linear);
        if (dom > rem_next) return Situation::order_changed;
    }
    return Situation::order_preserved;
}

DifferenceTerms difference_terms(const ClusterPowerSet& cps, double ick_linear) {
    validate(cps);
    require_concentrating(cps, ick_linear);
    const double m = static_cast<double>(cps.m_rays);
    Eigen::ArrayXd alphas =
        cps.powers * (1.0 / m - 1.0 / ((ick_linear + 1.0) * (m - 1.0)));
    // Clamp the rounding dust at the boundary I = 1/(M-1).
    alphas = alphas.max(0.0);
    return DifferenceTerms{std::move(alphas), classify_situation(cps, ick_linear)};
}

double difference_order_preserved(const ClusterPowerSet& cps, double ick_linear) {
    const DifferenceTerms terms = difference_terms(cps, ick_linear);
    if (terms.situation != Situation::order_preserved)
        throw std::invalid_argument("wrong situation");
    const double m = static_cast<double>(cps.m_rays);
    const double r = static_cast<double>(cps.ray_count());
    const double l1 = cps.powers.sum();
    return terms.given_out.sum() * (m * m - m) / (r * l1);
}

double difference_order_changed(const ClusterPowerSet& cps, double ick_linear) {
    validate(cps);
    require_concentrating(cps, ick_linear);
    if (cps.n_clusters() != 2)
        throw std::invalid_argument("order-changed closed form covers two clusters only");

    const int m = cps.m_rays;
    const int r_total = cps.ray_count();
    const double r = static_cast<double>(r_total);
    const double l1 = cps.powers.sum();
    const double p1 = cps.powers[0];
    const double p2 = cps.powers[1];

    const double dom1 = dominant_power(p1, ick_linear);
    const double rem2 = remaining_power(p2, m, ick_linear);
    if (dom1 < rem2)
        throw std::invalid_argument("wrong situation");

    const double m_d = static_cast<double>(m);
    const double alpha = p1 * (1.0 / m_d - 1.0 / ((ick_linear + 1.0) * (m_d - 1.0)));
    const double beta = p2 * (1.0 / m_d - 1.0 / ((ick_linear + 1.0) * (m_d - 1.0)));

    const auto weight = [r](int i) { return (r - static_cast<double>(i) + 0.5) / r; };
    // p_i of the equal split: p_1..p_M = P1/M, p_{M+1}..p_R = P2/M.
    const auto p_equal = [&](int i) { return i <= m ? p1 / m_d : p2 / m_d; };

    double term1 = 0.0;
    for (int i = 1; i <= m - 1; ++i) term1 += 2.0 * alpha / l1 * weight(i);

    double term2 = 0.0;
    for (int i = m; i <= r_total - 2; ++i)
        term2 += 2.0 * (p_equal(i) - p_equal(i + 1) + beta) / l1 * weight(i);

    const double term3 =
        2.0 * (p_equal(r_total - 1) - p_equal(m) - (m_d - 1.0) * alpha) / l1 * (3.0 / (2.0 * r));
    const double term4 = -2.0 * (m_d - 1.0) * beta / l1 * (1.0 / (2.0 * r));

    return term1 + term2 + term3 + term4;
}

TheoremReport verify_theorem(const ClusterPowerSet& cps, double ick_linear) {
    validate(cps);
    require_concentrating(cps, ick_linear);
    TheoremReport rep;
    rep.g1 = g1_closed_form(cps);
    rep.gk = gk_closed_form(cps, ick_linear);
    rep.delta = rep.gk - rep.g1;
    rep.situation = classify_situation(cps, ick_linear);
    rep.holds = rep.delta >= -1e-12;
    return rep;
}

}  // namespace sparsechan::theory
