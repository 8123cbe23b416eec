#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "degrenet/empirical.hpp"
#include "degrenet/errors.hpp"
#include "degrenet/metrics.hpp"
#include "degrenet/rate_policy.hpp"
#include "degrenet/stationary.hpp"

namespace degrenet {

enum class FitObjective { JsMidpoint, Kl, NegPearson };

inline std::string objective_name(FitObjective o) {
    switch (o) {
        case FitObjective::JsMidpoint: return "js";
        case FitObjective::Kl: return "kl";
        case FitObjective::NegPearson: return "negpearson";
    }
    return "?";
}

struct FitMetrics {
    double rho = 0.0;
    double kl = 0.0;  // natural log, empirical || theoretical
    double js = 0.0;  // midpoint form, base 2
};

struct FitReport {
    RatePolicy policy = RatePolicy::linear();
    double mu_star = 0.0;
    FitObjective objective = FitObjective::JsMidpoint;
    double objective_value = 0.0;
    double rho = 0.0;
    double kl = 0.0;
    double js = 0.0;
    int k_max_used = 0;
    bool boundary_pinned = false;
    bool non_unimodal = false;
    double dropped_zero_mass = 0.0;
    std::vector<std::pair<double, double>> search_trace;
};

namespace detail {

// The model's state space starts at degree 1; raw datasets can carry
// isolated vertices.
inline std::map<int, double> drop_zero_degree(const std::map<int, double>& probs,
                                              double* dropped_mass) {
    std::map<int, double> out = probs;
    double dropped = 0.0;
    if (auto it = out.find(0); it != out.end()) {
        dropped = it->second;
        out.erase(it);
    }
    if (out.empty())
        throw DomainError("empirical distribution has no support on degrees >= 1");
    if (dropped > 0.0) {
        double rest = 1.0 - dropped;
        for (auto& [k, p] : out) p /= rest;
    }
    if (dropped_mass) *dropped_mass = dropped;
    return out;
}

inline int fit_k_max(const std::map<int, double>& probs) {
    int max_deg = probs.empty() ? 1 : probs.rbegin()->first;
    return std::max(500, 2 * max_deg);
}

}  // namespace detail

// Pearson / KL / midpoint-JS of an empirical distribution against the
// stationary law at the given mu, aligned on the union support with the
// standard smoothing epsilon.
inline FitMetrics evaluate_fit(const EmpiricalPmf& empirical,
                               const RatePolicy& policy, double mu,
                               int k_max = 0, double epsilon = 1e-12) {
    auto emp = detail::drop_zero_degree(empirical.probs, nullptr);
    if (k_max <= 0) k_max = detail::fit_k_max(emp);
    auto theory = stationary_pmf(policy, mu, k_max, 1e-9);
    auto pair = align(emp, theory.as_map(), epsilon);
    FitMetrics m;
    m.rho = pearson(pair);
    m.kl = kl(pair, LogBase::Natural);
    m.js = js_midpoint(pair);
    return m;
}

// Estimate the decrease rate mu that best explains an empirical degree
// distribution under the chosen law: a 64-point log-spaced grid scan picks
// the bracket, golden-section narrows it to 1e-4 on mu, and the best point
// ever evaluated is reported (so the trace never beats the answer).
inline FitReport fit_mu(const EmpiricalPmf& empirical, const RatePolicy& policy,
                        FitObjective objective,
                        std::pair<double, double> mu_bounds) {
    const auto [lo, hi] = mu_bounds;
    if (!(lo > 0.0) || !(hi > lo))
        throw DomainError("mu bounds must satisfy 0 < lo < hi");
    if (policy.kind() == RateKind::Linear && !(lo > 1.0))
        throw DomainError("linear rate law is only stationary for mu > 1; "
                          "raise the lower bound above 1");

    FitReport report;
    report.policy = policy;
    report.objective = objective;

    auto emp = detail::drop_zero_degree(empirical.probs, &report.dropped_zero_mass);
    report.k_max_used = detail::fit_k_max(emp);

    constexpr double kInfeasible = std::numeric_limits<double>::infinity();
    auto objective_at = [&](double mu) {
        double value;
        try {
            auto theory = stationary_pmf(policy, mu, report.k_max_used, 1e-9);
            auto pair = align(emp, theory.as_map(), 1e-12);
            switch (objective) {
                case FitObjective::JsMidpoint: value = js_midpoint(pair); break;
                case FitObjective::Kl: value = kl(pair, LogBase::Natural); break;
                case FitObjective::NegPearson: value = -pearson(pair); break;
                default: value = kInfeasible;
            }
        } catch (const TruncationError&) {
            value = kInfeasible;  // tail cannot fit at this k_max; steer away
        }
        report.search_trace.emplace_back(mu, value);
        return value;
    };

    // coarse log-spaced pre-scan
    constexpr int kGridPoints = 64;
    std::vector<double> grid(kGridPoints);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < kGridPoints; ++i)
        grid[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * i / (kGridPoints - 1));
    std::vector<double> values(kGridPoints);
    int best = 0;
    int finite_minima = 0;
    for (int i = 0; i < kGridPoints; ++i) {
        values[static_cast<std::size_t>(i)] = objective_at(grid[static_cast<std::size_t>(i)]);
        if (values[static_cast<std::size_t>(i)] < values[static_cast<std::size_t>(best)])
            best = i;
    }
    for (int i = 0; i < kGridPoints; ++i) {
        double v = values[static_cast<std::size_t>(i)];
        if (std::isinf(v)) continue;
        double left = i > 0 ? values[static_cast<std::size_t>(i - 1)] : kInfeasible;
        double right = i + 1 < kGridPoints ? values[static_cast<std::size_t>(i + 1)] : kInfeasible;
        if (v < left && v < right) ++finite_minima;
    }
    report.non_unimodal = finite_minima > 1;

    if (std::isinf(values[static_cast<std::size_t>(best)]))
        throw ExistenceError("objective is infeasible across the whole mu range; "
                             "k_max cannot hold the stationary tail anywhere");

    // golden-section inside the bracketing grid cell
    double a = grid[static_cast<std::size_t>(std::max(0, best - 1))];
    double b = grid[static_cast<std::size_t>(std::min(kGridPoints - 1, best + 1))];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective_at(x1);
    double f2 = objective_at(x2);
    while (b - a > 1e-4) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective_at(x2);
        }
    }

    // the answer is the best point actually evaluated
    auto best_it = std::min_element(
        report.search_trace.begin(), report.search_trace.end(),
        [](const auto& l, const auto& r) { return l.second < r.second; });
    report.mu_star = best_it->first;
    report.objective_value = best_it->second;
    report.boundary_pinned =
        report.mu_star <= lo * (1.0 + 1e-9) || report.mu_star >= hi * (1.0 - 1e-9);

    auto metrics = evaluate_fit(empirical, policy, report.mu_star,
                                report.k_max_used);
    report.rho = metrics.rho;
    report.kl = metrics.kl;
    report.js = metrics.js;
    return report;
}

}  // namespace degrenet
