#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "degrenet/errors.hpp"
#include "degrenet/rate_policy.hpp"

namespace degrenet {

// exp() of anything below this is zero in double precision.
inline constexpr double kLogUnderflowGuard = -745.0;

namespace detail {

// Compensated (Kahan) accumulator. The stationary sums have to land within
// 1e-12 of their analytic identities, which plain left-to-right summation
// does not guarantee for long series.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace detail

// Truncated stationary degree distribution. probs[i] holds the mass at
// degree i+1, exactly as the closed form / recursion produces it (never
// renormalized); whatever the truncation cut off is reported in tail_mass.
struct StationaryPmf {
    RatePolicy policy = RatePolicy::linear();
    double mu = 0.0;
    int k_max = 0;
    std::vector<double> probs;
    double tail_mass = 0.0;

    double prob(int k) const {
        if (k < 1 || k > k_max)
            throw DomainError("degree out of range: k=" + std::to_string(k));
        return probs[static_cast<std::size_t>(k) - 1];
    }

    std::map<int, double> as_map() const {
        std::map<int, double> m;
        for (int k = 1; k <= k_max; ++k)
            m[k] = probs[static_cast<std::size_t>(k) - 1];
        return m;
    }
};

// Whether the degree chain with birth rate lambda(k) and death rate k*mu has
// a stationary law. The linear law needs mu > 1 (at mu = 1 the normalizing
// series is harmonic); the logarithmic and clamped tabulated laws always
// converge because their term ratio lambda(k)/((k+1)*mu) vanishes.
inline bool stationarity_holds(const RatePolicy& policy, double mu) {
    if (!(mu > 0.0))
        throw DomainError("degree decrease rate mu must be positive");
    switch (policy.kind()) {
        case RateKind::Linear: return mu > 1.0;
        case RateKind::Logarithmic: return true;
        case RateKind::Tabulated: return true;
    }
    return false;
}

namespace detail {

// Relative weights t_k of the stationary law, in log space:
//   t_1 = 1,   t_k = t_{k-1} * lambda(k-1) / (k * mu).
// Terms are produced until they fall far enough below the running maximum
// that they can no longer move a double-precision sum, so the returned
// vector covers the entire support that matters.
struct LogTermSeries {
    std::vector<double> log_terms;  // log_terms[i] = log t_{i+1}
    double log_norm = 0.0;          // log sum over all terms
};

inline LogTermSeries build_log_terms(const RatePolicy& policy, double mu,
                                     int k_min) {
    constexpr double kSpan = 760.0;
    constexpr int kHardCap = 4'000'000;

    LogTermSeries out;
    out.log_terms.push_back(0.0);
    const double log_mu = std::log(mu);
    double log_max = 0.0;
    for (int k = 2;; ++k) {
        double prev = out.log_terms.back();
        double next = prev + std::log(policy.rate(k - 1)) -
                      std::log(static_cast<double>(k)) - log_mu;
        bool decaying = next < prev;
        if (decaying && next < log_max - kSpan &&
            static_cast<int>(out.log_terms.size()) >= k_min)
            break;
        if (k > kHardCap)
            throw ResourceError("stationary series exceeded the term cap; "
                                "the rate law does not decay fast enough");
        out.log_terms.push_back(next);
        log_max = std::max(log_max, next);
    }

    KahanSum s;
    for (double lt : out.log_terms) s.add(std::exp(lt - log_max));
    out.log_norm = log_max + std::log(s.value());
    return out;
}

}  // namespace detail

// Partial sum of the logarithmic-law normalizing series
//   S(mu) = sum_{k=2..k_cap} prod_{j=1}^{k-1} ln(1+j) / (k! mu^{k-1}),
// accumulated from log-space term representations. Terms whose log falls
// below the underflow guard are skipped; their count is reported alongside.
struct SeriesSum {
    double value = 0.0;
    int skipped_terms = 0;
};

inline SeriesSum series_S_log(double mu, int k_cap) {
    if (!(mu > 0.0))
        throw DomainError("degree decrease rate mu must be positive");
    if (k_cap < 2)
        throw DomainError("series cap must be at least 2");

    const RatePolicy policy = RatePolicy::logarithmic();
    const double log_mu = std::log(mu);
    SeriesSum out;
    detail::KahanSum acc;
    double lt = 0.0;  // log t_1
    for (int k = 2; k <= k_cap; ++k) {
        lt += std::log(policy.rate(k - 1)) - std::log(static_cast<double>(k)) - log_mu;
        if (lt < kLogUnderflowGuard) {
            ++out.skipped_terms;
            continue;
        }
        acc.add(std::exp(lt));
    }
    out.value = acc.value();
    return out;
}

namespace detail {

// Tail walk for the linear closed form: sums P_k for k > k_max and finds the
// smallest truncation point whose tail would satisfy tail_tol.
struct LinearTail {
    double tail = 0.0;
    int suggested_k_max = 0;
};

inline LinearTail linear_tail(double mu, int k_max, double tail_tol) {
    constexpr int kWalkCap = 50'000'000;
    const double x = 1.0 / mu;
    const double norm = -1.0 / std::log1p(-x);

    KahanSum tail;
    double xk = std::pow(x, k_max);
    int k = k_max;
    double remainder;
    while (true) {
        ++k;
        xk *= x;
        double term = norm * xk / k;
        tail.add(term);
        // geometric bound on everything past k
        remainder = norm * xk * x / (1.0 - x) / (k + 1);
        if (remainder < 1e-18 || k > kWalkCap) break;
    }
    LinearTail out;
    out.tail = tail.value() + remainder;

    if (out.tail <= tail_tol) {
        out.suggested_k_max = k_max;
        return out;
    }
    // second pass: peel terms off the front of the tail until it fits
    double suffix = out.tail;
    xk = std::pow(x, k_max);
    int j = k_max;
    while (suffix > tail_tol && j <= kWalkCap) {
        ++j;
        xk *= x;
        suffix -= norm * xk / j;
    }
    out.suggested_k_max = j;
    return out;
}

}  // namespace detail

// Stationary degree distribution truncated at k_max.
//
// Linear law: the closed form P_k = -(1/mu)^k / (k * ln(1 - 1/mu)) of the
// log-series distribution with parameter 1/mu. Logarithmic and tabulated
// laws: the balance recursion normalized through log-sum-exp, which keeps
// P_1 = 1/(1 + S(mu)) meaningful even where S(mu) overflows a double.
//
// Fails with TruncationError when the mass beyond k_max exceeds tail_tol.
inline StationaryPmf stationary_pmf(const RatePolicy& policy, double mu,
                                    int k_max = 500, double tail_tol = 1e-9) {
    if (k_max < 2)
        throw DomainError("k_max must be at least 2");
    if (!(tail_tol > 0.0))
        throw DomainError("tail tolerance must be positive");
    if (!stationarity_holds(policy, mu))
        throw ExistenceError(
            "no stationary degree distribution for the linear rate law with mu=" +
            std::to_string(mu) + " (requires mu > 1)");

    StationaryPmf pmf;
    pmf.policy = policy;
    pmf.mu = mu;
    pmf.k_max = k_max;
    pmf.probs.resize(static_cast<std::size_t>(k_max), 0.0);

    if (policy.kind() == RateKind::Linear) {
        const double x = 1.0 / mu;
        const double norm = -1.0 / std::log1p(-x);
        for (int k = 1; k <= k_max; ++k)
            pmf.probs[static_cast<std::size_t>(k) - 1] = norm * std::pow(x, k) / k;
        auto tail = detail::linear_tail(mu, k_max, tail_tol);
        pmf.tail_mass = tail.tail;
        if (pmf.tail_mass > tail_tol)
            throw TruncationError(
                "tail mass " + std::to_string(pmf.tail_mass) + " at k_max=" +
                    std::to_string(k_max) + " exceeds tolerance; k_max >= " +
                    std::to_string(tail.suggested_k_max) + " would satisfy it",
                tail.suggested_k_max);
        return pmf;
    }

    auto series = detail::build_log_terms(policy, mu, k_max);
    const auto n_terms = static_cast<int>(series.log_terms.size());
    for (int k = 1; k <= std::min(k_max, n_terms); ++k) {
        double lp = series.log_terms[static_cast<std::size_t>(k) - 1] - series.log_norm;
        pmf.probs[static_cast<std::size_t>(k) - 1] =
            lp < kLogUnderflowGuard ? 0.0 : std::exp(lp);
    }
    detail::KahanSum tail;
    for (int k = k_max + 1; k <= n_terms; ++k)
        tail.add(std::exp(series.log_terms[static_cast<std::size_t>(k) - 1] -
                          series.log_norm));
    pmf.tail_mass = tail.value();
    if (pmf.tail_mass > tail_tol) {
        // walk back from the end to find the truncation point that fits
        detail::KahanSum suffix;
        int suggested = n_terms;
        for (int k = n_terms; k >= 1; --k) {
            suffix.add(std::exp(series.log_terms[static_cast<std::size_t>(k) - 1] -
                                series.log_norm));
            if (suffix.value() > tail_tol) {
                suggested = k;
                break;
            }
        }
        throw TruncationError(
            "tail mass " + std::to_string(pmf.tail_mass) + " at k_max=" +
                std::to_string(k_max) + " exceeds tolerance; k_max >= " +
                std::to_string(suggested) + " would satisfy it",
            suggested);
    }
    return pmf;
}

// Mean stationary degree. Linear law: -1 / ((mu - 1) ln(1 - 1/mu)).
// Other laws: sum k * P_k over the full series (the term walk extends far
// enough that the truncation error is below double resolution).
inline double expected_degree(const RatePolicy& policy, double mu) {
    if (!stationarity_holds(policy, mu))
        throw ExistenceError(
            "no stationary degree distribution for the linear rate law with mu=" +
            std::to_string(mu) + " (requires mu > 1)");
    if (policy.kind() == RateKind::Linear)
        return -1.0 / ((mu - 1.0) * std::log1p(-1.0 / mu));

    auto series = detail::build_log_terms(policy, mu, 2);
    detail::KahanSum acc;
    for (std::size_t i = 0; i < series.log_terms.size(); ++i) {
        double lp = series.log_terms[i] - series.log_norm;
        if (lp < kLogUnderflowGuard) continue;
        acc.add(static_cast<double>(i + 1) * std::exp(lp));
    }
    return acc.value();
}

// Decrease rate at which the stationary masses of adjacent degrees cross.
struct ThresholdReport {
    int lower_index = 0;  // k - 1
    int upper_index = 0;  // k
    double mu_star = 0.0; // P_{k-1}(mu_star) = P_k(mu_star)
};

// Closed form of the crossing: the balance ratio P_k / P_{k-1} =
// ln(k) / (k mu) equals one exactly at mu = ln(k) / k. Only the logarithmic
// law crosses; under the linear law the ratio (k-1)/(k mu) stays below one
// throughout the stationary region.
inline ThresholdReport adjacent_crossing_mu(const RatePolicy& policy, int k) {
    if (policy.kind() != RateKind::Logarithmic)
        throw UnsupportedPolicyError(
            "adjacent-degree crossings only occur under the logarithmic rate law");
    if (k < 2)
        throw DomainError("crossing needs k >= 2 so that degree k-1 exists");
    ThresholdReport r;
    r.lower_index = k - 1;
    r.upper_index = k;
    r.mu_star = std::log(static_cast<double>(k)) / static_cast<double>(k);
    return r;
}

// Independent route to the same crossing: bisection on the sign of
// P_k - P_{k-1} evaluated through the full PMF pipeline.
inline double adjacent_crossing_mu_numeric(const RatePolicy& policy, int k,
                                           double lo = 0.0, double hi = 0.0,
                                           double tol = 1e-12) {
    if (policy.kind() != RateKind::Logarithmic)
        throw UnsupportedPolicyError(
            "adjacent-degree crossings only occur under the logarithmic rate law");
    if (k < 2)
        throw DomainError("crossing needs k >= 2 so that degree k-1 exists");

    const double guess = std::log(static_cast<double>(k)) / static_cast<double>(k);
    if (lo <= 0.0) lo = guess / 4.0;
    if (hi <= 0.0) hi = guess * 4.0;
    const int pmf_k_max = std::max(32, 2 * k);

    auto diff = [&](double mu) {
        auto pmf = stationary_pmf(policy, mu, pmf_k_max, 1.0);
        return pmf.prob(k) - pmf.prob(k - 1);
    };
    double flo = diff(lo), fhi = diff(hi);
    if (!(flo > 0.0 && fhi < 0.0))
        throw DomainError("crossing bracket does not straddle a sign change");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (diff(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace degrenet
