#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "degrenet/empirical.hpp"
#include "degrenet/errors.hpp"
#include "degrenet/stationary.hpp"

namespace degrenet {

// Two distributions brought onto the union of their supports, floored at
// smoothing_epsilon and renormalized, ready for the divergence measures.
struct AlignedPair {
    std::vector<int> support;
    std::vector<double> p;
    std::vector<double> q;
    double smoothing_epsilon = 0.0;
};

inline std::map<int, double> to_prob_map(const EmpiricalPmf& e) { return e.probs; }
inline std::map<int, double> to_prob_map(const StationaryPmf& s) { return s.as_map(); }

inline AlignedPair align(const std::map<int, double>& a,
                         const std::map<int, double>& b, double epsilon = 1e-12) {
    if (epsilon < 0.0) throw DomainError("smoothing epsilon must be non-negative");
    if (a.empty() && b.empty()) throw DomainError("cannot align two empty distributions");

    AlignedPair pair;
    pair.smoothing_epsilon = epsilon;
    for (const auto& [k, _] : a) pair.support.push_back(k);
    for (const auto& [k, _] : b)
        if (!a.count(k)) pair.support.push_back(k);
    std::sort(pair.support.begin(), pair.support.end());

    auto take = [&](const std::map<int, double>& m, int k) {
        auto it = m.find(k);
        double v = it == m.end() ? 0.0 : it->second;
        if (v < 0.0) throw DomainError("negative probability in input distribution");
        return std::max(v, epsilon);
    };
    double sp = 0.0, sq = 0.0;
    for (int k : pair.support) {
        pair.p.push_back(take(a, k));
        pair.q.push_back(take(b, k));
        sp += pair.p.back();
        sq += pair.q.back();
    }
    if (!(sp > 0.0) || !(sq > 0.0))
        throw DomainError("cannot normalize an all-zero distribution with epsilon=0");
    for (double& v : pair.p) v /= sp;
    for (double& v : pair.q) v /= sq;
    return pair;
}

template <typename A, typename B>
AlignedPair align(const A& a, const B& b, double epsilon = 1e-12) {
    return align(to_prob_map(a), to_prob_map(b), epsilon);
}

// Sample Pearson correlation of the two aligned probability vectors.
inline double pearson(const AlignedPair& pair) {
    const std::size_t n = pair.support.size();
    if (n < 2) throw DomainError("correlation needs at least two support points");
    double mp = 0.0, mq = 0.0;
    for (std::size_t i = 0; i < n; ++i) { mp += pair.p[i]; mq += pair.q[i]; }
    mp /= static_cast<double>(n);
    mq /= static_cast<double>(n);
    double cov = 0.0, vp = 0.0, vq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dp = pair.p[i] - mp, dq = pair.q[i] - mq;
        cov += dp * dq;
        vp += dp * dp;
        vq += dq * dq;
    }
    if (!(vp > 0.0) || !(vq > 0.0))
        throw UndefinedCorrelationError("correlation undefined for a constant vector");
    return std::clamp(cov / std::sqrt(vp * vq), -1.0, 1.0);
}

enum class LogBase { Natural, Two };

namespace detail {

// sum p_i log(p_i / q_i); +infinity where q vanishes on p's support.
inline double kl_directed(const std::vector<double>& p, const std::vector<double>& q,
                          LogBase base) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
        acc += p[i] * std::log(p[i] / q[i]);
    }
    return base == LogBase::Two ? acc / std::log(2.0) : acc;
}

}  // namespace detail

inline double kl(const AlignedPair& pair, LogBase base = LogBase::Natural) {
    return detail::kl_directed(pair.p, pair.q, base);
}

// Symmetrized KL in base 2: (KL(p||q) + KL(q||p)) / 2. Unbounded above.
inline double js(const AlignedPair& pair) {
    return 0.5 * (detail::kl_directed(pair.p, pair.q, LogBase::Two) +
                  detail::kl_directed(pair.q, pair.p, LogBase::Two));
}

// Midpoint Jensen-Shannon divergence in base 2: (KL(p||m) + KL(q||m)) / 2
// with m the elementwise average. Bounded in [0, 1]; the clamp only absorbs
// last-ulp rounding.
inline double js_midpoint(const AlignedPair& pair) {
    double acc_p = 0.0, acc_q = 0.0;
    for (std::size_t i = 0; i < pair.support.size(); ++i) {
        double m = 0.5 * (pair.p[i] + pair.q[i]);
        if (pair.p[i] > 0.0) acc_p += pair.p[i] * std::log2(pair.p[i] / m);
        if (pair.q[i] > 0.0) acc_q += pair.q[i] * std::log2(pair.q[i] / m);
    }
    return std::clamp(0.5 * (acc_p + acc_q), 0.0, 1.0);
}

}  // namespace degrenet
