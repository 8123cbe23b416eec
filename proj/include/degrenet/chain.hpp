#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "degrenet/empirical.hpp"
#include "degrenet/errors.hpp"
#include "degrenet/rate_policy.hpp"
#include "degrenet/rng.hpp"

namespace degrenet {

// Piecewise-constant record of one vertex's degree over continuous time.
// Entry 0 is the initial condition (time 0, degree k0); every later entry is
// a +/-1 jump. The state is right-continuous: states[i] holds on
// [jump_times[i], jump_times[i+1]).
struct DegreeTrajectory {
    std::vector<double> jump_times;
    std::vector<int> states;
    double t_end = 0.0;
    std::uint64_t seed = 0;
    RatePolicy policy = RatePolicy::linear();
    double mu = 0.0;

    std::size_t jump_count() const { return jump_times.size() - 1; }
};

// Exact event-driven simulation of the degree chain: at degree k the birth
// rate is lambda(k) and the death rate is k*mu, with death suppressed at
// k = 1 (reflecting boundary, matching the analytic chain). Two draws per
// event, holding time first, then the direction.
inline DegreeTrajectory simulate_chain(const RatePolicy& policy, double mu,
                                       double t_end, int k0, std::uint64_t seed,
                                       std::uint64_t event_cap = 100'000'000) {
    if (!(mu > 0.0)) throw DomainError("degree decrease rate mu must be positive");
    if (t_end < 0.0) throw DomainError("time horizon must be non-negative");
    if (k0 < 1) throw DomainError("initial degree must be at least 1");

    DegreeTrajectory traj;
    traj.jump_times.push_back(0.0);
    traj.states.push_back(k0);
    traj.t_end = t_end;
    traj.seed = seed;
    traj.policy = policy;
    traj.mu = mu;

    Rng rng(seed);
    double t = 0.0;
    int k = k0;
    std::uint64_t events = 0;
    while (true) {
        double birth = policy.rate(k);
        double death = k > 1 ? mu * static_cast<double>(k) : 0.0;
        double total = birth + death;
        double dt = rng.exponential(total);
        if (!(t + dt < t_end)) break;
        t += dt;
        k += rng.uniform01() * total < birth ? 1 : -1;
        traj.jump_times.push_back(t);
        traj.states.push_back(k);
        if (++events > event_cap)
            throw ResourceError("chain event cap (" + std::to_string(event_cap) +
                                ") exceeded before reaching t_end");
    }
    return traj;
}

// Time-weighted occupancy distribution of a trajectory after burn_in:
// the mass at degree k is the total time spent at k, divided by the
// observation window. A zero-length window (t_end = 0) collapses to a point
// mass at the initial degree.
inline EmpiricalPmf occupancy_pmf(const DegreeTrajectory& traj, double burn_in) {
    if (burn_in < 0.0) throw DomainError("burn-in must be non-negative");
    if (burn_in > traj.t_end || (burn_in == traj.t_end && traj.t_end > 0.0))
        throw DomainError("burn-in must be smaller than the horizon");

    char src[160];
    std::snprintf(src, sizeof src,
                  "chain(policy=%s,mu=%.17g,t_end=%.17g,k0=%d,seed=%llu,burn_in=%.17g)",
                  traj.policy.name().c_str(), traj.mu, traj.t_end, traj.states.front(),
                  static_cast<unsigned long long>(traj.seed), burn_in);

    if (traj.t_end == 0.0)
        return make_empirical({{traj.states.front(), 1.0}}, Weighting::TimeWeighted, src);

    std::map<int, double> occupancy;
    const std::size_t n = traj.jump_times.size();
    for (std::size_t i = 0; i < n; ++i) {
        double seg_begin = traj.jump_times[i];
        double seg_end = i + 1 < n ? traj.jump_times[i + 1] : traj.t_end;
        double lo = std::max(seg_begin, burn_in);
        if (lo < seg_end) occupancy[traj.states[i]] += seg_end - lo;
    }
    auto pmf = make_empirical(occupancy, Weighting::TimeWeighted, src);
    pmf.total_weight = traj.t_end - burn_in;
    return pmf;
}

}  // namespace degrenet
