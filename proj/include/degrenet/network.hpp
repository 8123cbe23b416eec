#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "degrenet/empirical.hpp"
#include "degrenet/errors.hpp"
#include "degrenet/graph.hpp"
#include "degrenet/rate_policy.hpp"
#include "degrenet/rng.hpp"

namespace degrenet {

struct InitMode {
    enum class Kind { ErdosRenyi, Ring, Clique };
    Kind kind = Kind::ErdosRenyi;
    double p = 0.5;  // only meaningful for ErdosRenyi

    static InitMode erdos_renyi(double p) {
        if (!(p >= 0.0 && p <= 1.0))
            throw DomainError("edge probability must lie in [0,1]");
        return {Kind::ErdosRenyi, p};
    }
    static InitMode ring() { return {Kind::Ring, 0.0}; }
    static InitMode clique() { return {Kind::Clique, 0.0}; }
};

enum class ArrivalMode { PerVertexExact, Aggregate };

struct SimConfig {
    int m0 = 10;
    int m = 3;
    RatePolicy policy = RatePolicy::linear();
    double mu = 1.5;
    double t_end = 1.0;
    InitMode init = InitMode::erdos_renyi(0.5);
    std::uint64_t seed = 1;
    std::vector<double> snapshot_times;
    ArrivalMode arrival_mode = ArrivalMode::PerVertexExact;
    std::uint64_t event_cap = 100'000'000;
    bool collect_edge_lifetimes = false;
    std::size_t lifetime_cap = 1u << 20;

    void validate() const {
        if (m0 < 2) throw DomainError("initial network needs m0 >= 2 vertices");
        if (m < 1) throw DomainError("arrivals must carry m >= 1 edges");
        if (m0 <= m)
            throw DomainError("m0 must exceed m so an arrival can find m endpoints");
        if (!(mu > 0.0)) throw DomainError("degree decrease rate mu must be positive");
        if (t_end < 0.0) throw DomainError("time horizon must be non-negative");
        double prev = 0.0;
        for (double s : snapshot_times) {
            if (s < prev) throw DomainError("snapshot times must be ascending");
            if (s < 0.0 || s > t_end)
                throw DomainError("snapshot times must lie within [0, t_end]");
            prev = s;
        }
    }
};

// Initial network: m0 vertices connected at random. ErdosRenyi(p) draws
// every pair independently, then patches in a random spanning cycle if that
// left any vertex isolated; Ring and Clique are the deterministic options.
inline EvolvingGraph init_network(int m0, InitMode mode, const RatePolicy& policy,
                                  Rng& rng) {
    if (m0 < 2) throw DomainError("initial network needs m0 >= 2 vertices");
    EvolvingGraph g(policy);
    std::vector<std::uint64_t> ids;
    ids.reserve(static_cast<std::size_t>(m0));
    for (int i = 0; i < m0; ++i) ids.push_back(g.add_isolated_vertex());

    auto link_cycle = [&](const std::vector<std::uint64_t>& seq) {
        for (std::size_t i = 0; i < seq.size(); ++i) {
            std::uint64_t u = seq[i];
            std::uint64_t v = seq[(i + 1) % seq.size()];
            if (u != v && !g.adjacent(u, v)) g.add_edge(u, v);
        }
    };

    switch (mode.kind) {
        case InitMode::Kind::Clique:
            for (int i = 0; i < m0; ++i)
                for (int j = i + 1; j < m0; ++j) g.add_edge(ids[i], ids[j]);
            break;
        case InitMode::Kind::Ring:
            if (m0 == 2) {
                g.add_edge(ids[0], ids[1]);
            } else {
                for (int i = 0; i < m0; ++i) g.add_edge(ids[i], ids[(i + 1) % m0]);
            }
            break;
        case InitMode::Kind::ErdosRenyi: {
            for (int i = 0; i < m0; ++i)
                for (int j = i + 1; j < m0; ++j)
                    if (rng.bernoulli(mode.p)) g.add_edge(ids[i], ids[j]);
            bool isolated = false;
            for (std::uint64_t id : ids)
                if (g.degree(id) == 0) { isolated = true; break; }
            if (isolated) {
                std::vector<std::uint64_t> perm = ids;
                for (std::size_t i = perm.size(); i-- > 1;)
                    std::swap(perm[i], perm[rng.index_below(i + 1)]);
                if (m0 == 2) {
                    if (g.degree(ids[0]) == 0) g.add_edge(ids[0], ids[1]);
                } else {
                    link_cycle(perm);
                }
            }
            break;
        }
    }
    return g;
}

inline EvolvingGraph init_network(int m0, InitMode mode, const RatePolicy& policy,
                                  std::uint64_t seed) {
    Rng rng(seed);
    return init_network(m0, mode, policy, rng);
}

enum class EventType { Arrival, EdgeDeletion, SkippedArrival, Horizon, Extinction };

struct Event {
    EventType type = EventType::Horizon;
    double time = 0.0;
};

struct EventCounts {
    std::uint64_t arrivals = 0;
    std::uint64_t edge_deletions = 0;
    std::uint64_t vertex_removals = 0;
    std::uint64_t skipped_arrivals = 0;
    std::uint64_t total() const { return arrivals + edge_deletions + skipped_arrivals; }
};

struct Snapshot {
    double time = 0.0;
    EmpiricalPmf pmf;
    std::size_t vertex_count = 0;
    std::size_t edge_count = 0;
};

// Exposure time and growth-event counts of the tagged vertex lineage,
// keyed by the degree it held at the time. The measured growth rate at
// degree k (events / exposure) is the empirical counterpart of lambda(k).
struct DegreeRateBridge {
    std::map<int, double> exposure;
    std::map<int, std::uint64_t> growth_events;
};

struct EvolutionResult {
    std::vector<Snapshot> snapshots;
    std::vector<std::pair<double, std::uint64_t>> total_degree_series;
    EventCounts event_counts;
    bool extinct = false;
    double end_time = 0.0;
    EvolvingGraph final_graph = EvolvingGraph(RatePolicy::linear());
    std::vector<std::pair<double, double>> edge_lifetimes;  // (birth, duration)
    DegreeRateBridge bridge;
    std::uint64_t seed = 0;
};

// Event cap hit mid-run; carries whatever was computed up to the cap.
class EvolutionCapError : public ResourceError {
public:
    EvolutionCapError(const std::string& msg, EvolutionResult partial_result)
        : ResourceError(msg), partial(std::move(partial_result)) {}
    EvolutionResult partial;
};

// Discrete-event evolution: arrivals carrying m edges race against uniform
// edge deletions. Per the arrival mode, the whole-network arrival rate is
// either sum(lambda)/m -- which hands every vertex a degree-growth rate of
// exactly lambda(degree) once the m endpoint slots are allocated -- or the
// plain sum(lambda).
class NetworkEngine {
public:
    explicit NetworkEngine(const SimConfig& cfg)
        : cfg_((cfg.validate(), cfg)), rng_(cfg.seed),
          graph_(init_network(cfg.m0, cfg.init, cfg.policy, rng_)) {
        pending_snapshots_ = cfg_.snapshot_times;
        if (!graph_.vertex_ids().empty()) tagged_ = graph_.vertex_ids().front();
        record_snapshot(0.0);
        series_push(0.0);
    }

    // Advance by one event (or to the horizon). Snapshots due strictly
    // before the event time capture the pre-event graph.
    Event step() {
        if (done_) return {last_type_, now_};
        if (graph_.vertex_count() == 0) return finish(EventType::Extinction, now_);

        double arrival_rate = cfg_.arrival_mode == ArrivalMode::PerVertexExact
                                  ? graph_.weight_sum() / static_cast<double>(cfg_.m)
                                  : graph_.weight_sum();
        double deletion_rate = cfg_.mu * static_cast<double>(graph_.edge_count());
        double dt_arrival = rng_.exponential(arrival_rate);
        double dt_deletion = rng_.exponential(deletion_rate);
        double dt = std::min(dt_arrival, dt_deletion);

        if (!(now_ + dt < cfg_.t_end)) {
            emit_due_snapshots(cfg_.t_end);
            record_exposure(cfg_.t_end - now_);
            now_ = cfg_.t_end;
            record_snapshot(cfg_.t_end);
            series_push(cfg_.t_end);
            return finish(EventType::Horizon, now_);
        }

        emit_due_snapshots(now_ + dt);
        record_exposure(dt);
        now_ += dt;

        if (dt_arrival < dt_deletion) return apply_arrival();
        return apply_deletion();
    }

    bool done() const { return done_; }
    double now() const { return now_; }
    const EvolvingGraph& graph() const { return graph_; }
    const SimConfig& config() const { return cfg_; }
    const EventCounts& counts() const { return counts_; }
    bool extinct() const { return extinct_; }

    EvolutionResult result() const {
        EvolutionResult res;
        res.snapshots = snapshots_;
        res.total_degree_series = series_;
        res.event_counts = counts_;
        res.extinct = extinct_;
        res.end_time = now_;
        res.final_graph = graph_;
        res.edge_lifetimes = lifetimes_;
        res.bridge = bridge_;
        res.seed = cfg_.seed;
        return res;
    }

private:
    Event finish(EventType type, double time) {
        done_ = true;
        last_type_ = type;
        return {type, time};
    }

    Event apply_arrival() {
        if (graph_.vertex_count() < static_cast<std::size_t>(cfg_.m)) {
            ++counts_.skipped_arrivals;
            series_push(now_);
            return {EventType::SkippedArrival, now_};
        }
        auto endpoints = select_endpoints(graph_, cfg_.m, rng_);
        if (tag_live_())
            for (std::uint64_t id : endpoints)
                if (id == tagged_) ++bridge_.growth_events[graph_.degree(id)];
        std::uint64_t vid = graph_.add_vertex_with_edges(endpoints, now_);
        if (retag_pending_) {
            tagged_ = vid;
            retag_pending_ = false;
        }
        ++counts_.arrivals;
        series_push(now_);
        return {EventType::Arrival, now_};
    }

    Event apply_deletion() {
        std::size_t idx = rng_.index_below(graph_.edge_count());
        auto out = graph_.remove_edge_by_index(idx);
        ++counts_.edge_deletions;
        if (out.removed_u) ++counts_.vertex_removals;
        if (out.removed_v) ++counts_.vertex_removals;
        if (cfg_.collect_edge_lifetimes && lifetimes_.size() < cfg_.lifetime_cap)
            lifetimes_.emplace_back(out.edge.birth, now_ - out.edge.birth);
        if (tag_live_() &&
            ((out.removed_u && out.edge.u == tagged_) ||
             (out.removed_v && out.edge.v == tagged_)))
            retag_pending_ = true;
        series_push(now_);
        if (graph_.vertex_count() == 0) {
            extinct_ = true;
            return finish(EventType::Extinction, now_);
        }
        return {EventType::EdgeDeletion, now_};
    }

    bool tag_live_() const { return !retag_pending_ && graph_.contains(tagged_); }

    void record_exposure(double dt) {
        if (dt <= 0.0 || !tag_live_()) return;
        bridge_.exposure[graph_.degree(tagged_)] += dt;
    }

    void emit_due_snapshots(double upto) {
        while (next_snapshot_ < pending_snapshots_.size() &&
               pending_snapshots_[next_snapshot_] <= upto) {
            record_snapshot(pending_snapshots_[next_snapshot_]);
            ++next_snapshot_;
        }
    }

    void record_snapshot(double time) {
        if (graph_.vertex_count() == 0) return;
        if (!snapshots_.empty() && snapshots_.back().time == time) return;
        Snapshot s;
        s.time = time;
        s.pmf = snapshot_degrees(graph_);
        char src[96];
        std::snprintf(src, sizeof src, "network(t=%.17g,n=%zu,m=%zu)", time,
                      graph_.vertex_count(), graph_.edge_count());
        s.pmf.source = src;
        s.vertex_count = graph_.vertex_count();
        s.edge_count = graph_.edge_count();
        snapshots_.push_back(std::move(s));
    }

    // Total-degree instrumentation, decimated on the fly so long runs keep a
    // bounded series.
    void series_push(double time) {
        if (series_tick_++ % series_stride_ != 0) return;
        series_.emplace_back(time, 2 * graph_.edge_count());
        if (series_.size() >= 65536) {
            std::vector<std::pair<double, std::uint64_t>> kept;
            kept.reserve(series_.size() / 2 + 1);
            for (std::size_t i = 0; i < series_.size(); i += 2) kept.push_back(series_[i]);
            series_ = std::move(kept);
            series_stride_ *= 2;
        }
    }

    SimConfig cfg_;
    Rng rng_;
    EvolvingGraph graph_;
    double now_ = 0.0;
    bool done_ = false;
    bool extinct_ = false;
    EventType last_type_ = EventType::Horizon;
    EventCounts counts_;
    std::vector<Snapshot> snapshots_;
    std::vector<double> pending_snapshots_;
    std::size_t next_snapshot_ = 0;
    std::vector<std::pair<double, std::uint64_t>> series_;
    std::uint64_t series_tick_ = 0;
    std::uint64_t series_stride_ = 1;
    std::vector<std::pair<double, double>> lifetimes_;
    std::uint64_t tagged_ = ~0ULL;
    bool retag_pending_ = false;
    DegreeRateBridge bridge_;
};

// Run the full evolution. Extinction ends the run early with the flag set;
// exceeding the event cap raises EvolutionCapError carrying the partial
// result.
inline EvolutionResult evolve(const SimConfig& cfg) {
    NetworkEngine engine(cfg);
    std::uint64_t events = 0;
    while (!engine.done()) {
        engine.step();
        if (++events > cfg.event_cap) {
            auto partial = engine.result();
            throw EvolutionCapError(
                "network event cap (" + std::to_string(cfg.event_cap) +
                    ") exceeded at t=" + std::to_string(engine.now()),
                std::move(partial));
        }
    }
    return engine.result();
}

}  // namespace degrenet
