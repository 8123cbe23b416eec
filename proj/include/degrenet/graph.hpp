#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "degrenet/empirical.hpp"
#include "degrenet/errors.hpp"
#include "degrenet/rate_policy.hpp"
#include "degrenet/rng.hpp"

namespace degrenet {

// Mutable simple undirected graph for the evolution engine. Vertex ids are
// never reused; live vertices sit in a dense array so weighted scans and
// uniform edge draws are deterministic for a fixed seed. The sum of
// lambda(degree) over live vertices is cached incrementally and rebuilt by
// exact rescan every few thousand mutations to stop drift.
class EvolvingGraph {
public:
    struct EdgeRec {
        std::uint64_t u, v;
        double birth;
    };

    explicit EvolvingGraph(RatePolicy policy) : policy_(std::move(policy)) {}

    std::uint64_t add_isolated_vertex() {
        std::uint64_t id = next_id_++;
        pos_[id] = order_.size();
        order_.push_back(id);
        nbrs_.emplace_back();
        ++mutations_;
        return id;
    }

    // Re-insert a vertex under a specific id (deserialization only).
    void restore_vertex(std::uint64_t id) {
        if (pos_.count(id)) throw DomainError("vertex id is already live");
        pos_[id] = order_.size();
        order_.push_back(id);
        nbrs_.emplace_back();
        next_id_ = std::max(next_id_, id + 1);
        ++mutations_;
    }

    void add_edge(std::uint64_t u, std::uint64_t v, double birth = 0.0) {
        if (u == v) throw DomainError("self-loops are not allowed");
        auto iu = pos_.find(u), iv = pos_.find(v);
        if (iu == pos_.end() || iv == pos_.end())
            throw DomainError("edge endpoint is not a live vertex");
        auto& nu = nbrs_[iu->second];
        if (std::find(nu.begin(), nu.end(), v) != nu.end())
            throw DomainError("parallel edges are not allowed");
        bump_weight(nu.size(), nu.size() + 1);
        auto& nv = nbrs_[iv->second];
        bump_weight(nv.size(), nv.size() + 1);
        nu.push_back(v);
        nv.push_back(u);
        edges_.push_back({u, v, birth});
        maybe_rebuild();
    }

    // Arrival: insert a vertex joined to each of the given endpoints. The
    // endpoints are selected before the vertex exists, so it cannot pick
    // itself.
    std::uint64_t add_vertex_with_edges(const std::vector<std::uint64_t>& endpoints,
                                        double birth) {
        std::uint64_t id = add_isolated_vertex();
        for (std::uint64_t e : endpoints) add_edge(id, e, birth);
        return id;
    }

    struct DeletionOutcome {
        EdgeRec edge;
        bool removed_u = false;
        bool removed_v = false;
    };

    // Delete the edge at the given dense index; endpoints left at degree
    // zero leave the graph with it.
    DeletionOutcome remove_edge_by_index(std::size_t idx) {
        if (idx >= edges_.size()) throw DomainError("edge index out of range");
        DeletionOutcome out;
        out.edge = edges_[idx];
        edges_[idx] = edges_.back();
        edges_.pop_back();
        drop_neighbor(out.edge.u, out.edge.v);
        drop_neighbor(out.edge.v, out.edge.u);
        if (degree(out.edge.u) == 0) {
            remove_vertex(out.edge.u);
            out.removed_u = true;
        }
        if (degree(out.edge.v) == 0) {
            remove_vertex(out.edge.v);
            out.removed_v = true;
        }
        maybe_rebuild();
        return out;
    }

    bool contains(std::uint64_t id) const { return pos_.count(id) != 0; }

    bool adjacent(std::uint64_t u, std::uint64_t v) const {
        auto iu = pos_.find(u);
        if (iu == pos_.end()) return false;
        const auto& nb = nbrs_[iu->second];
        return std::find(nb.begin(), nb.end(), v) != nb.end();
    }

    int degree(std::uint64_t id) const {
        auto it = pos_.find(id);
        if (it == pos_.end()) throw DomainError("no such vertex");
        return static_cast<int>(nbrs_[it->second].size());
    }

    std::size_t vertex_count() const { return order_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    double weight_sum() const { return weight_sum_; }
    const RatePolicy& policy() const { return policy_; }
    std::uint64_t next_id() const { return next_id_; }
    const std::vector<std::uint64_t>& vertex_ids() const { return order_; }
    const std::vector<std::uint64_t>& neighbors_at(std::size_t dense_idx) const {
        return nbrs_[dense_idx];
    }
    const std::vector<EdgeRec>& edges() const { return edges_; }

    double vertex_weight_at(std::size_t dense_idx) const {
        return contribution(nbrs_[dense_idx].size());
    }

    double recompute_weight_sum() {
        double s = 0.0;
        for (const auto& nb : nbrs_) s += contribution(nb.size());
        double drift = std::abs(s - weight_sum_);
        weight_sum_ = s;
        return drift;
    }

    // Structural equality: same live vertex ids and the same undirected
    // edge set; birth times and orderings are not part of the structure.
    friend bool operator==(const EvolvingGraph& a, const EvolvingGraph& b) {
        auto va = a.order_, vb = b.order_;
        std::sort(va.begin(), va.end());
        std::sort(vb.begin(), vb.end());
        if (va != vb) return false;
        auto canon = [](const std::vector<EdgeRec>& es) {
            std::vector<std::pair<std::uint64_t, std::uint64_t>> c;
            c.reserve(es.size());
            for (const auto& e : es)
                c.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
            std::sort(c.begin(), c.end());
            return c;
        };
        return canon(a.edges_) == canon(b.edges_);
    }

    // Full consistency walk; throws std::logic_error on the first violation.
    void audit() const {
        if (order_.size() != nbrs_.size() || order_.size() != pos_.size())
            throw std::logic_error("audit: index structures disagree");
        std::size_t degree_total = 0;
        for (std::size_t i = 0; i < order_.size(); ++i) {
            auto it = pos_.find(order_[i]);
            if (it == pos_.end() || it->second != i)
                throw std::logic_error("audit: position map broken");
            const auto& nb = nbrs_[i];
            if (nb.empty()) throw std::logic_error("audit: isolated vertex survived");
            degree_total += nb.size();
            for (std::uint64_t v : nb) {
                if (v == order_[i]) throw std::logic_error("audit: self-loop");
                if (std::count(nb.begin(), nb.end(), v) != 1)
                    throw std::logic_error("audit: duplicate adjacency entry");
                auto jv = pos_.find(v);
                if (jv == pos_.end()) throw std::logic_error("audit: dangling neighbor");
                const auto& back = nbrs_[jv->second];
                if (std::find(back.begin(), back.end(), order_[i]) == back.end())
                    throw std::logic_error("audit: asymmetric adjacency");
            }
        }
        if (degree_total != 2 * edges_.size())
            throw std::logic_error("audit: edge count disagrees with degree sum");
        for (const auto& e : edges_) {
            auto iu = pos_.find(e.u);
            if (iu == pos_.end()) throw std::logic_error("audit: edge with dead endpoint");
            const auto& nu = nbrs_[iu->second];
            if (std::find(nu.begin(), nu.end(), e.v) == nu.end())
                throw std::logic_error("audit: edge missing from adjacency");
        }
        double s = 0.0;
        for (const auto& nb : nbrs_) s += contribution(nb.size());
        if (std::abs(s - weight_sum_) > 1e-9)
            throw std::logic_error("audit: weight cache drifted beyond 1e-9");
    }

private:
    double contribution(std::size_t deg) const {
        return deg >= 1 ? policy_.rate(static_cast<int>(deg)) : 0.0;
    }

    void bump_weight(std::size_t old_deg, std::size_t new_deg) {
        weight_sum_ += contribution(new_deg) - contribution(old_deg);
    }

    void drop_neighbor(std::uint64_t from, std::uint64_t gone) {
        auto& nb = nbrs_[pos_.at(from)];
        auto it = std::find(nb.begin(), nb.end(), gone);
        if (it == nb.end()) throw std::logic_error("adjacency out of sync");
        bump_weight(nb.size(), nb.size() - 1);
        *it = nb.back();
        nb.pop_back();
    }

    void remove_vertex(std::uint64_t id) {
        std::size_t i = pos_.at(id);
        if (!nbrs_[i].empty())
            throw std::logic_error("only degree-zero vertices may be removed");
        std::size_t last = order_.size() - 1;
        if (i != last) {
            order_[i] = order_[last];
            nbrs_[i] = std::move(nbrs_[last]);
            pos_[order_[i]] = i;
        }
        order_.pop_back();
        nbrs_.pop_back();
        pos_.erase(id);
        ++mutations_;
    }

    void maybe_rebuild() {
        if (++mutations_ % 4096 == 0) recompute_weight_sum();
    }

    RatePolicy policy_;
    std::unordered_map<std::uint64_t, std::size_t> pos_;
    std::vector<std::uint64_t> order_;
    std::vector<std::vector<std::uint64_t>> nbrs_;
    std::vector<EdgeRec> edges_;
    double weight_sum_ = 0.0;
    std::uint64_t next_id_ = 0;
    std::uint64_t mutations_ = 0;
};

// Draw m distinct indices, each draw proportional to its weight renormalized
// over the remaining candidates. Linear scan per draw; m stays small here.
inline std::vector<std::size_t> sample_weighted_without_replacement(
    const std::vector<double>& weights, int m, Rng& rng) {
    const std::size_t n = weights.size();
    if (m < 1) throw DomainError("sample size must be at least 1");
    if (static_cast<std::size_t>(m) > n)
        throw InfeasibleArrivalError("fewer candidates than requested draws");

    double remaining = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw DomainError("sampling weights must be positive");
        remaining += w;
    }

    std::vector<std::size_t> picked;
    picked.reserve(static_cast<std::size_t>(m));
    for (int d = 0; d < m; ++d) {
        double target = rng.uniform01() * remaining;
        double acc = 0.0;
        std::size_t choice = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (std::find(picked.begin(), picked.end(), i) != picked.end()) continue;
            acc += weights[i];
            if (acc > target) {
                choice = i;
                break;
            }
        }
        if (choice == n) {
            // rounding pushed the target past the last candidate
            for (std::size_t i = n; i-- > 0;) {
                if (std::find(picked.begin(), picked.end(), i) == picked.end()) {
                    choice = i;
                    break;
                }
            }
        }
        picked.push_back(choice);
        remaining -= weights[choice];
    }
    return picked;
}

// Pick m distinct attachment endpoints, each draw proportional to
// lambda(degree) under the graph's policy.
inline std::vector<std::uint64_t> select_endpoints(const EvolvingGraph& graph,
                                                   int m, Rng& rng) {
    if (static_cast<std::size_t>(m) > graph.vertex_count())
        throw InfeasibleArrivalError("arrival needs " + std::to_string(m) +
                                     " endpoints but only " +
                                     std::to_string(graph.vertex_count()) +
                                     " vertices are live");
    std::vector<double> weights(graph.vertex_count());
    for (std::size_t i = 0; i < weights.size(); ++i)
        weights[i] = graph.vertex_weight_at(i);
    auto idxs = sample_weighted_without_replacement(weights, m, rng);
    std::vector<std::uint64_t> ids;
    ids.reserve(idxs.size());
    for (std::size_t i : idxs) ids.push_back(graph.vertex_ids()[i]);
    return ids;
}

// VertexCount-weighted distribution of the current degrees.
inline EmpiricalPmf snapshot_degrees(const EvolvingGraph& graph) {
    if (graph.vertex_count() == 0)
        throw DomainError("cannot take a degree snapshot of an empty graph");
    std::map<int, double> counts;
    for (std::uint64_t id : graph.vertex_ids())
        counts[graph.degree(id)] += 1.0;
    char src[96];
    std::snprintf(src, sizeof src, "graph(n=%zu,m=%zu)", graph.vertex_count(),
                  graph.edge_count());
    return make_empirical(counts, Weighting::VertexCount, src);
}

}  // namespace degrenet
