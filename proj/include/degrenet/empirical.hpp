#pragma once

#include <map>
#include <string>
#include <utility>

#include "degrenet/errors.hpp"

namespace degrenet {

enum class Weighting { TimeWeighted, VertexCount };

// Observed degree distribution plus provenance. TimeWeighted pmfs come from
// trajectory occupancy; VertexCount pmfs from graph snapshots and datasets.
struct EmpiricalPmf {
    std::map<int, double> probs;
    Weighting weighting = Weighting::VertexCount;
    double total_weight = 0.0;
    std::string source;

    // Smallest degree carrying the largest mass.
    int argmax_degree() const {
        if (probs.empty()) throw DomainError("empty distribution has no mode");
        int best_k = probs.begin()->first;
        double best_p = probs.begin()->second;
        for (const auto& [k, p] : probs)
            if (p > best_p) { best_k = k; best_p = p; }
        return best_k;
    }

    int max_degree() const {
        if (probs.empty()) throw DomainError("empty distribution has no support");
        return probs.rbegin()->first;
    }
};

// Normalize raw non-negative weights (occupancy times or vertex counts) into
// a pmf. Normalizing by the summed weights keeps the total within a few ulp
// of one regardless of how many buckets there are.
inline EmpiricalPmf make_empirical(const std::map<int, double>& weights,
                                   Weighting weighting, std::string source) {
    double total = 0.0;
    for (const auto& [k, w] : weights) {
        if (w < 0.0) throw DomainError("negative weight at degree " + std::to_string(k));
        total += w;
    }
    if (!(total > 0.0)) throw DomainError("cannot normalize zero total weight");

    EmpiricalPmf pmf;
    pmf.weighting = weighting;
    pmf.total_weight = total;
    pmf.source = std::move(source);
    for (const auto& [k, w] : weights)
        if (w > 0.0) pmf.probs[k] = w / total;
    return pmf;
}

}  // namespace degrenet
