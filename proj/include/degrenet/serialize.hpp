#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "degrenet/edge_list.hpp"
#include "degrenet/empirical.hpp"
#include "degrenet/errors.hpp"
#include "degrenet/fit.hpp"
#include "degrenet/network.hpp"
#include "degrenet/rate_policy.hpp"
#include "degrenet/stationary.hpp"

namespace degrenet {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kSchemaStationaryPmf = "degrenet/v1/stationary_pmf";
inline constexpr const char* kSchemaEmpiricalPmf = "degrenet/v1/empirical_pmf";
inline constexpr const char* kSchemaFitReport = "degrenet/v1/fit_report";
inline constexpr const char* kSchemaEvolutionResult = "degrenet/v1/evolution_result";

// CSV probability cells carry a fixed 15 fractional digits so files are
// reproducible byte for byte.
inline std::string format_prob(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15f", v);
    return buf;
}

// ---- policy / enum names ----------------------------------------------

inline ordered_json policy_to_json(const RatePolicy& p) {
    ordered_json j;
    j["kind"] = p.name();
    if (p.kind() == RateKind::Tabulated) j["rates"] = p.table();
    return j;
}

inline RatePolicy policy_from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "linear") return RatePolicy::linear();
    if (kind == "log") return RatePolicy::logarithmic();
    if (kind == "tabulated")
        return RatePolicy::tabulated(j.at("rates").get<std::vector<double>>());
    throw IoError("unknown rate policy kind: " + kind);
}

inline RatePolicy policy_from_name(const std::string& name) {
    if (name == "linear") return RatePolicy::linear();
    if (name == "log" || name == "logarithmic") return RatePolicy::logarithmic();
    throw DomainError("unknown policy '" + name + "' (expected linear|log)");
}

inline std::string weighting_name(Weighting w) {
    return w == Weighting::TimeWeighted ? "time_weighted" : "vertex_count";
}

inline Weighting weighting_from_name(const std::string& s) {
    if (s == "time_weighted") return Weighting::TimeWeighted;
    if (s == "vertex_count") return Weighting::VertexCount;
    throw IoError("unknown weighting: " + s);
}

inline FitObjective objective_from_name(const std::string& s) {
    if (s == "js") return FitObjective::JsMidpoint;
    if (s == "kl") return FitObjective::Kl;
    if (s == "negpearson") return FitObjective::NegPearson;
    throw DomainError("unknown objective '" + s + "' (expected js|kl|negpearson)");
}

// ---- to_json ------------------------------------------------------------

inline ordered_json to_json(const StationaryPmf& pmf) {
    ordered_json j;
    j["schema"] = kSchemaStationaryPmf;
    j["policy"] = policy_to_json(pmf.policy);
    j["mu"] = pmf.mu;
    j["k_max"] = pmf.k_max;
    j["tail_mass"] = pmf.tail_mass;
    j["probs"] = pmf.probs;
    return j;
}

inline ordered_json to_json(const EmpiricalPmf& pmf) {
    ordered_json j;
    j["schema"] = kSchemaEmpiricalPmf;
    j["weighting"] = weighting_name(pmf.weighting);
    j["total_weight"] = pmf.total_weight;
    j["source"] = pmf.source;
    std::vector<int> degrees;
    std::vector<double> probs;
    for (const auto& [k, p] : pmf.probs) {
        degrees.push_back(k);
        probs.push_back(p);
    }
    j["degrees"] = degrees;
    j["probs"] = probs;
    return j;
}

inline ordered_json to_json(const FitReport& r) {
    ordered_json j;
    j["schema"] = kSchemaFitReport;
    j["policy"] = policy_to_json(r.policy);
    j["objective"] = objective_name(r.objective);
    j["mu_star"] = r.mu_star;
    j["objective_value"] = r.objective_value;
    j["rho"] = r.rho;
    j["kl"] = r.kl;
    j["js"] = r.js;
    j["k_max_used"] = r.k_max_used;
    j["boundary_pinned"] = r.boundary_pinned;
    j["non_unimodal"] = r.non_unimodal;
    j["dropped_zero_mass"] = r.dropped_zero_mass;
    ordered_json trace = ordered_json::array();
    for (const auto& [mu, value] : r.search_trace)
        trace.push_back(ordered_json::array({mu, value}));
    j["search_trace"] = std::move(trace);
    return j;
}

inline ordered_json to_json(const EvolutionResult& r) {
    ordered_json j;
    j["schema"] = kSchemaEvolutionResult;
    j["seed"] = r.seed;
    j["policy"] = policy_to_json(r.final_graph.policy());
    j["extinct"] = r.extinct;
    j["end_time"] = r.end_time;
    j["event_counts"] = {
        {"arrivals", r.event_counts.arrivals},
        {"edge_deletions", r.event_counts.edge_deletions},
        {"vertex_removals", r.event_counts.vertex_removals},
        {"skipped_arrivals", r.event_counts.skipped_arrivals},
    };
    ordered_json snaps = ordered_json::array();
    for (const auto& s : r.snapshots) {
        ordered_json sj;
        sj["time"] = s.time;
        sj["vertex_count"] = s.vertex_count;
        sj["edge_count"] = s.edge_count;
        sj["pmf"] = to_json(s.pmf);
        snaps.push_back(std::move(sj));
    }
    j["snapshots"] = std::move(snaps);
    ordered_json series = ordered_json::array();
    for (const auto& [t, d] : r.total_degree_series)
        series.push_back(ordered_json::array({t, d}));
    j["total_degree_series"] = std::move(series);
    ordered_json graph;
    graph["next_id"] = r.final_graph.next_id();
    graph["vertices"] = r.final_graph.vertex_ids();
    ordered_json edges = ordered_json::array();
    for (const auto& e : r.final_graph.edges())
        edges.push_back(ordered_json::array({std::min(e.u, e.v), std::max(e.u, e.v)}));
    graph["edges"] = std::move(edges);
    j["final_graph"] = std::move(graph);
    ordered_json bridge;
    ordered_json exposure = ordered_json::array();
    for (const auto& [k, t] : r.bridge.exposure)
        exposure.push_back(ordered_json::array({k, t}));
    ordered_json growth = ordered_json::array();
    for (const auto& [k, n] : r.bridge.growth_events)
        growth.push_back(ordered_json::array({k, n}));
    bridge["exposure"] = std::move(exposure);
    bridge["growth_events"] = std::move(growth);
    j["bridge"] = std::move(bridge);
    return j;
}

// ---- from_json ----------------------------------------------------------

inline void expect_schema(const nlohmann::json& j, const char* schema) {
    if (!j.contains("schema") || j.at("schema").get<std::string>() != schema)
        throw IoError(std::string("expected schema ") + schema);
}

inline StationaryPmf stationary_pmf_from_json(const nlohmann::json& j) {
    expect_schema(j, kSchemaStationaryPmf);
    StationaryPmf pmf;
    pmf.policy = policy_from_json(j.at("policy"));
    pmf.mu = j.at("mu").get<double>();
    pmf.k_max = j.at("k_max").get<int>();
    pmf.tail_mass = j.at("tail_mass").get<double>();
    pmf.probs = j.at("probs").get<std::vector<double>>();
    if (static_cast<int>(pmf.probs.size()) != pmf.k_max)
        throw IoError("stationary pmf length disagrees with k_max");
    return pmf;
}

inline EmpiricalPmf empirical_pmf_from_json(const nlohmann::json& j) {
    expect_schema(j, kSchemaEmpiricalPmf);
    EmpiricalPmf pmf;
    pmf.weighting = weighting_from_name(j.at("weighting").get<std::string>());
    pmf.total_weight = j.at("total_weight").get<double>();
    pmf.source = j.at("source").get<std::string>();
    auto degrees = j.at("degrees").get<std::vector<int>>();
    auto probs = j.at("probs").get<std::vector<double>>();
    if (degrees.size() != probs.size())
        throw IoError("empirical pmf arrays disagree in length");
    for (std::size_t i = 0; i < degrees.size(); ++i)
        pmf.probs[degrees[i]] = probs[i];
    return pmf;
}

inline FitReport fit_report_from_json(const nlohmann::json& j) {
    expect_schema(j, kSchemaFitReport);
    FitReport r;
    r.policy = policy_from_json(j.at("policy"));
    r.objective = objective_from_name(j.at("objective").get<std::string>());
    r.mu_star = j.at("mu_star").get<double>();
    r.objective_value = j.at("objective_value").get<double>();
    r.rho = j.at("rho").get<double>();
    r.kl = j.at("kl").get<double>();
    r.js = j.at("js").get<double>();
    r.k_max_used = j.at("k_max_used").get<int>();
    r.boundary_pinned = j.at("boundary_pinned").get<bool>();
    r.non_unimodal = j.at("non_unimodal").get<bool>();
    r.dropped_zero_mass = j.at("dropped_zero_mass").get<double>();
    for (const auto& e : j.at("search_trace"))
        r.search_trace.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
    return r;
}

inline EvolutionResult evolution_result_from_json(const nlohmann::json& j) {
    expect_schema(j, kSchemaEvolutionResult);
    EvolutionResult r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.extinct = j.at("extinct").get<bool>();
    r.end_time = j.at("end_time").get<double>();
    const auto& ec = j.at("event_counts");
    r.event_counts.arrivals = ec.at("arrivals").get<std::uint64_t>();
    r.event_counts.edge_deletions = ec.at("edge_deletions").get<std::uint64_t>();
    r.event_counts.vertex_removals = ec.at("vertex_removals").get<std::uint64_t>();
    r.event_counts.skipped_arrivals = ec.at("skipped_arrivals").get<std::uint64_t>();
    for (const auto& sj : j.at("snapshots")) {
        Snapshot s;
        s.time = sj.at("time").get<double>();
        s.vertex_count = sj.at("vertex_count").get<std::size_t>();
        s.edge_count = sj.at("edge_count").get<std::size_t>();
        s.pmf = empirical_pmf_from_json(sj.at("pmf"));
        r.snapshots.push_back(std::move(s));
    }
    for (const auto& e : j.at("total_degree_series"))
        r.total_degree_series.emplace_back(e.at(0).get<double>(),
                                           e.at(1).get<std::uint64_t>());
    // structural graph reload: vertices under their original ids, then edges
    const auto& gj = j.at("final_graph");
    EvolvingGraph g(policy_from_json(j.at("policy")));
    for (std::uint64_t vid : gj.at("vertices").get<std::vector<std::uint64_t>>())
        g.restore_vertex(vid);
    for (const auto& e : gj.at("edges"))
        g.add_edge(e.at(0).get<std::uint64_t>(), e.at(1).get<std::uint64_t>());
    r.final_graph = std::move(g);
    for (const auto& e : j.at("bridge").at("exposure"))
        r.bridge.exposure[e.at(0).get<int>()] = e.at(1).get<double>();
    for (const auto& e : j.at("bridge").at("growth_events"))
        r.bridge.growth_events[e.at(0).get<int>()] = e.at(1).get<std::uint64_t>();
    return r;
}

// ---- CSV ----------------------------------------------------------------

inline void write_pmf_csv(const std::map<int, double>& probs, std::ostream& os) {
    os << "k,probability\n";
    for (const auto& [k, p] : probs) os << k << ',' << format_prob(p) << '\n';
    if (!os) throw IoError("failed to write CSV output");
}

inline std::map<int, double> read_pmf_csv(std::istream& in) {
    std::string line;
    std::map<int, double> probs;
    bool header_seen = false;
    while (std::getline(in, line)) {
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            if (t != "k,probability") throw IoError("CSV header must be 'k,probability'");
            header_seen = true;
            continue;
        }
        auto comma = t.find(',');
        if (comma == std::string::npos) throw IoError("malformed CSV row: " + t);
        try {
            probs[std::stoi(t.substr(0, comma))] = std::stod(t.substr(comma + 1));
        } catch (const std::exception&) {
            throw IoError("malformed CSV row: " + t);
        }
    }
    if (!header_seen) throw IoError("CSV input has no header");
    return probs;
}

enum class OutputFormat { Json, Csv };

// Serialize any result type. JSON gets the full schema object (plus caller
// metadata when given); CSV is restricted to distributions and stays
// data-only.
template <typename T>
void write_result(const T& value, OutputFormat format, std::ostream& os,
                  const ordered_json* meta = nullptr) {
    if (format == OutputFormat::Json) {
        ordered_json j = to_json(value);
        if (meta != nullptr) {
            ordered_json with_meta;
            with_meta["schema"] = j.at("schema");
            with_meta["meta"] = *meta;
            for (auto it = j.begin(); it != j.end(); ++it)
                if (it.key() != "schema") with_meta[it.key()] = it.value();
            j = std::move(with_meta);
        }
        os << j.dump(2) << '\n';
        if (!os) throw IoError("failed to write JSON output");
        return;
    }
    if constexpr (std::is_same_v<T, StationaryPmf>) {
        write_pmf_csv(value.as_map(), os);
    } else if constexpr (std::is_same_v<T, EmpiricalPmf>) {
        write_pmf_csv(value.probs, os);
    } else {
        throw DomainError("CSV output is restricted to distributions; use JSON");
    }
}

}  // namespace degrenet
