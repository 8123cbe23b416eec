#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "degrenet/empirical.hpp"
#include "degrenet/errors.hpp"

namespace degrenet {

struct ParseOptions {
    bool strict = false;  // strict: malformed lines abort instead of counting
};

// Simple undirected graph read from an edge list, with vertices relabeled to
// dense ids 0..vertex_count-1 and the discard bookkeeping the cleaners did.
struct SimpleGraphData {
    std::size_t vertex_count = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // u < v
    std::vector<std::string> labels;  // dense id -> original label
    std::uint64_t discarded_self_loops = 0;
    std::uint64_t discarded_duplicates = 0;
    std::uint64_t discarded_malformed = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_tokens(const std::string& line, bool comma) {
    std::vector<std::string> out;
    if (comma) {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) out.push_back(tok);
        }
    } else {
        std::stringstream ss(line);
        std::string tok;
        while (ss >> tok) out.push_back(tok);
    }
    return out;
}

}  // namespace detail

// Parse "u v" lines. The separator (comma vs whitespace/tab) is detected
// from the first data line; '#' and '%' lines are comments; self-loops and
// repeated undirected edges are discarded and counted. Labels can be any
// string; they are relabeled to dense integer ids with the map retained.
inline SimpleGraphData read_edge_list(std::istream& in,
                                      const ParseOptions& options = {}) {
    if (!in) throw IoError("edge list stream is not readable");

    SimpleGraphData data;
    std::unordered_map<std::string, std::uint32_t> ids;
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    bool separator_known = false;
    bool comma = false;
    std::size_t line_no = 0;

    auto intern = [&](const std::string& label) {
        auto it = ids.find(label);
        if (it != ids.end()) return it->second;
        auto id = static_cast<std::uint32_t>(data.labels.size());
        ids.emplace(label, id);
        data.labels.push_back(label);
        return id;
    };

    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == '%') continue;
        if (!separator_known) {
            comma = t.find(',') != std::string::npos;
            separator_known = true;
        }
        auto tokens = detail::split_tokens(t, comma);
        if (tokens.size() < 2) {
            if (options.strict)
                throw IoError("malformed line " + std::to_string(line_no) +
                              ": fewer than two tokens");
            ++data.discarded_malformed;
            continue;
        }
        std::uint32_t u = intern(tokens[0]);
        std::uint32_t v = intern(tokens[1]);
        if (u == v) {
            ++data.discarded_self_loops;
            continue;
        }
        auto key = std::minmax(u, v);
        if (!seen.insert({key.first, key.second}).second) {
            ++data.discarded_duplicates;
            continue;
        }
        data.edges.emplace_back(key.first, key.second);
    }

    data.vertex_count = data.labels.size();
    if (data.vertex_count == 0)
        throw IoError("edge list contains no usable content");
    return data;
}

// VertexCount distribution over degrees, isolated vertices included as the
// degree-0 bin (downstream fitting drops them).
inline EmpiricalPmf degree_histogram(const SimpleGraphData& data) {
    if (data.vertex_count < 1)
        throw DomainError("degree histogram needs at least one vertex");
    std::vector<std::uint32_t> degree(data.vertex_count, 0);
    for (const auto& [u, v] : data.edges) {
        ++degree[u];
        ++degree[v];
    }
    std::map<int, double> counts;
    for (auto d : degree) counts[static_cast<int>(d)] += 1.0;
    char src[96];
    std::snprintf(src, sizeof src, "edge_list(n=%zu,m=%zu)", data.vertex_count,
                  data.edges.size());
    return make_empirical(counts, Weighting::VertexCount, src);
}

}  // namespace degrenet
