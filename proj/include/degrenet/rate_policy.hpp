#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "degrenet/errors.hpp"

namespace degrenet {

enum class RateKind { Linear, Logarithmic, Tabulated };

// Degree-increase law lambda(k) over degrees k = 1, 2, ...
//
//   Linear:       lambda(k) = k
//   Logarithmic:  lambda(k) = ln(1 + k)
//   Tabulated:    caller-supplied table over k = 1..n, clamped to the last
//                 entry beyond n; entries must be positive and non-decreasing.
class RatePolicy {
public:
    static RatePolicy linear() { return RatePolicy(RateKind::Linear, {}); }
    static RatePolicy logarithmic() { return RatePolicy(RateKind::Logarithmic, {}); }

    static RatePolicy tabulated(std::vector<double> rates) {
        if (rates.empty())
            throw DomainError("tabulated rate law needs at least one entry");
        double prev = 0.0;
        for (double r : rates) {
            if (!(r > 0.0))
                throw DomainError("tabulated rate law entries must be positive");
            if (r < prev)
                throw DomainError("tabulated rate law must be non-decreasing in k");
            prev = r;
        }
        return RatePolicy(RateKind::Tabulated, std::move(rates));
    }

    double rate(int k) const {
        if (k < 1)
            throw DomainError("rate law is defined on degrees k >= 1, got k=" +
                              std::to_string(k));
        switch (kind_) {
            case RateKind::Linear:
                return static_cast<double>(k);
            case RateKind::Logarithmic:
                return std::log1p(static_cast<double>(k));
            case RateKind::Tabulated: {
                auto idx = std::min<std::size_t>(static_cast<std::size_t>(k) - 1,
                                                 table_.size() - 1);
                return table_[idx];
            }
        }
        throw DomainError("unknown rate kind");
    }

    RateKind kind() const { return kind_; }
    const std::vector<double>& table() const { return table_; }

    std::string name() const {
        switch (kind_) {
            case RateKind::Linear: return "linear";
            case RateKind::Logarithmic: return "log";
            case RateKind::Tabulated: return "tabulated";
        }
        return "?";
    }

    friend bool operator==(const RatePolicy& a, const RatePolicy& b) {
        return a.kind_ == b.kind_ && a.table_ == b.table_;
    }

private:
    RatePolicy(RateKind kind, std::vector<double> table)
        : kind_(kind), table_(std::move(table)) {}

    RateKind kind_;
    std::vector<double> table_;
};

}  // namespace degrenet
