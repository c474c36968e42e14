#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace koch {

/// Outcome of a numerical verification: a verdict, the measured quantities
/// that led to it (insertion-ordered for stable serialization), and notes.
struct CheckReport {
    bool passed = false;
    std::vector<std::pair<std::string, double>> metrics;
    std::string notes;

    void add_metric(std::string name, double value) {
        metrics.emplace_back(std::move(name), value);
    }

    double metric(std::string_view name) const {
        for (const auto& [key, value] : metrics)
            if (key == name)
                return value;
        throw std::out_of_range("no such metric: " + std::string(name));
    }

    bool has_metric(std::string_view name) const {
        for (const auto& [key, value] : metrics)
            if (key == name)
                return true;
        return false;
    }
};

} // namespace koch
