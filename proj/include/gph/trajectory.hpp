#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gph/dense_kernel.hpp"
#include "gph/field.hpp"

namespace gph {

struct HaltInfo {
    std::string reason;
    double time = 0.0;
};

// Time-stamped states plus named diagnostic series. For field runs each
// sample stores the mixture component fields (a single entry for plain
// one-particle runs); truncated-hierarchy runs store dense levels instead.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<std::vector<Field>> states;
    std::vector<double> weights;  // mixture weights, aligned with states[i]
    std::vector<std::map<std::string, double>> diagnostics;
    std::vector<std::vector<DenseKernel>> dense_levels;
    std::vector<DenseKernel> final_levels;  // truncated runs: full final stack
    std::optional<HaltInfo> halted;
    int mu = 1;
    Power power = Power::cubic;

    std::size_t samples() const { return times.size(); }

    void push_sample(double t, std::vector<Field> fields,
                     std::map<std::string, double> diag);

    // diagnostic column aligned with times; throws when absent at any sample
    std::vector<double> series(const std::string& name) const;
    bool has_series(const std::string& name) const;
};

}  // namespace gph
