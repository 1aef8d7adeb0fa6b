#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace bolab {

struct NormTerm {
    std::string label;
    double weight = 1.0;
    double mass = 0.0;   // unweighted piece size
    double value = 0.0;  // weight * mass (or the piece's final contribution)
};

struct OptimizerInfo {
    bool used = false;
    int iterations = 0;
    double baseline_x = 0.0; // everything in the first component
    double baseline_y = 0.0; // everything in the second component
    double achieved = 0.0;
    bool tol_reached = false;
};

struct NormReport {
    std::string name;
    double value = 0.0;
    std::string aggregation = "sum"; // "sum": value = sum of rows; "l2": value = sqrt(sum of squared rows)
    std::vector<NormTerm> terms;
    int truncation_level = -1;   // last dyadic level evaluated, -1 if n/a
    double tail_mass = 0.0;      // mass beyond the truncation, 0 on covered lattices
    double dropped_dc_mass = 0.0; // xi = 0 column mass invisible to the chi family
    OptimizerInfo opt;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["value"] = value;
        j["aggregation"] = aggregation;
        j["truncation_level"] = truncation_level;
        j["tail_mass"] = tail_mass;
        j["dropped_dc_mass"] = dropped_dc_mass;
        if (opt.used) {
            j["optimizer"] = {{"iterations", opt.iterations},
                              {"baseline_x", opt.baseline_x},
                              {"baseline_y", opt.baseline_y},
                              {"achieved", opt.achieved},
                              {"tol_reached", opt.tol_reached}};
        }
        auto arr = nlohmann::ordered_json::array();
        for (const auto& t : terms)
            arr.push_back({{"label", t.label}, {"weight", t.weight}, {"mass", t.mass}, {"value", t.value}});
        j["terms"] = arr;
        return j;
    }
};

struct NormOptions {
    int split_budget = 500;      // optimizer iteration cap
    double split_tol = 1e-6;     // relative-decrease stopping tolerance
    bool split_enabled = true;   // false: report the better trivial baseline
    int kp_min = -40;            // lowest chi index in the low-frequency sums
};

inline constexpr double support_tolerance = 1e-10; // relative mass allowed outside the stated support

} // namespace bolab
