#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace bolab {

// Result of a worst-case-input sweep: per-k measured sides of an inequality,
// their ratio, and a fitted growth law. Extra named columns carry auxiliary
// measurements (region minima, identity remainders) alongside the main table.
struct CounterexampleReport {
    std::string name;
    std::vector<int> k;
    std::vector<double> lhs, rhs, ratio;
    std::map<std::string, std::vector<double>> extra;
    double slope = 0.0;      // least-squares slope of ratio against k
    bool pass = false;       // the sweep's expected trend held
    std::string trend_note;  // what "pass" tested, in words

    // Every swept ratio must be a positive finite number.
    bool ratios_ok() const {
        if (ratio.size() != k.size()) return false;
        for (double r : ratio)
            if (!std::isfinite(r) || r <= 0.0) return false;
        return true;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["name"] = name;
        j["k"] = k;
        j["lhs"] = lhs;
        j["rhs"] = rhs;
        j["ratio"] = ratio;
        for (const auto& [key, col] : extra) j[key] = col;
        j["slope"] = slope;
        j["pass"] = pass;
        j["trend_note"] = trend_note;
        return j;
    }

    // One row per swept k; %.17g so a reload round-trips exactly.
    std::string to_csv() const {
        std::string s = "k,lhs,rhs,ratio";
        for (const auto& [key, col] : extra) s += "," + key;
        s += "\n";
        char buf[64];
        for (size_t i = 0; i < k.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%d", k[i]);
            s += buf;
            auto cell = [&](const std::vector<double>& col) {
                double v = i < col.size() ? col[i] : 0.0;
                std::snprintf(buf, sizeof(buf), ",%.17g", v);
                s += buf;
            };
            cell(lhs);
            cell(rhs);
            cell(ratio);
            for (const auto& [key, col] : extra) {
                (void)key;
                cell(col);
            }
            s += "\n";
        }
        return s;
    }
};

namespace detail {

// Least-squares slope of y against x; 0 when fewer than two points.
inline double fit_slope(const std::vector<int>& x, const std::vector<double>& y) {
    size_t n = std::min(x.size(), y.size());
    if (n < 2) return 0.0;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<double>(x[i]) * x[i];
        sxy += x[i] * y[i];
    }
    double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

} // namespace detail

} // namespace bolab
