#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "bolab/core/fft.hpp"
#include "bolab/norms/report.hpp"

namespace bolab {

// Two-norm splitting problem: minimize a_value(g) + b_value(f - g) over g.
// Subgradient callbacks return an ascent direction for the respective norm;
// any positive scaling is acceptable because each half-step normalizes its
// own direction before stepping.
struct SplitObjective {
    std::function<double(const std::vector<cplx>&)> a_value;
    std::function<double(const std::vector<cplx>&)> b_value;
    std::function<std::vector<cplx>(const std::vector<cplx>&)> a_subgrad;
    std::function<std::vector<cplx>(const std::vector<cplx>&)> b_subgrad;
    std::function<void(std::vector<cplx>&)> project; // optional support projection
};

struct SplitResult {
    std::vector<cplx> g, h;
    OptimizerInfo info;
};

namespace detail {

inline double vec_l2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

} // namespace detail

// Projected alternating subgradient descent with diminishing steps. The
// objective value is re-evaluated exactly after every iteration and the best
// splitting seen is returned, so the result is always a valid upper bound no
// worse than the trivial baselines.
inline SplitResult split_minimize(const std::vector<cplx>& f, const SplitObjective& obj,
                                  const NormOptions& opts = {}, const std::vector<cplx>* init_g = nullptr) {
    const size_t n = f.size();
    const double fn = detail::vec_l2(f);
    SplitResult res;
    res.info.used = true;

    std::vector<cplx> zero(n, cplx(0.0, 0.0));
    res.info.baseline_x = obj.a_value(f);
    res.info.baseline_y = obj.b_value(f);

    auto eval = [&](const std::vector<cplx>& g, const std::vector<cplx>& h) {
        return obj.a_value(g) + obj.b_value(h);
    };

    std::vector<cplx> g = (res.info.baseline_x <= res.info.baseline_y) ? f : zero;
    if (init_g) {
        g = *init_g;
        if (obj.project) obj.project(g);
    }
    std::vector<cplx> h(n);
    for (size_t i = 0; i < n; ++i) h[i] = f[i] - g[i];

    std::vector<cplx> best_g = g, best_h = h;
    double best = eval(g, h);
    double trivial = std::min(res.info.baseline_x, res.info.baseline_y);
    if (trivial < best) {
        best = trivial;
        best_g = (res.info.baseline_x <= res.info.baseline_y) ? f : zero;
        for (size_t i = 0; i < n; ++i) best_h[i] = f[i] - best_g[i];
    }

    if (!opts.split_enabled || fn == 0.0) {
        res.g = best_g;
        res.h = best_h;
        res.info.achieved = best;
        return res;
    }

    const double alpha0 = 0.1;
    const int stall_limit = 40;
    int stall = 0;
    int iter = 0;
    for (; iter < opts.split_budget; ++iter) {
        double alpha = alpha0 * fn / std::sqrt(static_cast<double>(iter + 1));

        // Half-step on the first norm: move g against its subgradient.
        std::vector<cplx> da = obj.a_subgrad(g);
        double dan = detail::vec_l2(da);
        if (dan > 0.0)
            for (size_t i = 0; i < n; ++i) g[i] -= alpha / dan * da[i];
        if (obj.project) obj.project(g);
        for (size_t i = 0; i < n; ++i) h[i] = f[i] - g[i];

        // Half-step on the second norm: move h against its subgradient.
        std::vector<cplx> db = obj.b_subgrad(h);
        double dbn = detail::vec_l2(db);
        if (dbn > 0.0)
            for (size_t i = 0; i < n; ++i) h[i] -= alpha / dbn * db[i];
        for (size_t i = 0; i < n; ++i) g[i] = f[i] - h[i];
        if (obj.project) obj.project(g);
        for (size_t i = 0; i < n; ++i) h[i] = f[i] - g[i];

        double J = eval(g, h);
        if (J < best - opts.split_tol * std::max(best, 1e-300)) {
            best = J;
            best_g = g;
            best_h = h;
            stall = 0;
        } else {
            if (J < best) { best = J; best_g = g; best_h = h; }
            if (++stall >= stall_limit) {
                res.info.tol_reached = true;
                ++iter;
                break;
            }
        }
    }
    res.info.iterations = iter;
    res.g = std::move(best_g);
    res.h = std::move(best_h);
    res.info.achieved = best;
    return res;
}

} // namespace bolab
