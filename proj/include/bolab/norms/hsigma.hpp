#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolab/core/spectral_field.hpp"
#include "bolab/dyadic/cutoffs.hpp"
#include "bolab/norms/b0.hpp"

namespace bolab {

namespace detail {

// Highest dyadic shell with nonzero chi_k on the lattice.
inline int shell_cap(const FrequencyGrid& g) {
    double xm = g.xi_max();
    if (xm < 0.625 * 2.0) return 0;
    return static_cast<int>(std::floor(std::log2(xm / 0.625)));
}

} // namespace detail

// Weighted Sobolev norm built on dyadic shells:
//   sqrt( ||eta_0 f||_{B_0}^2 + sum_{k >= 1} 2^{2 sigma k} ||chi_k f||_{L2}^2 ).
inline NormReport hsigma_tilde_norm(const SpectralField& phi, double sigma, const NormOptions& opts = {}) {
    if (sigma < 0.0) throw std::domain_error("hsigma_tilde_norm: sigma must be >= 0");
    NormReport rep;
    rep.name = "hsigma(" + std::to_string(sigma) + ")";
    rep.aggregation = "l2";

    SpectralField low = phi;
    for (int i = 0; i < low.grid.n; ++i) low.coef[i] *= eta0(low.grid.xi_at(i));
    NormReport b0 = b0_norm(low, opts);
    rep.opt = b0.opt;
    rep.dropped_dc_mass = b0.dropped_dc_mass;
    rep.terms.push_back({"b0", 1.0, b0.value, b0.value});
    double sq = b0.value * b0.value;

    const int k_max = detail::shell_cap(phi.grid);
    std::vector<double> m2(k_max + 1, 0.0);
    for (int i = 0; i < phi.grid.n; ++i) {
        double xi = phi.grid.xi_at(i);
        double a2 = std::norm(phi.coef[i]);
        if (a2 == 0.0 || xi == 0.0) continue;
        int kb = static_cast<int>(std::floor(std::log2(std::fabs(xi))));
        for (int k = kb; k <= kb + 1; ++k) {
            if (k < 1 || k > k_max) continue;
            double c = chi(k, xi);
            if (c != 0.0) m2[k] += c * c * a2;
        }
    }
    for (int k = 1; k <= k_max; ++k) {
        if (m2[k] == 0.0) continue;
        double mass = std::sqrt(m2[k] * phi.grid.dxi());
        double w = std::exp2(sigma * k);
        rep.terms.push_back({"k=" + std::to_string(k), w, mass, w * mass});
        sq += w * mass * w * mass;
    }
    rep.truncation_level = k_max;
    rep.value = std::sqrt(sq);
    return rep;
}

} // namespace bolab
