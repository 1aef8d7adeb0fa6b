#pragma once

#include <cmath>
#include <stdexcept>

#include "bolab/core/dispersion.hpp"
#include "bolab/core/spacetime_field.hpp"

namespace bolab {

// Modulation weight beta_{k,j} = 1 + 2^{(j-2k)/2}, defined for k >= 1.
// beta_{k,2k} = 2 and beta >= 1 everywhere.
inline double beta_weight(int k, int j) {
    if (k < 1) throw std::domain_error("beta_weight: k must be >= 1");
    if (j < 0) throw std::domain_error("beta_weight: j must be >= 0");
    return 1.0 + std::exp2(0.5 * (j - 2 * k));
}

// Frequency shell I_l = { |xi| in [2^{l-1}, 2^{l+1}] }.
inline bool in_shell(int l, double xi) {
    double a = std::fabs(xi);
    return a >= std::exp2(static_cast<double>(l - 1)) && a <= std::exp2(static_cast<double>(l + 1));
}

// Modulation interval: [-2, 2] for j = 0, the shell I_j for j >= 1.
inline bool in_mod_interval(int j, double mu) {
    if (j < 0) throw std::domain_error("in_mod_interval: j must be >= 0");
    if (j == 0) return std::fabs(mu) <= 2.0;
    return in_shell(j, mu);
}

// Region D_{k,j}: xi in I_k and (tau - omega(xi)) in the j-th modulation
// interval when k >= 1; for k <= 0 the modulation variable is tau itself.
inline bool region_contains(int k, int j, double xi, double tau) {
    if (!in_shell(k, xi)) return false;
    double mu = (k >= 1) ? tau - omega(xi) : tau;
    return in_mod_interval(j, mu);
}

// Disjoint modulation bins covering the line: bin 0 is |mu| <= 2, bin j >= 1
// is 2^j < |mu| <= 2^{j+1}. Bin j is contained in the j-th modulation
// interval, and distinct bins are disjoint, so masks over all j tile exactly.
inline int mod_bin_of(double mu) {
    double a = std::fabs(mu);
    if (a <= 2.0) return 0;
    int j = static_cast<int>(std::ceil(std::log2(a))) - 1;
    // guard rounding at exact powers of two
    if (a <= std::exp2(static_cast<double>(j))) --j;
    if (a > std::exp2(static_cast<double>(j + 1))) ++j;
    return j;
}

// Zero everything outside { xi in I_k (one sharp shell), mu in bin j } where
// mu = tau - omega(xi) for k >= 1 and mu = tau for k <= 0.
inline SpaceTimeField region_mask(const SpaceTimeField& f_in, int k, int j) {
    if (f_in.rep != Rep::frequency) throw std::logic_error("region_mask: needs frequency representation");
    if (j < 0) throw std::domain_error("region_mask: j must be >= 0");
    SpaceTimeField f = f_in;
    for (int ix = 0; ix < f.nx(); ++ix) {
        double xi = f.xgrid.xi_at(ix);
        bool shell_ok = in_shell(k, xi);
        for (int it = 0; it < f.nt(); ++it) {
            if (!shell_ok) {
                f.at(ix, it) = cplx{0.0, 0.0};
                continue;
            }
            double mu = f.tgrid.tau_at(it) - (k >= 1 ? omega(xi) : 0.0);
            if (mod_bin_of(mu) != j) f.at(ix, it) = cplx{0.0, 0.0};
        }
    }
    return f;
}

} // namespace bolab
