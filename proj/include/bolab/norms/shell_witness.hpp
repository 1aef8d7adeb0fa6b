#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "bolab/core/spacetime_field.hpp"
#include "bolab/norms/b0.hpp"
#include "bolab/norms/mixed.hpp"
#include "bolab/norms/zk.hpp"

namespace bolab {

// The four single-shell linear estimates witnessed over test families. Each
// returns the measured LHS/RHS pair; the ratio is the empirical constant and
// is tracked as a regression baseline, not asserted against a derivation.
enum class ShellEstimateKind {
    band_projection, // ||eta_j(tau-omega) f||_X <= C ||f||_Z, maxed over j
    time_slice,      // sup_t || integral f e^{it tau} dtau ||_{L2 or B0} <= C ||f||_Z
    maximal_function, // || inv transform f ||_{L2_x Linf_t} <= C 2^{k/2} ||(1-d^2/dtau^2) f||_Z
    local_smoothing   // || inv transform f ||_{Linf_x L2_t} <= C 2^{-k/2} ||f||_Z
};

inline ShellEstimateKind shell_estimate_from_letter(char c) {
    switch (c) {
        case 'b': return ShellEstimateKind::band_projection;
        case 'd': return ShellEstimateKind::time_slice;
        case 'e': return ShellEstimateKind::maximal_function;
        case 'f': return ShellEstimateKind::local_smoothing;
        default: throw std::domain_error(std::string("shell estimate: unknown kind '") + c + "'");
    }
}

struct WitnessResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;   // lhs / rhs, 0 when both vanish
    bool violation = false; // rhs = 0 with lhs != 0, must never happen
};

namespace detail {

inline WitnessResult make_witness(double lhs, double rhs) {
    WitnessResult w;
    w.lhs = lhs;
    w.rhs = rhs;
    if (rhs > 0.0)
        w.ratio = lhs / rhs;
    else if (lhs != 0.0)
        w.violation = true;
    return w;
}

// (1 - d^2/dtau^2) acting on a frequency-representation field: return rows to
// the time side, multiply by 1 + t^2, transform back.
inline SpaceTimeField second_moment_weight(const SpaceTimeField& f) {
    SpaceTimeField g = f;
    time_transform(g, +1);
    for (int it = 0; it < g.nt(); ++it) {
        double w = 1.0 + g.tgrid.t_at(it) * g.tgrid.t_at(it);
        for (int ix = 0; ix < g.nx(); ++ix) g.at(ix, it) *= w;
    }
    time_transform(g, -1);
    return g;
}

} // namespace detail

inline WitnessResult shell_estimate_witness(const SpaceTimeField& f, int k, ShellEstimateKind kind,
                                            const NormOptions& opts = {}) {
    if (f.rep != Rep::frequency) throw std::logic_error("shell estimate: needs frequency representation");
    switch (kind) {
        case ShellEstimateKind::band_projection: {
            if (k < 1) throw std::domain_error("band projection estimate: k must be >= 1");
            double rhs = zk_norm(f, k, opts).value;
            double lhs = 0.0;
            double mu_max = 0.0;
            for (int ix = 0; ix < f.nx(); ++ix) {
                double w0 = omega(f.xgrid.xi_at(ix));
                for (int it = 0; it < f.nt(); ++it)
                    mu_max = std::max(mu_max, std::fabs(f.tgrid.tau_at(it) - w0));
            }
            int j_cap = mod_bin_of(mu_max) + 1;
            for (int j = 0; j <= j_cap; ++j) {
                SpaceTimeField g = f;
                double band2 = 0.0;
                for (int ix = 0; ix < g.nx(); ++ix) {
                    double w0 = omega(g.xgrid.xi_at(ix));
                    for (int it = 0; it < g.nt(); ++it) {
                        g.at(ix, it) *= eta(j, g.tgrid.tau_at(it) - w0);
                        band2 += std::norm(g.at(ix, it));
                    }
                }
                if (band2 == 0.0) continue;
                lhs = std::max(lhs, detail::xk_value_high(g, k));
            }
            return detail::make_witness(lhs, rhs);
        }
        case ShellEstimateKind::time_slice: {
            if (k < 0) throw std::domain_error("time slice estimate: k must be >= 0");
            double rhs = zk_norm(f, k, opts).value;
            SpaceTimeField hy = f;
            detail::time_transform(hy, +1); // rows now live on the time side
            double lhs = 0.0;
            for (int it = 0; it < hy.nt(); ++it) {
                SpectralField slice(hy.xgrid);
                for (int ix = 0; ix < hy.nx(); ++ix) slice.coef[ix] = 2.0 * pi * hy.at(ix, it);
                double v = (k >= 1) ? l2_spectrum(slice) : b0_norm(slice, opts).value;
                lhs = std::max(lhs, v);
            }
            return detail::make_witness(lhs, rhs);
        }
        case ShellEstimateKind::maximal_function: {
            if (k < 1) throw std::domain_error("maximal function estimate: k must be >= 1");
            double lhs = mixed_norm(to_physical(f), MixedKind::l2x_linft);
            double rhs = std::exp2(0.5 * k) * zk_norm(detail::second_moment_weight(f), k, opts).value;
            return detail::make_witness(lhs, rhs);
        }
        case ShellEstimateKind::local_smoothing: {
            if (k < 1) throw std::domain_error("local smoothing estimate: k must be >= 1");
            double lhs = mixed_norm(to_physical(f), MixedKind::linfx_l2t);
            double rhs = std::exp2(-0.5 * k) * zk_norm(f, k, opts).value;
            return detail::make_witness(lhs, rhs);
        }
    }
    throw std::logic_error("shell estimate: unreachable");
}

} // namespace bolab
