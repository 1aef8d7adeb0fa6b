#pragma once

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bolab/core/spacetime_field.hpp"
#include "bolab/norms/hsigma.hpp"
#include "bolab/norms/zk.hpp"

namespace bolab {

namespace detail {

// Extract the |xi| <= 1.6 columns onto the smallest power-of-two lattice with
// the same frequency spacing. Diagonal-in-xi norms are unchanged; physical-x
// quadratures are evaluated at the reduced resolution.
inline SpaceTimeField extract_low_block(const SpaceTimeField& f) {
    if (f.rep != Rep::frequency) throw std::logic_error("extract_low_block: needs frequency representation");
    int m_lo = static_cast<int>(std::floor(1.6 / f.xgrid.dxi()));
    m_lo = std::min(m_lo, f.nx() / 2 - 1);
    unsigned want = static_cast<unsigned>(2 * (m_lo + 1));
    int np = static_cast<int>(std::bit_ceil(want < 4u ? 4u : want));
    if (np >= f.nx()) return f;
    SpaceTimeField out;
    out.xgrid = FrequencyGrid{f.xgrid.period, np};
    out.tgrid = f.tgrid;
    out.rep = Rep::frequency;
    out.data.assign(static_cast<size_t>(np) * f.nt(), cplx(0.0, 0.0));
    for (int m = -m_lo; m <= m_lo; ++m) {
        int src = f.xgrid.index_of(m) * f.nt();
        int dst = out.xgrid.index_of(m) * f.nt();
        for (int it = 0; it < f.nt(); ++it) out.data[dst + it] = f.data[src + it];
    }
    return out;
}

inline SpaceTimeField shell_masked(const SpaceTimeField& f, int k) {
    SpaceTimeField g = f;
    for (int ix = 0; ix < g.nx(); ++ix) {
        double c = (k == 0) ? eta0(g.xgrid.xi_at(ix)) : chi(k, g.xgrid.xi_at(ix));
        for (int it = 0; it < g.nt(); ++it) g.at(ix, it) *= c;
    }
    return g;
}

enum class ShellWeight { none, inverse_a };

inline void apply_inverse_a(SpaceTimeField& g, int k) {
    for (int ix = 0; ix < g.nx(); ++ix) {
        double w0 = (k >= 1) ? omega(g.xgrid.xi_at(ix)) : 0.0;
        for (int it = 0; it < g.nt(); ++it)
            g.at(ix, it) /= cplx(g.tgrid.tau_at(it) - w0, 1.0);
    }
}

inline NormReport shellwise_l2_norm(const SpaceTimeField& F, double sigma, ShellWeight sw, const char* name,
                                    const NormOptions& opts) {
    NormReport rep;
    rep.name = std::string(name) + "(" + std::to_string(sigma) + ")";
    rep.aggregation = "l2";
    const int k_max = shell_cap(F.xgrid);
    const double total = l2_frequency(F);
    double sq = 0.0;
    for (int k = 0; k <= k_max; ++k) {
        SpaceTimeField g = shell_masked(F, k);
        // transform round-trips leave ~1e-16 relative dust in every column;
        // shells carrying only that are treated as empty
        if (l2_frequency(g) <= 1e-13 * total) continue;
        if (sw == ShellWeight::inverse_a) apply_inverse_a(g, k);
        double mass;
        if (k == 0) {
            NormReport z0 = zk_norm(extract_low_block(g), 0, opts);
            mass = z0.value;
            rep.opt = z0.opt;
            rep.dropped_dc_mass = z0.dropped_dc_mass;
        } else if (k <= 99) {
            mass = xk_value_high(g, k);
        } else {
            mass = zk_norm(g, k, opts).value;
        }
        if (mass == 0.0) continue;
        double w = std::exp2(sigma * k);
        rep.terms.push_back({"k=" + std::to_string(k), w, mass, w * mass});
        sq += w * mass * w * mass;
    }
    rep.truncation_level = k_max;
    rep.value = std::sqrt(sq);
    return rep;
}

} // namespace detail

// Shell-summed space-time norm with second-moment weighting in t:
//   sqrt( sum_k 2^{2 sigma k} || eta_k(xi) (1 - d^2/dtau^2) F(u) ||_{Z_k}^2 ),
// where the tau-derivative acts as multiplication by (1 + t^2) before the
// time transform.
inline NormReport fsigma_norm(const SpaceTimeField& u, double sigma, const NormOptions& opts = {}) {
    if (sigma < 0.0) throw std::domain_error("fsigma_norm: sigma must be >= 0");
    SpaceTimeField up = to_physical(u);
    for (int it = 0; it < up.nt(); ++it) {
        double t = up.tgrid.t_at(it);
        double w = 1.0 + t * t;
        for (int ix = 0; ix < up.nx(); ++ix) up.at(ix, it) *= w;
    }
    return detail::shellwise_l2_norm(to_frequency(up), sigma, detail::ShellWeight::none, "fsigma", opts);
}

// Companion norm with the inverse modulation weight instead:
//   sqrt( sum_k 2^{2 sigma k} || eta_k(xi) A_k(xi,tau)^{-1} F(u) ||_{Z_k}^2 ),
// A_k = tau - omega(xi) + i for k >= 1 and tau + i for k = 0; |A_k| >= 1.
inline NormReport nsigma_norm(const SpaceTimeField& u, double sigma, const NormOptions& opts = {}) {
    if (sigma < 0.0) throw std::domain_error("nsigma_norm: sigma must be >= 0");
    return detail::shellwise_l2_norm(to_frequency(u), sigma, detail::ShellWeight::inverse_a, "nsigma", opts);
}

} // namespace bolab
