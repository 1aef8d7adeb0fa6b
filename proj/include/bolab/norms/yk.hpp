#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "bolab/core/spacetime_field.hpp"
#include "bolab/dyadic/cutoffs.hpp"
#include "bolab/dyadic/shells.hpp"
#include "bolab/norms/mixed.hpp"
#include "bolab/norms/report.hpp"
#include "bolab/norms/xk.hpp"

namespace bolab {

namespace detail {

inline void check_yk_support(const SpaceTimeField& f, int k) {
    double outside = 0.0, total = 0.0;
    const double cap = std::exp2(static_cast<double>(k));
    for (int ix = 0; ix < f.nx(); ++ix) {
        double xi = f.xgrid.xi_at(ix);
        double w0 = omega(xi);
        bool xi_ok = in_shell(k, xi);
        for (int it = 0; it < f.nt(); ++it) {
            double m = std::norm(f.at(ix, it));
            total += m;
            if (!xi_ok || std::fabs(f.tgrid.tau_at(it) - w0) > cap) outside += m;
        }
    }
    if (total > 0.0 && outside > support_tolerance * support_tolerance * total)
        throw std::domain_error("yk_norm: field has mass outside {xi in shell " + std::to_string(k) +
                                ", |tau - omega| <= 2^" + std::to_string(k) + "}");
}

inline SpaceTimeField yk_weighted(const SpaceTimeField& f) {
    SpaceTimeField g = f;
    for (int ix = 0; ix < g.nx(); ++ix) {
        double w0 = omega(g.xgrid.xi_at(ix));
        for (int it = 0; it < g.nt(); ++it)
            g.at(ix, it) *= cplx(g.tgrid.tau_at(it) - w0, 1.0);
    }
    return g;
}

// Measure-weighted column norms r(x) = sqrt(sum_t dt |u(x,t)|^2) and the
// normalized field u / r, the L1_x L2_t duality witness.
inline SpaceTimeField l1l2_witness(const SpaceTimeField& u) {
    SpaceTimeField w = u;
    const double dt = u.tgrid.dt();
    for (int ix = 0; ix < u.nx(); ++ix) {
        double s = 0.0;
        for (int it = 0; it < u.nt(); ++it) s += std::norm(u.at(ix, it));
        double r = std::sqrt(s * dt);
        for (int it = 0; it < u.nt(); ++it)
            w.at(ix, it) = (r > 0.0) ? u.at(ix, it) / r : cplx(0.0, 0.0);
    }
    return w;
}

inline double yk_value_high(const SpaceTimeField& f, int k) {
    SpaceTimeField g = to_physical(yk_weighted(f));
    return std::exp2(-0.5 * static_cast<double>(k)) * mixed_norm(g, MixedKind::l1x_l2t);
}

inline std::vector<cplx> yk_subgrad_high(const SpaceTimeField& f, int /*k*/) {
    SpaceTimeField g = to_physical(yk_weighted(f));
    SpaceTimeField d = to_frequency(l1l2_witness(g));
    for (int ix = 0; ix < d.nx(); ++ix) {
        double w0 = omega(d.xgrid.xi_at(ix));
        for (int it = 0; it < d.nt(); ++it)
            d.at(ix, it) *= cplx(d.tgrid.tau_at(it) - w0, -1.0); // adjoint of the weight
    }
    return d.data;
}

inline int y0_level_cap(const TimeGrid& tg) {
    double tau_max = 0.0;
    for (int it = 0; it < tg.n_t; ++it) tau_max = std::max(tau_max, std::fabs(tg.tau_at(it)));
    return mod_bin_of(tau_max) + 1;
}

inline double y0_band_mass(const SpaceTimeField& f, int j, SpaceTimeField* phys_out = nullptr) {
    SpaceTimeField g = f;
    double band2 = 0.0;
    for (int it = 0; it < g.nt(); ++it) {
        double e = eta(j, g.tgrid.tau_at(it));
        for (int ix = 0; ix < g.nx(); ++ix) {
            g.at(ix, it) *= e;
            band2 += std::norm(g.at(ix, it));
        }
    }
    if (band2 == 0.0) {
        if (phys_out) *phys_out = SpaceTimeField();
        return 0.0;
    }
    SpaceTimeField p = to_physical(g);
    double mass = mixed_norm(p, MixedKind::l1x_l2t);
    if (phys_out) *phys_out = std::move(p);
    return mass;
}

inline double y0_value(const SpaceTimeField& f) {
    int j_max = y0_level_cap(f.tgrid);
    double v = 0.0;
    for (int j = 0; j <= j_max; ++j) v += std::exp2(static_cast<double>(j)) * y0_band_mass(f, j);
    return v;
}

inline std::vector<cplx> y0_subgrad(const SpaceTimeField& f) {
    int j_max = y0_level_cap(f.tgrid);
    std::vector<cplx> d(f.data.size(), cplx(0.0, 0.0));
    for (int j = 0; j <= j_max; ++j) {
        SpaceTimeField p;
        if (y0_band_mass(f, j, &p) == 0.0) continue;
        SpaceTimeField w = to_frequency(l1l2_witness(p));
        double lvl = std::exp2(static_cast<double>(j));
        for (int it = 0; it < w.nt(); ++it) {
            double e = eta(j, w.tgrid.tau_at(it));
            if (e == 0.0) continue;
            for (int ix = 0; ix < w.nx(); ++ix) d[ix * w.nt() + it] += lvl * e * w.at(ix, it);
        }
    }
    return d;
}

} // namespace detail

// Y_k norm for k >= 1: 2^{-k/2} || inverse transform of (tau - omega(xi) + i) f ||_{L1_x L2_t}.
// Precondition: support in {xi in the k-th shell, |tau - omega(xi)| <= 2^k}.
inline NormReport yk_norm_high(const SpaceTimeField& f, int k, bool check_support = true) {
    if (k < 1) throw std::domain_error("yk_norm_high: k must be >= 1");
    if (f.rep != Rep::frequency) throw std::logic_error("yk: needs frequency representation");
    if (check_support) detail::check_yk_support(f, k);
    SpaceTimeField g = to_physical(detail::yk_weighted(f));
    NormReport rep;
    rep.name = "y_" + std::to_string(k);
    double w = std::exp2(-0.5 * static_cast<double>(k));
    double mass = mixed_norm(g, MixedKind::l1x_l2t);
    rep.terms.push_back({"weighted", w, mass, w * mass});
    rep.value = w * mass;
    return rep;
}

// Y_0 norm: sum_j 2^j || inverse transform of eta_j(tau) f ||_{L1_x L2_t}.
// Precondition: support in |xi| <= 2.
inline NormReport yk_norm_zero(const SpaceTimeField& f, bool check_support = true) {
    if (f.rep != Rep::frequency) throw std::logic_error("yk: needs frequency representation");
    if (check_support) detail::check_shell_support(f, 0, "yk_norm");
    int j_max = detail::y0_level_cap(f.tgrid);
    NormReport rep;
    rep.name = "y_0";
    rep.truncation_level = j_max;
    for (int j = 0; j <= j_max; ++j) {
        double mass = detail::y0_band_mass(f, j);
        if (mass == 0.0) continue;
        double w = std::exp2(static_cast<double>(j));
        rep.terms.push_back({"j=" + std::to_string(j), w, mass, w * mass});
        rep.value += w * mass;
    }
    return rep;
}

inline NormReport yk_norm(const SpaceTimeField& f, int k) {
    if (k < 0) throw std::domain_error("yk_norm: k must be >= 0");
    return k == 0 ? yk_norm_zero(f) : yk_norm_high(f, k);
}

} // namespace bolab
