#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bolab/core/dispersion.hpp"
#include "bolab/core/spacetime_field.hpp"
#include "bolab/core/spectral_field.hpp"
#include "bolab/solver/config.hpp"
#include "bolab/solver/duhamel.hpp"

namespace bolab {

namespace detail {

// Right side of the integrating-factor system dv/dt = F(t, v) where
// v = e^{-i t omega} u^ and F = -(i xi / 2) e^{-i t omega} (u^2)^.
inline void if_rhs(const FrequencyGrid& g, const SolverConfig& cfg, double t,
                   const std::vector<cplx>& v, std::vector<cplx>& out) {
    const int n = g.n;
    out.assign(n, cplx{0.0, 0.0});
    if (!cfg.nonlinear) return;
    SpectralField uh(g);
    for (int i = 0; i < n; ++i) {
        double ph = t * omega(g.xi_at(i));
        uh.coef[i] = v[i] * cplx{std::cos(ph), std::sin(ph)};
    }
    zero_nyquist(uh);
    std::vector<cplx> up = inverse_transform(uh);
    SpectralField q = squared_spectrum(g, up, cfg.dealias);
    for (int i = 0; i < n; ++i) {
        double xi = g.xi_at(i);
        double ph = -t * omega(xi);
        out[i] = q.coef[i] * cplx{0.0, -0.5 * xi} * cplx{std::cos(ph), std::sin(ph)};
    }
    if (n % 2 == 0) out[g.nyquist_index()] = cplx{0.0, 0.0};
}

inline double coef_l2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

// One classical four-stage step of size h; throws when the state grows
// more than tenfold.
inline void if_rk4_step(const FrequencyGrid& g, const SolverConfig& cfg, double t, double h,
                        std::vector<cplx>& v) {
    const int n = g.n;
    std::vector<cplx> k1, k2, k3, k4, tmp(n);
    if_rhs(g, cfg, t, v, k1);
    for (int i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
    if_rhs(g, cfg, t + 0.5 * h, tmp, k2);
    for (int i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * h * k2[i];
    if_rhs(g, cfg, t + 0.5 * h, tmp, k3);
    for (int i = 0; i < n; ++i) tmp[i] = v[i] + h * k3[i];
    if_rhs(g, cfg, t + h, tmp, k4);
    const double before = coef_l2(v);
    for (int i = 0; i < n; ++i)
        v[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (before > 0.0 && coef_l2(v) > 10.0 * before)
        throw StabilityError("reference_solve: state norm grew more than tenfold in one step");
}

} // namespace detail

// Independent integrator on the same lattice: classical four-stage explicit
// stepping of the integrating-factor system, marching outward from t = 0 so
// every lattice node is hit exactly; substeps > 1 refines each lattice dt.
// Exact for the linear flow (the integrating factor absorbs it entirely).
inline SpaceTimeField reference_solve(const SpectralField& phi, const SolverConfig& cfg) {
    validate(cfg);
    if (!(phi.grid == cfg.xgrid()))
        throw std::domain_error("reference_solve: data grid does not match the config grid");

    const FrequencyGrid g = cfg.xgrid();
    const TimeGrid tg = cfg.tgrid();
    const int n = g.n, m = tg.n_t, c = tg.center_index();
    const double h = cfg.dt() / cfg.substeps;

    SpaceTimeField out(g, tg, Rep::physical);
    auto record = [&](int it, const std::vector<cplx>& v) {
        SpectralField uh(g);
        const double t = tg.t_at(it);
        for (int i = 0; i < n; ++i) {
            double ph = t * omega(g.xi_at(i));
            uh.coef[i] = v[i] * cplx{std::cos(ph), std::sin(ph)};
        }
        zero_nyquist(uh);
        std::vector<cplx> up = inverse_transform(uh);
        for (int ix = 0; ix < n; ++ix) out.at(ix, it) = up[ix];
    };

    std::vector<cplx> v = phi.coef;
    if (n % 2 == 0) v[g.nyquist_index()] = cplx{0.0, 0.0};
    record(c, v);
    for (int it = c; it + 1 < m; ++it) {
        for (int s = 0; s < cfg.substeps; ++s)
            detail::if_rk4_step(g, cfg, tg.t_at(it) + s * h, h, v);
        record(it + 1, v);
    }
    v = phi.coef;
    if (n % 2 == 0) v[g.nyquist_index()] = cplx{0.0, 0.0};
    for (int it = c; it - 1 >= 0; --it) {
        for (int s = 0; s < cfg.substeps; ++s)
            detail::if_rk4_step(g, cfg, tg.t_at(it) - s * h, -h, v);
        record(it - 1, v);
    }
    return out;
}

} // namespace bolab
