#pragma once

#include <cmath>
#include <vector>

#include "bolab/core/spacetime_field.hpp"

namespace bolab {

struct ResidualReport {
    double l2 = 0.0;   // L2(dx dt) of the residual
    double linf = 0.0; // max over lattice cells
};

// Residual of d_t u + H d_x^2 u + d_x(u^2/2) on the lattice: 4th-order time
// stencils (one-sided at the ends), spectral x-derivatives per slice. The
// product term is not dealiased here; this measures the continuum equation.
inline ResidualReport pde_residual(const SpaceTimeField& u_in) {
    SpaceTimeField u = to_physical(u_in);
    const int n = u.nx(), m = u.nt();
    const auto& g = u.xgrid;
    const double dt = u.tgrid.dt();

    // spatial terms per time slice: H d_x^2 has symbol i*xi*|xi|
    std::vector<cplx> slice(n), spatial(static_cast<size_t>(n) * m);
    for (int it = 0; it < m; ++it) {
        for (int ix = 0; ix < n; ++ix) slice[ix] = u.at(ix, it);
        SpectralField su = forward_transform(g, slice);
        std::vector<cplx> sq(n);
        for (int ix = 0; ix < n; ++ix) sq[ix] = 0.5 * slice[ix] * slice[ix];
        SpectralField ssq = forward_transform(g, sq);
        for (int i = 0; i < n; ++i) {
            double xi = g.xi_at(i);
            su.coef[i] = cplx{0.0, xi * std::fabs(xi)} * su.coef[i] + cplx{0.0, xi} * ssq.coef[i];
        }
        zero_nyquist(su);
        std::vector<cplx> back = inverse_transform(su);
        for (int ix = 0; ix < n; ++ix) spatial[static_cast<size_t>(ix) * m + it] = back[ix];
    }

    auto du_dt = [&](int ix, int it) -> cplx {
        auto v = [&](int i) { return u.at(ix, i); };
        if (it >= 2 && it <= m - 3)
            return (-v(it + 2) + 8.0 * v(it + 1) - 8.0 * v(it - 1) + v(it - 2)) / (12.0 * dt);
        if (it == 0)
            return (-25.0 * v(0) + 48.0 * v(1) - 36.0 * v(2) + 16.0 * v(3) - 3.0 * v(4)) / (12.0 * dt);
        if (it == 1)
            return (-3.0 * v(0) - 10.0 * v(1) + 18.0 * v(2) - 6.0 * v(3) + v(4)) / (12.0 * dt);
        if (it == m - 2)
            return (3.0 * v(m - 1) + 10.0 * v(m - 2) - 18.0 * v(m - 3) + 6.0 * v(m - 4) - v(m - 5)) / (12.0 * dt);
        return (25.0 * v(m - 1) - 48.0 * v(m - 2) + 36.0 * v(m - 3) - 16.0 * v(m - 4) + 3.0 * v(m - 5)) / (12.0 * dt);
    };

    ResidualReport rep;
    double acc = 0.0;
    for (int ix = 0; ix < n; ++ix)
        for (int it = 0; it < m; ++it) {
            cplx r = du_dt(ix, it) + spatial[static_cast<size_t>(ix) * m + it];
            double a = std::abs(r);
            acc += a * a;
            if (a > rep.linf) rep.linf = a;
        }
    rep.l2 = std::sqrt(acc * g.dx() * dt);
    return rep;
}

} // namespace bolab
