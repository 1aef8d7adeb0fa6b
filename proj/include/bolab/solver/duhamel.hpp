#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "bolab/core/dispersion.hpp"
#include "bolab/core/spacetime_field.hpp"
#include "bolab/core/spectral_field.hpp"

namespace bolab {

namespace detail {

inline int dealias_cap(int n) { return n / 3; }

inline void truncate_spectrum(SpectralField& f, int cap) {
    for (int i = 0; i < f.grid.n; ++i)
        if (std::abs(f.grid.mode_of(i)) > cap) f.coef[i] = cplx{0.0, 0.0};
}

// Spectrum of u^2 on one slice. With dealiasing on, both the factor and the
// product are truncated to the 2/3 band, which makes the kept modes of the
// pointwise square exact for band-limited input.
inline SpectralField squared_spectrum(const FrequencyGrid& g, const std::vector<cplx>& samples,
                                      bool dealias) {
    std::vector<cplx> work;
    const std::vector<cplx>* src = &samples;
    if (dealias) {
        SpectralField s = forward_transform(g, samples);
        truncate_spectrum(s, dealias_cap(g.n));
        work = inverse_transform(s);
        src = &work;
    }
    std::vector<cplx> sq(g.n);
    for (int j = 0; j < g.n; ++j) sq[j] = (*src)[j] * (*src)[j];
    SpectralField out = forward_transform(g, sq);
    if (dealias) truncate_spectrum(out, dealias_cap(g.n));
    return out;
}

} // namespace detail

// The integral term -(1/2) int_0^t W(t-s) d_x(u^2)(s) ds at every lattice
// time. Computed in the integrating-factor frame: each slice's square is
// transformed, multiplied by (i xi / 2) e^{-i s omega(xi)}, integrated in s
// with a cumulative composite Simpson rule walking outward from t = 0 (a
// three-point end rule bridges to the first node on either side), and the
// phase e^{+i t omega(xi)} is restored before transforming back.
inline SpaceTimeField duhamel(const SpaceTimeField& u, bool dealias = true) {
    if (u.rep != Rep::physical) throw std::logic_error("duhamel: needs physical representation");
    const auto& g = u.xgrid;
    const int n = u.nx(), m = u.nt();
    const int c = u.tgrid.center_index();
    const double h = u.tgrid.dt();

    std::vector<std::vector<cplx>> f(m); // integrand rows f[it][i]
    std::vector<cplx> slice(n);
    for (int it = 0; it < m; ++it) {
        for (int ix = 0; ix < n; ++ix) slice[ix] = u.at(ix, it);
        SpectralField q = detail::squared_spectrum(g, slice, dealias);
        const double s = u.tgrid.t_at(it);
        f[it].resize(n);
        for (int i = 0; i < n; ++i) {
            double xi = g.xi_at(i);
            double ph = -s * omega(xi);
            f[it][i] = q.coef[i] * cplx{0.0, 0.5 * xi} * cplx{std::cos(ph), std::sin(ph)};
        }
    }

    std::vector<std::vector<cplx>> acc(m, std::vector<cplx>(n, cplx{0.0, 0.0}));
    for (int i = 0; i < n; ++i) {
        // bridge rules: int_{t_c}^{t_{c+1}} ~ (h/12)(5 f_{c+1} + 8 f_c - f_{c-1})
        acc[c + 1][i] = (h / 12.0) * (5.0 * f[c + 1][i] + 8.0 * f[c][i] - f[c - 1][i]);
        acc[c - 1][i] = -(h / 12.0) * (5.0 * f[c - 1][i] + 8.0 * f[c][i] - f[c + 1][i]);
        for (int j = c + 2; j < m; ++j)
            acc[j][i] = acc[j - 2][i] + (h / 3.0) * (f[j - 2][i] + 4.0 * f[j - 1][i] + f[j][i]);
        for (int j = c - 2; j >= 0; --j)
            acc[j][i] = acc[j + 2][i] - (h / 3.0) * (f[j][i] + 4.0 * f[j + 1][i] + f[j + 2][i]);
    }

    SpaceTimeField out(u.xgrid, u.tgrid, Rep::physical);
    for (int it = 0; it < m; ++it) {
        SpectralField s(g);
        const double t = u.tgrid.t_at(it);
        for (int i = 0; i < n; ++i) {
            double ph = t * omega(g.xi_at(i));
            s.coef[i] = -acc[it][i] * cplx{std::cos(ph), std::sin(ph)};
        }
        zero_nyquist(s);
        std::vector<cplx> back = inverse_transform(s);
        for (int ix = 0; ix < n; ++ix) out.at(ix, it) = back[ix];
    }
    return out;
}

} // namespace bolab
