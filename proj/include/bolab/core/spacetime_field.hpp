#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "bolab/core/fft.hpp"
#include "bolab/core/grid.hpp"
#include "bolab/core/spectral_field.hpp"

namespace bolab {

enum class Rep { physical, frequency };

// Two-dimensional field on the space-time lattice, row-major with x outer and
// t inner: data[ix * n_t + it]. In frequency representation the same layout
// holds (xi outer, tau inner), both axes in FFT order with the time-grid
// origin phase absorbed into the transform.
struct SpaceTimeField {
    FrequencyGrid xgrid;
    TimeGrid tgrid;
    Rep rep = Rep::physical;
    std::vector<cplx> data;

    SpaceTimeField() = default;
    SpaceTimeField(const FrequencyGrid& xg, const TimeGrid& tg, Rep r = Rep::physical)
        : xgrid(xg), tgrid(tg), rep(r), data(static_cast<size_t>(xg.n) * tg.n_t, cplx{0.0, 0.0}) {}

    int nx() const { return xgrid.n; }
    int nt() const { return tgrid.n_t; }
    cplx& at(int ix, int it) { return data[static_cast<size_t>(ix) * nt() + it]; }
    const cplx& at(int ix, int it) const { return data[static_cast<size_t>(ix) * nt() + it]; }
};

namespace detail {

// In-place t-direction DFT of every x-row. sign -1: physical t -> tau,
// applying dt and the origin phase e^{+i tau T}; sign +1 undoes it.
inline void time_transform(SpaceTimeField& f, int sign) {
    const int n = f.nx(), m = f.nt();
    const double T = f.tgrid.half_width;
    std::vector<cplx> phase(m);
    for (int i = 0; i < m; ++i) {
        double ph = f.tgrid.tau_at(i) * T;
        phase[i] = cplx{std::cos(ph), std::sin(ph)};
    }
    const double scale_fwd = f.tgrid.dt();
    const double scale_bwd = 1.0 / (f.tgrid.dt() * m);
    for (int ix = 0; ix < n; ++ix) {
        cplx* row = &f.data[static_cast<size_t>(ix) * m];
        if (sign < 0) {
            dft(row, row, m, -1);
            for (int i = 0; i < m; ++i) row[i] *= phase[i] * scale_fwd;
        } else {
            for (int i = 0; i < m; ++i) row[i] *= std::conj(phase[i]);
            dft(row, row, m, +1);
            for (int i = 0; i < m; ++i) row[i] *= scale_bwd;
        }
    }
}

// In-place x-direction DFT of every t-column (strided gather/scatter).
inline void space_transform(SpaceTimeField& f, int sign) {
    const int n = f.nx(), m = f.nt();
    const double dx = f.xgrid.dx();
    std::vector<cplx> col(n);
    for (int it = 0; it < m; ++it) {
        for (int ix = 0; ix < n; ++ix) col[ix] = f.at(ix, it);
        if (sign < 0) {
            dft(col.data(), col.data(), n, -1);
            for (int ix = 0; ix < n; ++ix) {
                double s = (f.xgrid.mode_of(ix) % 2 == 0) ? dx : -dx;
                f.at(ix, it) = col[ix] * s;
            }
        } else {
            for (int ix = 0; ix < n; ++ix) {
                double s = (f.xgrid.mode_of(ix) % 2 == 0) ? 1.0 : -1.0;
                col[ix] *= s;
            }
            dft(col.data(), col.data(), n, +1);
            const double inv = 1.0 / f.xgrid.period;
            for (int ix = 0; ix < n; ++ix) f.at(ix, it) = col[ix] * inv;
        }
    }
}

} // namespace detail

inline void zero_nyquist_rows(SpaceTimeField& f) {
    if (f.nx() % 2 == 0) {
        int iy = f.xgrid.nyquist_index();
        for (int it = 0; it < f.nt(); ++it) f.at(iy, it) = cplx{0.0, 0.0};
    }
}

inline SpaceTimeField to_frequency(const SpaceTimeField& u) {
    if (u.rep == Rep::frequency) return u;
    SpaceTimeField f = u;
    detail::time_transform(f, -1);
    detail::space_transform(f, -1);
    zero_nyquist_rows(f);
    f.rep = Rep::frequency;
    return f;
}

inline SpaceTimeField to_physical(const SpaceTimeField& f) {
    if (f.rep == Rep::physical) return f;
    SpaceTimeField u = f;
    detail::space_transform(u, +1);
    detail::time_transform(u, +1);
    u.rep = Rep::physical;
    return u;
}

inline double l2_physical(const SpaceTimeField& u) {
    if (u.rep != Rep::physical) throw std::logic_error("l2_physical: needs physical representation");
    double s = 0.0;
    for (const auto& v : u.data) s += std::norm(v);
    return std::sqrt(s * u.xgrid.dx() * u.tgrid.dt());
}

// Plain L2(dxi dtau) mass of a frequency-representation field.
inline double l2_frequency(const SpaceTimeField& f) {
    if (f.rep != Rep::frequency) throw std::logic_error("l2_frequency: needs frequency representation");
    double s = 0.0;
    for (const auto& v : f.data) s += std::norm(v);
    return std::sqrt(s * f.xgrid.dxi() * f.tgrid.dtau());
}

} // namespace bolab
