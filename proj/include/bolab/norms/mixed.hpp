#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bolab/core/spacetime_field.hpp"

namespace bolab {

enum class MixedKind { l1x_l2t, l2x_linft, linfx_l2t, l2xt };

// Mixed space-time Lebesgue norms of a physical-representation field,
// inner exponent in t, outer in x, lattice measures dx and dt.
inline double mixed_norm(const SpaceTimeField& u, MixedKind kind) {
    if (u.rep != Rep::physical) throw std::logic_error("mixed_norm: needs physical representation");
    const int n = u.nx(), m = u.nt();
    const double dx = u.xgrid.dx(), dt = u.tgrid.dt();
    switch (kind) {
        case MixedKind::l1x_l2t: {
            double acc = 0.0;
            for (int ix = 0; ix < n; ++ix) {
                double s = 0.0;
                for (int it = 0; it < m; ++it) s += std::norm(u.at(ix, it));
                acc += std::sqrt(s * dt);
            }
            return acc * dx;
        }
        case MixedKind::l2x_linft: {
            double acc = 0.0;
            for (int ix = 0; ix < n; ++ix) {
                double peak = 0.0;
                for (int it = 0; it < m; ++it) peak = std::max(peak, std::abs(u.at(ix, it)));
                acc += peak * peak;
            }
            return std::sqrt(acc * dx);
        }
        case MixedKind::linfx_l2t: {
            double peak = 0.0;
            for (int ix = 0; ix < n; ++ix) {
                double s = 0.0;
                for (int it = 0; it < m; ++it) s += std::norm(u.at(ix, it));
                peak = std::max(peak, std::sqrt(s * dt));
            }
            return peak;
        }
        case MixedKind::l2xt:
            return l2_physical(u);
    }
    throw std::logic_error("mixed_norm: unknown kind");
}

} // namespace bolab
