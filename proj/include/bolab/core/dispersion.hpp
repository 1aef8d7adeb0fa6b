#pragma once

#include <algorithm>
#include <cmath>

namespace bolab {

// Dispersion symbol of the linearized equation: omega(xi) = -xi*|xi|.
inline double omega(double xi) { return -xi * std::fabs(xi); }

// |omega(a+b) - omega(a) - omega(b)| equals 2*min*med of (|a|, |b|, |a+b|)
// for all real a, b. dispersive_gap returns the absolute defect between the
// two sides; it should vanish up to rounding.
inline double dispersive_gap(double xi1, double xi2) {
    double lhs = std::fabs(omega(xi1 + xi2) - omega(xi1) - omega(xi2));
    double m[3] = {std::fabs(xi1), std::fabs(xi2), std::fabs(xi1 + xi2)};
    std::sort(m, m + 3);
    return std::fabs(lhs - 2.0 * m[0] * m[1]);
}

} // namespace bolab
