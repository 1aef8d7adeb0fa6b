#pragma once

#include <cmath>
#include <stdexcept>

namespace bolab {

namespace detail {

// Logistic helpers for the C^infinity transition
// fall(r) = sigma(1/r - 1/(1-r)) on (0,1): equals 1 at r<=0 and 0 at r>=1.
// All derivatives vanish at both ends; fall(r) + fall(1-r) == 1 exactly.
inline double logistic(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

struct Transition {
    double value, d1, d2; // with respect to r
};

inline Transition transition_fall(double r) {
    if (r <= 0.0) return {1.0, 0.0, 0.0};
    if (r >= 1.0) return {0.0, 0.0, 0.0};
    double g = 1.0 / r - 1.0 / (1.0 - r);
    double gp = -1.0 / (r * r) - 1.0 / ((1.0 - r) * (1.0 - r));
    double gpp = 2.0 / (r * r * r) - 2.0 / ((1.0 - r) * (1.0 - r) * (1.0 - r));
    double s = logistic(g);
    double sp = s * (1.0 - s);
    double spp = sp * (1.0 - 2.0 * s);
    return {s, sp * gp, spp * gp * gp + sp * gpp};
}

} // namespace detail

// Even C^infinity bump: 1 on [-plateau, plateau], 0 outside (-support, support),
// monotone logistic-of-reciprocals transition in between.
struct SmoothBump {
    double plateau;
    double support;

    double operator()(double x) const {
        double a = std::fabs(x);
        if (a <= plateau) return 1.0;
        if (a >= support) return 0.0;
        return detail::transition_fall((a - plateau) / (support - plateau)).value;
    }
    double d1(double x) const {
        double a = std::fabs(x);
        if (a <= plateau || a >= support) return 0.0;
        double w = support - plateau;
        double d = detail::transition_fall((a - plateau) / w).d1 / w;
        return x < 0.0 ? -d : d;
    }
    double d2(double x) const {
        double a = std::fabs(x);
        if (a <= plateau || a >= support) return 0.0;
        double w = support - plateau;
        return detail::transition_fall((a - plateau) / w).d2 / (w * w);
    }
};

// Base frequency cutoff: plateau 5/4, support 8/5.
inline const SmoothBump& eta0_bump() {
    static const SmoothBump b{1.25, 1.6};
    return b;
}

inline double eta0(double xi) { return eta0_bump()(xi); }

// Time cutoff / profile bump with the same plateau and support as eta0.
inline double psi(double x) { return eta0_bump()(x); }
inline double psi_d1(double x) { return eta0_bump().d1(x); }
inline double psi_d2(double x) { return eta0_bump().d2(x); }

// chi_l(xi) = eta0(xi/2^l) - eta0(xi/2^{l-1}); supported on |xi| in
// [(5/8)2^l, (8/5)2^l], equal to 1 on [(8/5)2^{l-1}, (5/4)2^l].
inline double chi(int l, double xi) {
    double s = std::exp2(static_cast<double>(-l));
    return eta0(xi * s) - eta0(xi * s * 2.0);
}

// eta_l: chi_l for l >= 1, eta0 for l = 0, zero for l < 0.
inline double eta(int l, double xi) {
    if (l < 0) return 0.0;
    if (l == 0) return eta0(xi);
    return chi(l, xi);
}

inline double eta_range(int l1, int l2, double xi) {
    double s = 0.0;
    for (int l = l1; l <= l2; ++l) s += eta(l, xi);
    return s;
}

// sum_{l <= l_max} eta_l telescopes to eta0(xi / 2^{l_max}) for l_max >= 0.
inline double eta_leq(int l_max, double xi) {
    if (l_max < 0) throw std::domain_error("eta_leq: level must be >= 0");
    return eta0(xi * std::exp2(static_cast<double>(-l_max)));
}

// Monotone C^infinity step: 0 for r <= 0, 1 for r >= 1.
inline double smooth_step(double r) { return detail::transition_fall(1.0 - r).value; }

} // namespace bolab
