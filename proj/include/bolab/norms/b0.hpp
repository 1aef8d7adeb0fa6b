#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolab/core/spectral_field.hpp"
#include "bolab/dyadic/cutoffs.hpp"
#include "bolab/norms/split.hpp"

namespace bolab {

namespace detail {

inline void check_low_support_1d(const SpectralField& f, const char* who) {
    double outside = 0.0, total = 0.0;
    for (int i = 0; i < f.grid.n; ++i) {
        double m = std::norm(f.coef[i]);
        total += m;
        if (std::fabs(f.grid.xi_at(i)) > 2.0) outside += m;
    }
    if (total > 0.0 && outside > support_tolerance * support_tolerance * total)
        throw std::domain_error(std::string(who) + ": spectrum has mass outside [-2, 2]");
}

inline double b0_l1_value(const FrequencyGrid& g, const std::vector<cplx>& coef) {
    std::vector<cplx> s = inverse_transform(SpectralField(g, coef));
    double v = 0.0;
    for (const auto& z : s) v += std::abs(z);
    return v * g.dx();
}

inline std::vector<cplx> b0_l1_subgrad(const FrequencyGrid& g, const std::vector<cplx>& coef) {
    std::vector<cplx> s = inverse_transform(SpectralField(g, coef));
    for (auto& z : s) {
        double a = std::abs(z);
        z = (a > 0.0) ? z / a : cplx(0.0, 0.0);
    }
    return forward_transform(g, s).coef;
}

struct B0L2Masses {
    std::vector<double> m2; // [k' - kp_min]
    int kp_min = 0;
    double dc2 = 0.0, tail2 = 0.0;
};

inline B0L2Masses b0_l2_masses(const FrequencyGrid& g, const std::vector<cplx>& coef, int kp_min) {
    B0L2Masses out;
    out.kp_min = kp_min;
    out.m2.assign(1 - kp_min + 1, 0.0);
    for (int i = 0; i < g.n; ++i) {
        double xi = g.xi_at(i);
        double a2 = std::norm(coef[i]);
        if (a2 == 0.0) continue;
        if (xi == 0.0) {
            out.dc2 += a2;
            continue;
        }
        int kb = static_cast<int>(std::floor(std::log2(std::fabs(xi))));
        for (int kp = kb; kp <= kb + 1; ++kp) {
            if (kp > 1) continue;
            double c = chi(kp, xi);
            if (c == 0.0) continue;
            if (kp < kp_min)
                out.tail2 += c * c * a2;
            else
                out.m2[kp - kp_min] += c * c * a2;
        }
    }
    return out;
}

inline double b0_l2_value(const FrequencyGrid& g, const std::vector<cplx>& coef, int kp_min) {
    B0L2Masses m = b0_l2_masses(g, coef, kp_min);
    double v = 0.0;
    for (size_t p = 0; p < m.m2.size(); ++p)
        if (m.m2[p] > 0.0) v += std::exp2(-0.5 * (static_cast<double>(p) + kp_min)) * std::sqrt(m.m2[p] * g.dxi());
    return v;
}

inline std::vector<cplx> b0_l2_subgrad(const FrequencyGrid& g, const std::vector<cplx>& coef, int kp_min) {
    B0L2Masses m = b0_l2_masses(g, coef, kp_min);
    std::vector<cplx> d(coef.size(), cplx(0.0, 0.0));
    for (int i = 0; i < g.n; ++i) {
        double xi = g.xi_at(i);
        if (xi == 0.0 || coef[i] == cplx(0.0, 0.0)) continue;
        int kb = static_cast<int>(std::floor(std::log2(std::fabs(xi))));
        double s = 0.0;
        for (int kp = kb; kp <= kb + 1; ++kp) {
            if (kp > 1 || kp < kp_min) continue;
            double c = chi(kp, xi);
            double mass2 = m.m2[kp - kp_min];
            if (c == 0.0 || mass2 == 0.0) continue;
            s += std::exp2(-0.5 * kp) * c * c * g.dxi() / std::sqrt(mass2 * g.dxi());
        }
        d[i] = s * coef[i];
    }
    return d;
}

} // namespace detail

struct B0Result {
    NormReport report;
    SpectralField l1_part, l2_part;
};

// B_0 norm of a low-frequency spectrum: the splitting infimum
//   inf_{f = g + h} ( ||inverse transform g||_{L1_x}
//                     + sum_{k' <= 1} 2^{-k'/2} ||chi_{k'} h||_{L2} ),
// evaluated as an upper bound by projected subgradient descent with the two
// trivial splittings as baselines. The xi = 0 cell is invisible to every
// chi_{k'}; whatever ends up there in the L2 part is reported, not counted.
inline B0Result b0_norm_full(const SpectralField& f, const NormOptions& opts = {},
                             const std::vector<cplx>* init_l1_part = nullptr) {
    detail::check_low_support_1d(f, "b0_norm");
    const FrequencyGrid& g = f.grid;
    SplitObjective obj;
    obj.a_value = [&](const std::vector<cplx>& v) { return detail::b0_l1_value(g, v); };
    obj.b_value = [&](const std::vector<cplx>& v) { return detail::b0_l2_value(g, v, opts.kp_min); };
    obj.a_subgrad = [&](const std::vector<cplx>& v) { return detail::b0_l1_subgrad(g, v); };
    obj.b_subgrad = [&](const std::vector<cplx>& v) { return detail::b0_l2_subgrad(g, v, opts.kp_min); };

    SplitResult sr = split_minimize(f.coef, obj, opts, init_l1_part);
    B0Result out;
    out.report.name = "b_0";
    out.report.value = sr.info.achieved;
    out.report.opt = sr.info;
    double a = obj.a_value(sr.g), b = obj.b_value(sr.h);
    out.report.terms.push_back({"l1_part", 1.0, a, a});
    out.report.terms.push_back({"l2_part", 1.0, b, b});
    detail::B0L2Masses m = detail::b0_l2_masses(g, sr.h, opts.kp_min);
    out.report.dropped_dc_mass = std::sqrt(m.dc2 * g.dxi());
    out.report.tail_mass = std::sqrt(m.tail2 * g.dxi());
    out.l1_part = SpectralField(g, std::move(sr.g));
    out.l2_part = SpectralField(g, std::move(sr.h));
    return out;
}

inline NormReport b0_norm(const SpectralField& f, const NormOptions& opts = {}) {
    return b0_norm_full(f, opts).report;
}

} // namespace bolab
