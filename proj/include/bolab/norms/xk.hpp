#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolab/core/spacetime_field.hpp"
#include "bolab/dyadic/cutoffs.hpp"
#include "bolab/dyadic/shells.hpp"
#include "bolab/norms/report.hpp"

namespace bolab {

namespace detail {

// Indices j with eta_j(mu) possibly nonzero: the bin index and its successor
// (the smooth cutoffs overlap adjacent dyadic levels only).
inline void mod_level_candidates(double mu, int out[2]) {
    int jb = mod_bin_of(mu);
    out[0] = jb;
    out[1] = jb + 1;
}

inline void check_shell_support(const SpaceTimeField& f, int k, const char* who) {
    double outside = 0.0, total = 0.0;
    for (int ix = 0; ix < f.nx(); ++ix) {
        double xi = f.xgrid.xi_at(ix);
        bool ok = (k >= 1) ? in_shell(k, xi) : std::fabs(xi) <= 2.0;
        for (int it = 0; it < f.nt(); ++it) {
            double m = std::norm(f.at(ix, it));
            total += m;
            if (!ok) outside += m;
        }
    }
    if (total > 0.0 && outside > support_tolerance * support_tolerance * total)
        throw std::domain_error(std::string(who) + ": field has mass outside the level-" + std::to_string(k) +
                                " frequency shell (relative " + std::to_string(std::sqrt(outside / total)) + ")");
}

} // namespace detail

// Per-level modulation masses ||eta_j(tau - omega(xi)) f||_{L2(dxi dtau)},
// accumulated in one pass over cells, for k >= 1.
inline std::vector<double> xk_band_masses(const SpaceTimeField& f) {
    if (f.rep != Rep::frequency) throw std::logic_error("xk: needs frequency representation");
    std::vector<double> m2;
    for (int ix = 0; ix < f.nx(); ++ix) {
        double w0 = omega(f.xgrid.xi_at(ix));
        for (int it = 0; it < f.nt(); ++it) {
            double a2 = std::norm(f.at(ix, it));
            if (a2 == 0.0) continue;
            double mu = f.tgrid.tau_at(it) - w0;
            int cand[2];
            detail::mod_level_candidates(mu, cand);
            for (int c = 0; c < 2; ++c) {
                double e = eta(cand[c], mu);
                if (e == 0.0) continue;
                if (static_cast<int>(m2.size()) <= cand[c]) m2.resize(cand[c] + 1, 0.0);
                m2[cand[c]] += e * e * a2;
            }
        }
    }
    const double cell = f.xgrid.dxi() * f.tgrid.dtau();
    std::vector<double> m(m2.size());
    for (size_t j = 0; j < m2.size(); ++j) m[j] = std::sqrt(m2[j] * cell);
    return m;
}

namespace detail {

inline double xk_value_high(const SpaceTimeField& f, int k) {
    auto masses = xk_band_masses(f);
    double v = 0.0;
    for (size_t j = 0; j < masses.size(); ++j)
        v += std::exp2(0.5 * static_cast<double>(j)) * beta_weight(k, static_cast<int>(j)) * masses[j];
    return v;
}

// Ascent direction of the k >= 1 norm at f (diagonal in frequency space).
inline std::vector<cplx> xk_subgrad_high(const SpaceTimeField& f, int k) {
    auto masses = xk_band_masses(f);
    const double cell = f.xgrid.dxi() * f.tgrid.dtau();
    std::vector<cplx> d(f.data.size(), cplx(0.0, 0.0));
    for (int ix = 0; ix < f.nx(); ++ix) {
        double w0 = omega(f.xgrid.xi_at(ix));
        for (int it = 0; it < f.nt(); ++it) {
            const cplx& c = f.at(ix, it);
            if (c == cplx(0.0, 0.0)) continue;
            double mu = f.tgrid.tau_at(it) - w0;
            int cand[2];
            mod_level_candidates(mu, cand);
            double s = 0.0;
            for (int cc = 0; cc < 2; ++cc) {
                int j = cand[cc];
                if (j >= static_cast<int>(masses.size()) || masses[j] == 0.0) continue;
                double e = eta(j, mu);
                if (e == 0.0) continue;
                double w = std::exp2(0.5 * j) * beta_weight(k, j);
                s += w * e * e * cell / masses[j];
            }
            d[ix * f.nt() + it] = s * c;
        }
    }
    return d;
}

// Accumulated masses for the k = 0 norm: squared band masses indexed by
// (modulation level j, spatial level k'), plus the annihilated xi = 0 mass
// and the mass falling below the k' truncation.
struct X0Masses {
    std::vector<std::vector<double>> m2; // [j][k' - kp_min]
    int kp_min = 0;
    double dc2 = 0.0, tail2 = 0.0, cell = 0.0;
};

inline X0Masses x0_masses(const SpaceTimeField& f, int kp_min) {
    if (f.rep != Rep::frequency) throw std::logic_error("xk: needs frequency representation");
    X0Masses out;
    out.kp_min = kp_min;
    out.cell = f.xgrid.dxi() * f.tgrid.dtau();
    const int kp_n = 1 - kp_min + 1;
    for (int ix = 0; ix < f.nx(); ++ix) {
        double xi = f.xgrid.xi_at(ix);
        if (xi == 0.0) {
            for (int it = 0; it < f.nt(); ++it) out.dc2 += std::norm(f.at(ix, it));
            continue;
        }
        int kb = static_cast<int>(std::floor(std::log2(std::fabs(xi))));
        for (int it = 0; it < f.nt(); ++it) {
            double a2 = std::norm(f.at(ix, it));
            if (a2 == 0.0) continue;
            double tau = f.tgrid.tau_at(it);
            int cand[2];
            mod_level_candidates(tau, cand);
            for (int kp = kb; kp <= kb + 1; ++kp) {
                if (kp > 1) continue;
                double c = chi(kp, xi);
                if (c == 0.0) continue;
                if (kp < kp_min) {
                    out.tail2 += c * c * a2;
                    continue;
                }
                for (int cc = 0; cc < 2; ++cc) {
                    double e = eta(cand[cc], tau);
                    if (e == 0.0) continue;
                    if (static_cast<int>(out.m2.size()) <= cand[cc])
                        out.m2.resize(cand[cc] + 1, std::vector<double>(kp_n, 0.0));
                    out.m2[cand[cc]][kp - kp_min] += e * e * c * c * a2;
                }
            }
        }
    }
    return out;
}

inline double x0_weight(int j, int kp) { return std::exp2(static_cast<double>(j) - 0.5 * kp); }

inline double x0_value(const SpaceTimeField& f, int kp_min) {
    X0Masses m = x0_masses(f, kp_min);
    double v = 0.0;
    for (size_t j = 0; j < m.m2.size(); ++j)
        for (size_t p = 0; p < m.m2[j].size(); ++p)
            if (m.m2[j][p] > 0.0) v += x0_weight(static_cast<int>(j), static_cast<int>(p) + kp_min) * std::sqrt(m.m2[j][p] * m.cell);
    return v;
}

inline std::vector<cplx> x0_subgrad(const SpaceTimeField& f, int kp_min) {
    X0Masses m = x0_masses(f, kp_min);
    std::vector<cplx> d(f.data.size(), cplx(0.0, 0.0));
    for (int ix = 0; ix < f.nx(); ++ix) {
        double xi = f.xgrid.xi_at(ix);
        if (xi == 0.0) continue;
        int kb = static_cast<int>(std::floor(std::log2(std::fabs(xi))));
        for (int it = 0; it < f.nt(); ++it) {
            const cplx& c = f.at(ix, it);
            if (c == cplx(0.0, 0.0)) continue;
            double tau = f.tgrid.tau_at(it);
            int cand[2];
            mod_level_candidates(tau, cand);
            double s = 0.0;
            for (int kp = kb; kp <= kb + 1; ++kp) {
                if (kp > 1 || kp < kp_min) continue;
                double x = chi(kp, xi);
                if (x == 0.0) continue;
                for (int cc = 0; cc < 2; ++cc) {
                    int j = cand[cc];
                    if (j >= static_cast<int>(m.m2.size())) continue;
                    double mass2 = m.m2[j][kp - kp_min];
                    if (mass2 == 0.0) continue;
                    double e = eta(j, tau);
                    if (e == 0.0) continue;
                    s += x0_weight(j, kp) * e * e * x * x * m.cell / std::sqrt(mass2 * m.cell);
                }
            }
            d[ix * f.nt() + it] = s * c;
        }
    }
    return d;
}

} // namespace detail

// X_k norm for k >= 1: sum_j 2^{j/2} beta_{k,j} ||eta_j(tau - omega(xi)) f||.
// Preconditions: frequency representation, support inside the k-th shell.
inline NormReport xk_norm_high(const SpaceTimeField& f, int k, bool check_support = true) {
    if (k < 1) throw std::domain_error("xk_norm_high: k must be >= 1");
    if (check_support) detail::check_shell_support(f, k, "xk_norm");
    NormReport rep;
    rep.name = "x_" + std::to_string(k);
    auto masses = xk_band_masses(f);
    for (size_t j = 0; j < masses.size(); ++j) {
        if (masses[j] == 0.0) continue;
        double w = std::exp2(0.5 * static_cast<double>(j)) * beta_weight(k, static_cast<int>(j));
        rep.terms.push_back({"j=" + std::to_string(j), w, masses[j], w * masses[j]});
        rep.value += w * masses[j];
    }
    rep.truncation_level = static_cast<int>(masses.size()) - 1;
    return rep;
}

// X_0 norm: sum_j sum_{k' <= 1} 2^{j - k'/2} ||eta_j(tau) chi_{k'}(xi) f||.
// The xi = 0 column is annihilated by every chi_{k'}; its mass is reported.
inline NormReport xk_norm_zero(const SpaceTimeField& f, const NormOptions& opts = {}, bool check_support = true) {
    if (check_support) detail::check_shell_support(f, 0, "xk_norm");
    detail::X0Masses m = detail::x0_masses(f, opts.kp_min);
    NormReport rep;
    rep.name = "x_0";
    for (size_t j = 0; j < m.m2.size(); ++j)
        for (size_t p = 0; p < m.m2[j].size(); ++p) {
            if (m.m2[j][p] == 0.0) continue;
            double mass = std::sqrt(m.m2[j][p] * m.cell);
            int kp = static_cast<int>(p) + opts.kp_min;
            double w = detail::x0_weight(static_cast<int>(j), kp);
            rep.terms.push_back({"j=" + std::to_string(j) + ",k'=" + std::to_string(kp), w, mass, w * mass});
            rep.value += w * mass;
        }
    rep.truncation_level = static_cast<int>(m.m2.size()) - 1;
    rep.dropped_dc_mass = std::sqrt(m.dc2 * m.cell);
    rep.tail_mass = std::sqrt(m.tail2 * m.cell);
    return rep;
}

inline NormReport xk_norm(const SpaceTimeField& f, int k, const NormOptions& opts = {}) {
    if (k < 0) throw std::domain_error("xk_norm: k must be >= 0");
    return k == 0 ? xk_norm_zero(f, opts) : xk_norm_high(f, k);
}

} // namespace bolab
