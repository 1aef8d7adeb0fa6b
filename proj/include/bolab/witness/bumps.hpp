#pragma once

#include <cmath>
#include <stdexcept>

#include "bolab/core/rng.hpp"
#include "bolab/dyadic/shells.hpp"
#include "bolab/witness/patch.hpp"

namespace bolab {

enum class PhaseMode { none, per_column, per_cell };

namespace detail {

inline cplx unit_phase(DetRng& rng) {
    double th = rng.uniform(0.0, 2.0 * pi);
    return cplx{std::cos(th), std::sin(th)};
}

} // namespace detail

// Gaussian bump supported exactly in D_{k,j}: amplitude
// exp(-((xi-c)/wx)^2) * exp(-((mu-mc)/ws)^2) hard-masked to xi in I_k and mu
// in the j-th modulation interval, where mu = tau - omega(xi) for k >= 1 and
// mu = tau for k <= 0. Centers and widths are randomized; sign picks the xi
// half-line. Column count is capped so high shells stay narrow needles.
inline FreqPatch dkj_bump(int k, int j, int sign, double dxi, double dtau, DetRng& rng,
                          PhaseMode phases = PhaseMode::per_column, int max_cols = 64) {
    if (j < 0) throw std::domain_error("dkj_bump: j must be >= 0");
    const double scale = std::exp2(static_cast<double>(k));
    const double xc = sign * scale * rng.uniform(0.9, 1.25);
    double xh = std::min(0.12 * scale, 0.5 * max_cols * dxi);
    xh = std::max(xh, 2.5 * dxi);
    const double wx = 0.5 * xh;

    double mlo, mhi, mc, ws;
    if (j == 0) {
        mc = rng.uniform(-1.0, 1.0);
        ws = 0.6;
        mlo = -2.0;
        mhi = 2.0;
    } else {
        double bj = std::exp2(static_cast<double>(j));
        double msign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        mc = msign * bj * rng.uniform(1.0, 1.6);
        ws = 0.2 * bj;
        mlo = msign > 0 ? 0.5 * bj : -2.0 * bj;
        mhi = msign > 0 ? 2.0 * bj : -0.5 * bj;
    }

    FreqPatch p;
    p.dxi = dxi;
    p.dtau = dtau;
    p.x0 = static_cast<long long>(std::ceil((xc - xh) / dxi));
    long long xend = static_cast<long long>(std::floor((xc + xh) / dxi));
    if (xend < p.x0) xend = p.x0;
    p.cols.resize(static_cast<size_t>(xend - p.x0 + 1));
    MuEval mu(p);
    for (int i = 0; i < p.ncols(); ++i) {
        double xi = p.xi_of(i);
        if (!in_shell(k, xi)) continue;
        double base = (k >= 1) ? omega(xi) : 0.0;
        long long nlo = static_cast<long long>(std::ceil((base + mlo) / dtau));
        long long nhi = static_cast<long long>(std::floor((base + mhi) / dtau));
        if (nhi < nlo) continue;
        p.cols[i].runs.resize(1);
        PatchRun& run = p.cols[i].runs[0];
        run.t0 = nlo;
        run.v.assign(static_cast<size_t>(nhi - nlo + 1), cplx{0.0, 0.0});
        cplx col_phase = phases == PhaseMode::per_column ? detail::unit_phase(rng) : cplx{1.0, 0.0};
        double ax = std::exp(-std::pow((xi - xc) / wx, 2.0));
        for (long long n = nlo; n <= nhi; ++n) {
            double m = (k >= 1) ? mu(p.x0 + i, n) : p.tau_of(n);
            if (!in_mod_interval(j, m)) continue;
            double amp = ax * std::exp(-std::pow((m - mc) / ws, 2.0));
            cplx ph = phases == PhaseMode::per_cell ? detail::unit_phase(rng) : col_phase;
            run.v[static_cast<size_t>(n - nlo)] = amp * ph;
        }
    }
    return p;
}

// Shell bump together with its analytically weighted copy. The field is
// a(xi) b(mu) with a, b Gaussians and the modulation profile truncated at
// |mu - mc| where it has decayed to ~1e-4; (I - d^2/dtau^2) f is tabulated
// from the closed form b - b'' of the same profile, so the pair stays
// consistent to the truncation level. Phases are constant per column, which
// keeps the tau-profile smooth.
struct BumpPair {
    FreqPatch f;
    FreqPatch weighted;
};

inline BumpPair shell_band_bump_at(int k, double xi_center, double xi_halfwidth, double dxi,
                                   double dtau, double mu_center, double mu_halfwidth,
                                   DetRng& rng) {
    if (k < 1) throw std::domain_error("shell_band_bump: k must be >= 1");
    if (mu_halfwidth <= 0.0) throw std::domain_error("shell_band_bump: mu halfwidth must be positive");
    const double xc = xi_center;
    const double xh = std::max(xi_halfwidth, 2.5 * dxi);
    const double wx = 0.5 * xh;
    const double ws = mu_halfwidth / 3.0;
    const double mc = mu_center + rng.uniform(-0.25, 0.25) * mu_halfwidth;

    BumpPair out;
    FreqPatch& p = out.f;
    p.dxi = dxi;
    p.dtau = dtau;
    p.x0 = static_cast<long long>(std::ceil((xc - xh) / dxi));
    long long xend = static_cast<long long>(std::floor((xc + xh) / dxi));
    if (xend < p.x0) xend = p.x0;
    p.cols.resize(static_cast<size_t>(xend - p.x0 + 1));
    out.weighted = p;
    MuEval mu(p);
    for (int i = 0; i < p.ncols(); ++i) {
        double xi = p.xi_of(i);
        if (!in_shell(k, xi)) continue;
        double base = omega(xi);
        long long nlo = static_cast<long long>(std::ceil((base + mc - mu_halfwidth) / dtau));
        long long nhi = static_cast<long long>(std::floor((base + mc + mu_halfwidth) / dtau));
        if (nhi < nlo) continue;
        p.cols[i].runs.resize(1);
        out.weighted.cols[i].runs.resize(1);
        PatchRun& run = p.cols[i].runs[0];
        PatchRun& wrun = out.weighted.cols[i].runs[0];
        run.t0 = wrun.t0 = nlo;
        run.v.assign(static_cast<size_t>(nhi - nlo + 1), cplx{0.0, 0.0});
        wrun.v = run.v;
        cplx ph = detail::unit_phase(rng);
        double ax = std::exp(-std::pow((xi - xc) / wx, 2.0));
        for (long long n = nlo; n <= nhi; ++n) {
            double s = mu(p.x0 + i, n) - mc;
            double b = std::exp(-(s / ws) * (s / ws));
            double wfac = 1.0 + 2.0 / (ws * ws) - 4.0 * s * s / (ws * ws * ws * ws);
            run.v[static_cast<size_t>(n - nlo)] = ax * b * ph;
            wrun.v[static_cast<size_t>(n - nlo)] = ax * b * wfac * ph;
        }
    }
    return out;
}

// Randomized-center variant; sign picks the xi half-line.
inline BumpPair shell_band_bump(int k, int sign, double dxi, double dtau, double mu_halfwidth,
                                DetRng& rng, int max_cols = 48) {
    if (k < 1) throw std::domain_error("shell_band_bump: k must be >= 1");
    const double scale = std::exp2(static_cast<double>(k));
    const double xc = sign * scale * rng.uniform(0.9, 1.3);
    const double xh = std::min(0.12 * scale, 0.5 * max_cols * dxi);
    return shell_band_bump_at(k, xc, xh, dxi, dtau, 0.0, mu_halfwidth, rng);
}

// Low-frequency bump with support |xi| <= 1.3, |tau| <= 6: a valid input for
// the low splitting norm.
inline FreqPatch low_bump(double dxi, double dtau, DetRng& rng,
                          PhaseMode phases = PhaseMode::per_column) {
    const double xc = rng.uniform(-0.6, 0.6);
    const double xh = 0.7;
    const double wx = 0.35;
    const double tc = rng.uniform(-1.5, 1.5);
    const double ws = 1.2;

    FreqPatch p;
    p.dxi = dxi;
    p.dtau = dtau;
    p.x0 = static_cast<long long>(std::ceil((xc - xh) / dxi));
    long long xend = static_cast<long long>(std::floor((xc + xh) / dxi));
    p.cols.resize(static_cast<size_t>(xend - p.x0 + 1));
    long long nlo = static_cast<long long>(std::ceil(-6.0 / dtau));
    long long nhi = static_cast<long long>(std::floor(6.0 / dtau));
    for (int i = 0; i < p.ncols(); ++i) {
        double xi = p.xi_of(i);
        p.cols[i].runs.resize(1);
        PatchRun& run = p.cols[i].runs[0];
        run.t0 = nlo;
        run.v.assign(static_cast<size_t>(nhi - nlo + 1), cplx{0.0, 0.0});
        cplx col_phase = phases == PhaseMode::per_column ? detail::unit_phase(rng) : cplx{1.0, 0.0};
        double ax = std::exp(-std::pow((xi - xc) / wx, 2.0));
        for (long long n = nlo; n <= nhi; ++n) {
            double tau = p.tau_of(n);
            double amp = ax * std::exp(-std::pow((tau - tc) / ws, 2.0));
            cplx ph = phases == PhaseMode::per_cell ? detail::unit_phase(rng) : col_phase;
            run.v[static_cast<size_t>(n - nlo)] = amp * ph;
        }
    }
    return p;
}

} // namespace bolab
