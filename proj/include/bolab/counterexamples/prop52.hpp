#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolab/core/dispersion.hpp"
#include "bolab/counterexamples/report.hpp"
#include "bolab/dyadic/cutoffs.hpp"
#include "bolab/dyadic/shells.hpp"
#include "bolab/witness/bilinear.hpp"
#include "bolab/witness/patch.hpp"

namespace bolab {

// sigma-weighted single-shell norm: 2^{sigma * shell} times the X norm of a
// patch supported in one frequency shell.
inline double fsigma_proxy_of_patch(const FreqPatch& p, int shell, double sigma) {
    return std::exp2(sigma * static_cast<double>(shell)) * xk_of_patch(p, shell);
}

// Fixed amplitudes placing the sigma = 0 norms near their nominal scales
// (about 1 for u_pm, about 2^{-k/2} beta_{1,k} for v); measured once at unit
// amplitude and pinned at the geometric center of the k = 6..16 drift. The
// v block drifts a factor 4.4 (at low k its tilted window still crosses the
// zero-modulation band), so the center keeps both ends inside a factor 2.1.
inline constexpr double prop52_u_amp = 1.013e-4;
inline constexpr double prop52_v_amp = 1.63e-3;

struct Prop52Fields {
    int k = 0;
    FreqPatch u_plus, u_minus;  // shell-k blocks riding the dispersion curve
    FreqPatch v;                // low-frequency output template on the line tau = -2^{k+1} xi
    double u_plus_norm = 0.0;   // X_k, sigma = 0 proxy
    double u_minus_norm = 0.0;
    double v_norm = 0.0;        // X_1, sigma = 0 proxy
    double v_nominal = 0.0;     // 2^{-k/2} beta_{1,k}
};

// Three blocks probing the sigma floor of the small-data theory: two shell-k
// blocks psi((xi -+ 2^k)/4) psi((tau - omega(xi))/2^10) on opposite
// half-lines, and a low-frequency block 2^{-k} eta_1(xi) 1_{xi >= 0}
// psi((tau + 2^{k+1} xi)/2^10) whose tau support rides the resonance line of
// the u_+ u_- interaction. The xi >= 0 indicator is kept sharp: only
// positive columns are built. Lattice: dxi = 2^-4, dtau = 2^5, so
// dtau/dxi^2 is whole and modulation values are exact.
inline Prop52Fields prop52_fields(int k) {
    if (k < 6)
        throw std::domain_error("prop52_fields: sweep starts at k = 6 (got k = " + std::to_string(k) + ")");
    if (k > 16)
        throw std::domain_error("prop52_fields: k = " + std::to_string(k) + " needs about 2^" +
                                std::to_string(k + 4) +
                                " xi-lattice columns at step 2^-4; capped at k = 16");
    const double dxi = 0.0625, dtau = 32.0;
    const double c = std::exp2(static_cast<double>(k));

    Prop52Fields F;
    F.k = k;
    auto make_u = [&](double sign) {
        FreqPatch p;
        p.dxi = dxi;
        p.dtau = dtau;
        double center = sign * c;
        p.x0 = static_cast<long long>(std::ceil((center - 6.4) / dxi));
        long long xend = static_cast<long long>(std::floor((center + 6.4) / dxi));
        p.cols.resize(static_cast<size_t>(xend - p.x0 + 1));
        MuEval mu(p);
        for (int i = 0; i < p.ncols(); ++i) {
            double xi = p.xi_of(i);
            double ax = prop52_u_amp * psi((xi - center) / 4.0);
            if (ax == 0.0) continue;
            long long gx = p.x0 + i;
            const double half = 1.6 * 1024.0;
            long long nlo = static_cast<long long>(std::ceil((omega(xi) - half) / dtau));
            long long nhi = static_cast<long long>(std::floor((omega(xi) + half) / dtau));
            if (nhi < nlo) continue;
            PatchRun run;
            run.t0 = nlo;
            run.v.resize(static_cast<size_t>(nhi - nlo + 1));
            for (long long n = nlo; n <= nhi; ++n)
                run.v[static_cast<size_t>(n - nlo)] = cplx{ax * psi(mu(gx, n) / 1024.0), 0.0};
            p.cols[static_cast<size_t>(i)].runs.push_back(std::move(run));
        }
        return p;
    };
    F.u_plus = make_u(1.0);
    F.u_minus = make_u(-1.0);

    F.v.dxi = dxi;
    F.v.dtau = dtau;
    F.v.x0 = static_cast<long long>(std::ceil(1.25 / dxi));
    long long vend = static_cast<long long>(std::floor(3.2 / dxi));
    F.v.cols.resize(static_cast<size_t>(vend - F.v.x0 + 1));
    const double vamp = prop52_v_amp * std::exp2(static_cast<double>(-k));
    const double half = 1.6 * 1024.0;
    for (int i = 0; i < F.v.ncols(); ++i) {
        double xi = F.v.xi_of(i);
        double g = vamp * chi(1, xi);
        if (g == 0.0) continue;
        double center = -std::exp2(static_cast<double>(k + 1)) * xi;
        long long nlo = static_cast<long long>(std::ceil((center - half) / dtau));
        long long nhi = static_cast<long long>(std::floor((center + half) / dtau));
        if (nhi < nlo) continue;
        PatchRun run;
        run.t0 = nlo;
        run.v.resize(static_cast<size_t>(nhi - nlo + 1));
        for (long long n = nlo; n <= nhi; ++n) {
            double tau = dtau * static_cast<double>(n);
            run.v[static_cast<size_t>(n - nlo)] = cplx{g * psi((tau - center) / 1024.0), 0.0};
        }
        F.v.cols[static_cast<size_t>(i)].runs.push_back(std::move(run));
    }

    F.u_plus_norm = xk_of_patch(F.u_plus, k);
    F.u_minus_norm = xk_of_patch(F.u_minus, k);
    F.v_norm = xk_of_patch(F.v, 1);
    F.v_nominal = std::exp2(-0.5 * static_cast<double>(k)) * beta_weight(1, k);
    for (double n : {F.u_plus_norm, F.u_minus_norm})
        if (n < 0.25 || n > 4.0)
            throw std::domain_error("prop52_fields: u block norm " + std::to_string(n) +
                                    " outside [1/4, 4]");
    double rv = F.v_norm / F.v_nominal;
    if (rv < 0.25 || rv > 4.0)
        throw std::domain_error("prop52_fields: v norm / (2^{-k/2} beta) = " + std::to_string(rv) +
                                " outside [1/4, 4]");
    return F;
}

struct Prop52Result {
    int k = 0;
    double low_region_min = 0.0;   // min |u_+ * u_-| on the tilted low-frequency box
    double high_region_min = 0.0;  // min |v * u_+| on the shell-k resonant box
    double resonance_max_low = 0.0;   // max |omega(x1) + omega(x - x1) + 2^{k+1} x|
    double resonance_max_high = 0.0;  // max |2^{k+1} x1 - omega(x - x1) + omega(x)|
    double beta_gap = 0.0;         // |2^{-k/2} beta_{1,k} - (2^{-k/2} + 1/2)|
    double side_product = 0.0;     // measured sigma = 0 norm product ||u_+|| ||u_-||
    double side_floor = 0.0;       // 2^{-k/2} beta_{1,k}, bounded below by 1/2
};

// Measures the two interaction outputs and the resonance identities behind
// them: u_+ * u_- concentrates on the line tau = -2^{k+1} xi at low
// frequency, v * u_+ lands back on the shell-k dispersion curve. Both region
// minima must be strictly positive; the identity remainders stay O(1)
// because the quadratic dispersion cancels to first order on the sampled
// boxes.
inline Prop52Result prop52_measure(int k) {
    Prop52Fields F = prop52_fields(k);
    const double dxi = F.v.dxi, dtau = F.v.dtau;

    Prop52Result r;
    r.k = k;
    r.side_product = F.u_plus_norm * F.u_minus_norm;
    r.side_floor = F.v_nominal;
    r.beta_gap = std::fabs(F.v_nominal - (std::exp2(-0.5 * static_cast<double>(k)) + 0.5));

    // low-frequency output: scan the plateau box xi in [1.6, 2.5],
    // |tau + 2^{k+1} xi| <= 1.25 * 2^10
    FreqPatch conv_low = convolve(F.u_plus, F.u_minus);
    {
        double mn = 0.0;
        bool any = false;
        long long mlo = static_cast<long long>(std::ceil(1.6 / dxi));
        long long mhi = static_cast<long long>(std::floor(2.5 / dxi));
        for (long long m = mlo; m <= mhi; ++m) {
            double xi = dxi * static_cast<double>(m);
            double tc = -std::exp2(static_cast<double>(k + 1)) * xi;
            long long nlo = static_cast<long long>(std::ceil((tc - 1280.0) / dtau));
            long long nhi = static_cast<long long>(std::floor((tc + 1280.0) / dtau));
            for (long long n = nlo; n <= nhi; ++n) {
                double v = std::abs(patch_value(conv_low, m, n));
                mn = any ? std::min(mn, v) : v;
                any = true;
            }
        }
        r.low_region_min = any ? mn : 0.0;
    }

    // shell-k output: scan |xi - 2^k| <= 1.25, |tau - omega(xi)| <= 2^10
    FreqPatch conv_high = convolve(F.v, F.u_plus);
    {
        MuEval mu(conv_high);
        double mn = 0.0;
        bool any = false;
        const double c = std::exp2(static_cast<double>(k));
        long long mlo = static_cast<long long>(std::ceil((c - 1.25) / dxi));
        long long mhi = static_cast<long long>(std::floor((c + 1.25) / dxi));
        for (long long m = mlo; m <= mhi; ++m) {
            double w0 = omega(dxi * static_cast<double>(m));
            long long nlo = static_cast<long long>(std::ceil((w0 - 1024.0) / dtau));
            long long nhi = static_cast<long long>(std::floor((w0 + 1024.0) / dtau));
            for (long long n = nlo; n <= nhi; ++n) {
                if (std::fabs(mu(m, n)) > 1024.0) continue;
                double v = std::abs(patch_value(conv_high, m, n));
                mn = any ? std::min(mn, v) : v;
                any = true;
            }
        }
        r.high_region_min = any ? mn : 0.0;
    }

    // resonance identities on lattice nodes: "low" samples a low output
    // frequency against a shell-k factor, "high" a low factor against a
    // shell-k factor whose sum is the output
    {
        const double c = std::exp2(static_cast<double>(k));
        const double two_k1 = std::exp2(static_cast<double>(k + 1));
        long long llo = static_cast<long long>(std::ceil(1.6 / dxi));
        long long lhi = static_cast<long long>(std::floor(2.5 / dxi));
        long long slo = static_cast<long long>(std::ceil((c - 0.5) / dxi));
        long long shi = static_cast<long long>(std::floor((c + 0.5) / dxi));
        for (long long ml = llo; ml <= lhi; ++ml) {
            double low = dxi * static_cast<double>(ml);
            for (long long ms = slo; ms <= shi; ++ms) {
                double high = dxi * static_cast<double>(ms);
                double rem1 = omega(high) + omega(low - high) + two_k1 * low;
                r.resonance_max_low = std::max(r.resonance_max_low, std::fabs(rem1));
                double rem2 = two_k1 * low - omega(high) + omega(low + high);
                r.resonance_max_high = std::max(r.resonance_max_high, std::fabs(rem2));
            }
        }
    }
    return r;
}

// Sweep report: the sigma = 0 norm product against the floor
// 2^{-k/2} beta_{1,k} = 2^{-k/2} + 1/2. The floor is bounded below by 1/2
// uniformly in k, which is what pins sigma >= 0: a negative sigma would send
// the product side to zero along the sweep while the floor stays put.
// Report assembly from precomputed per-shell measurements (rows must be in
// strictly increasing k order).
inline CounterexampleReport prop52_report_rows(const std::vector<Prop52Result>& rows) {
    CounterexampleReport rep;
    rep.name = "prop52";
    rep.trend_note =
        "norm product vs floor 2^{-k/2} + 1/2: region minima positive, identity remainders <= 10, "
        "floor >= 1/2";
    auto& low_min = rep.extra["low_region_min"];
    auto& high_min = rep.extra["high_region_min"];
    auto& res_max = rep.extra["resonance_max"];
    auto& beta_gap = rep.extra["beta_gap"];
    bool ok = !rows.empty();
    for (const Prop52Result& r : rows) {
        rep.k.push_back(r.k);
        rep.lhs.push_back(r.side_product);
        rep.rhs.push_back(r.side_floor);
        rep.ratio.push_back(r.side_floor > 0.0 ? r.side_product / r.side_floor : 0.0);
        low_min.push_back(r.low_region_min);
        high_min.push_back(r.high_region_min);
        res_max.push_back(std::max(r.resonance_max_low, r.resonance_max_high));
        beta_gap.push_back(r.beta_gap);
        ok = ok && r.low_region_min > 0.0 && r.high_region_min > 0.0 &&
             r.resonance_max_low <= 10.0 && r.resonance_max_high <= 10.0 &&
             r.beta_gap <= 1.0e-15 && r.side_floor >= 0.5;
    }
    rep.slope = detail::fit_slope(rep.k, rep.ratio);
    rep.pass = ok && rep.ratios_ok();
    return rep;
}

// Sweep report over a strictly increasing shell list.
inline CounterexampleReport prop52_report(const std::vector<int>& ks) {
    for (size_t i = 1; i < ks.size(); ++i)
        if (ks[i] <= ks[i - 1]) throw std::domain_error("prop52_report: k sweep must be strictly increasing");
    std::vector<Prop52Result> rows;
    rows.reserve(ks.size());
    for (int k : ks) rows.push_back(prop52_measure(k));
    return prop52_report_rows(rows);
}

// Single-shell report, one row.
inline CounterexampleReport prop52_check(int k) { return prop52_report({k}); }

} // namespace bolab
