#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "bolab/core/spacetime_field.hpp"
#include "bolab/norms/split.hpp"
#include "bolab/norms/xk.hpp"
#include "bolab/norms/yk.hpp"

namespace bolab {

namespace detail {

inline SpaceTimeField with_data(const SpaceTimeField& like, std::vector<cplx> data) {
    SpaceTimeField f = like;
    f.data = std::move(data);
    return f;
}

} // namespace detail

struct ZkResult {
    NormReport report;
    std::vector<cplx> x_part, y_part; // empty when no splitting was involved
};

// Z_k norm. For 1 <= k <= 99 this is exactly X_k. For k = 0 and k >= 100 it
// is the splitting infimum inf_{f = g + h} (||g||_X + ||h||_Y); the optimizer
// returns a certified upper bound together with the trivial baselines.
inline ZkResult zk_norm_full(const SpaceTimeField& f, int k, const NormOptions& opts = {},
                             const std::vector<cplx>* init_x_part = nullptr) {
    if (k < 0) throw std::domain_error("zk_norm: k must be >= 0");
    if (k >= 1 && k <= 99) {
        ZkResult out;
        out.report = xk_norm_high(f, k);
        out.report.name = "z_" + std::to_string(k);
        return out;
    }
    if (f.rep != Rep::frequency) throw std::logic_error("zk: needs frequency representation");
    if (k == 0)
        detail::check_shell_support(f, 0, "zk_norm");
    else
        detail::check_shell_support(f, k, "zk_norm");

    SplitObjective obj;
    if (k == 0) {
        obj.a_value = [&](const std::vector<cplx>& g) { return detail::x0_value(detail::with_data(f, g), opts.kp_min); };
        obj.b_value = [&](const std::vector<cplx>& h) { return detail::y0_value(detail::with_data(f, h)); };
        obj.a_subgrad = [&](const std::vector<cplx>& g) { return detail::x0_subgrad(detail::with_data(f, g), opts.kp_min); };
        obj.b_subgrad = [&](const std::vector<cplx>& h) { return detail::y0_subgrad(detail::with_data(f, h)); };
        // Both parts must stay inside |xi| <= 2.
        obj.project = [&](std::vector<cplx>& g) {
            for (int ix = 0; ix < f.nx(); ++ix)
                if (std::fabs(f.xgrid.xi_at(ix)) > 2.0)
                    for (int it = 0; it < f.nt(); ++it) g[ix * f.nt() + it] = cplx(0.0, 0.0);
        };
    } else {
        obj.a_value = [&, k](const std::vector<cplx>& g) { return detail::xk_value_high(detail::with_data(f, g), k); };
        obj.b_value = [&, k](const std::vector<cplx>& h) { return detail::yk_value_high(detail::with_data(f, h), k); };
        obj.a_subgrad = [&, k](const std::vector<cplx>& g) { return detail::xk_subgrad_high(detail::with_data(f, g), k); };
        obj.b_subgrad = [&, k](const std::vector<cplx>& h) { return detail::yk_subgrad_high(detail::with_data(f, h), k); };
        // The Y part only admits modulations below 2^k, so everything outside
        // that region is pinned to the X part.
        obj.project = [&, k](std::vector<cplx>& g) {
            double cap = std::exp2(static_cast<double>(k));
            for (int ix = 0; ix < f.nx(); ++ix) {
                double w0 = omega(f.xgrid.xi_at(ix));
                bool xi_ok = in_shell(k, f.xgrid.xi_at(ix));
                for (int it = 0; it < f.nt(); ++it)
                    if (!xi_ok || std::fabs(f.tgrid.tau_at(it) - w0) > cap)
                        g[ix * f.nt() + it] = f.data[ix * f.nt() + it];
            }
        };
    }

    SplitResult sr = split_minimize(f.data, obj, opts, init_x_part);
    ZkResult out;
    NormReport& rep = out.report;
    rep.name = "z_" + std::to_string(k);
    rep.value = sr.info.achieved;
    rep.opt = sr.info;
    double xg = obj.a_value(sr.g);
    double yh = obj.b_value(sr.h);
    rep.terms.push_back({"x_part", 1.0, xg, xg});
    rep.terms.push_back({"y_part", 1.0, yh, yh});
    if (k == 0) {
        detail::X0Masses m = detail::x0_masses(detail::with_data(f, sr.g), opts.kp_min);
        rep.dropped_dc_mass = std::sqrt(m.dc2 * m.cell);
        rep.tail_mass = std::sqrt(m.tail2 * m.cell);
    }
    out.x_part = std::move(sr.g);
    out.y_part = std::move(sr.h);
    return out;
}

inline NormReport zk_norm(const SpaceTimeField& f, int k, const NormOptions& opts = {},
                          const std::vector<cplx>* init_x_part = nullptr) {
    return zk_norm_full(f, k, opts, init_x_part).report;
}

} // namespace bolab
