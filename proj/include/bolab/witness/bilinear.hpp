#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolab/dyadic/cutoffs.hpp"
#include "bolab/norms/fsigma.hpp"
#include "bolab/norms/zk.hpp"
#include "bolab/witness/patch.hpp"

namespace bolab {

// The five dyadic bilinear estimates plus the space-time product estimate,
// each measured as an LHS/RHS ratio over constructed inputs. Ratios are
// regression baselines; only hypotheses and support conditions are asserted.
enum class BilinearKind { lemma33, lemma34, lemma35, lemma36, lemma37, prop38 };

inline BilinearKind bilinear_kind_from_token(const std::string& s) {
    if (s == "Lemma33") return BilinearKind::lemma33;
    if (s == "Lemma34") return BilinearKind::lemma34;
    if (s == "Lemma35") return BilinearKind::lemma35;
    if (s == "Lemma36") return BilinearKind::lemma36;
    if (s == "Lemma37") return BilinearKind::lemma37;
    if (s == "Prop38") return BilinearKind::prop38;
    throw std::domain_error("bilinear witness: unknown kind '" + s + "'");
}

struct BilinearResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;      // lhs / rhs, 0 when both vanish
    bool violation = false;  // rhs = 0 with lhs != 0
    bool support_ok = true;  // output support condition, where one is claimed
    long long scanned_cells = 0;
    double aux_ratio = 0.0;  // secondary bound when the statement has one
    std::string path;        // convolution path taken
};

namespace detail {

inline BilinearResult finish_ratio(BilinearResult r) {
    if (r.rhs > 0.0)
        r.ratio = r.lhs / r.rhs;
    else if (r.lhs != 0.0)
        r.violation = true;
    return r;
}

// Multiply by eta_k(xi) (eta0 for k = 0) columnwise.
inline void mask_eta_shell(FreqPatch& p, int k) {
    for (int i = 0; i < p.ncols(); ++i) {
        double w = eta(k, p.xi_of(i));
        for (PatchRun& r : p.cols[i].runs)
            for (auto& z : r.v) z *= w;
    }
}

// Multiply by A_k(xi,tau)^{-1}, A_k = tau - omega + i for k >= 1, tau + i for
// k = 0. |A_k| >= 1, so this never amplifies.
inline void apply_inverse_dispersive(FreqPatch& p, int k) {
    MuEval mu(p);
    patch_cells_mut(p, [&](int i, long long n, cplx& z) {
        double m = (k >= 1) ? mu(p.x0 + i, n) : p.tau_of(n);
        z /= cplx{m, 1.0};
    });
}

inline void multiply_by_xi(FreqPatch& p) {
    for (int i = 0; i < p.ncols(); ++i) {
        double xi = p.xi_of(i);
        for (PatchRun& r : p.cols[i].runs)
            for (auto& z : r.v) z *= xi;
    }
}

} // namespace detail

// X_k norm of a patch, k >= 1: same band accumulation as the lattice version.
inline double xk_of_patch(const FreqPatch& p, int k) {
    if (k < 1) throw std::domain_error("xk_of_patch: k must be >= 1");
    MuEval mu(p);
    std::map<int, double> band2;
    for (int i = 0; i < p.ncols(); ++i) {
        bool shell_ok = in_shell(k, p.xi_of(i));
        for (const PatchRun& run : p.cols[i].runs)
            for (size_t r = 0; r < run.v.size(); ++r) {
                if (run.v[r] == cplx{0.0, 0.0}) continue;
                if (!shell_ok)
                    throw std::domain_error("xk_of_patch: mass outside shell " + std::to_string(k));
                double m = mu(p.x0 + i, run.t0 + static_cast<long long>(r));
                int jb = mod_bin_of(m);
                for (int j = jb; j <= jb + 1; ++j) {
                    double w = eta(j, m);
                    if (w != 0.0) band2[j] += w * w * std::norm(run.v[r]);
                }
            }
    }
    double cell = p.cell(), value = 0.0;
    for (const auto& [j, m2] : band2)
        value += std::exp2(0.5 * j) * beta_weight(k, j) * std::sqrt(m2 * cell);
    return value;
}

// Z_k norm of a patch: the pure modulation norm mid-range, the splitting norm
// (via an FFT-lattice embedding) at k = 0 and k >= 100.
inline double zk_of_patch(const FreqPatch& p, int k, const NormOptions& opts = {}) {
    if (k < 0) throw std::domain_error("zk_of_patch: k must be >= 0");
    if (k >= 1 && k <= 99) return xk_of_patch(p, k);
    return zk_norm(materialize(p), k, opts).value;
}

// ---- Lemma witnesses ------------------------------------------------------

// 2^k || eta_k(xi) (tau - omega + i)^{-1} f_{k2} conv f_0 ||_{Z_k}
//   <= C ||f_{k2}||_{Z_{k2}} ||f_0||_{Z_0}
inline BilinearResult lemma33_witness(const FreqPatch& f_k2, const FreqPatch& f_0, int k, int k2,
                                      const NormOptions& opts = {}) {
    if (k < 20) throw std::domain_error("lemma33: needs k >= 20");
    if (k2 < k - 2 || k2 > k + 2) throw std::domain_error("lemma33: needs k2 in [k-2, k+2]");
    if (f_k2.dxi != f_0.dxi || f_k2.dtau != f_0.dtau)
        throw std::domain_error("lemma33: inputs must share lattice steps");
    if (!patch_in_shell(f_k2, k2)) throw std::domain_error("lemma33: f_k2 must be supported in I_k2");
    if (!patch_in_low(f_0)) throw std::domain_error("lemma33: f_0 must be supported in |xi| <= 2");
    BilinearResult r;
    FreqPatch conv = convolve(f_k2, f_0, 100000000LL, &r.path);
    detail::apply_inverse_dispersive(conv, k);
    detail::mask_eta_shell(conv, k);
    r.lhs = std::exp2(static_cast<double>(k)) * zk_of_patch(conv, k, opts);
    r.rhs = zk_of_patch(f_k2, k2, opts) * zk_of_patch(f_0, 0, opts);
    return detail::finish_ratio(r);
}

// One low band for the sum in the second high-low estimate: the field and its
// (I - d^2/dtau^2)-weighted copy, both supported in I_{k1}.
struct ModBand {
    int k1 = 1;
    FreqPatch f;
    FreqPatch weighted;
};

// 2^k || eta_k(xi) (tau - omega + i)^{-1} f_{k2} conv sum_{k1} f_{k1} ||_{Z_k}
//   <= C ||f_{k2}||_{Z_{k2}} sup_{k1} ||(I - d^2/dtau^2) f_{k1}||_{Z_{k1}}
inline BilinearResult lemma34_witness(const FreqPatch& f_k2, int k, int k2,
                                      const std::vector<ModBand>& lows,
                                      const NormOptions& opts = {}) {
    if (k < 20) throw std::domain_error("lemma34: needs k >= 20");
    if (k2 < k - 2 || k2 > k + 2) throw std::domain_error("lemma34: needs k2 in [k-2, k+2]");
    if (!patch_in_shell(f_k2, k2)) throw std::domain_error("lemma34: f_k2 must be supported in I_k2");
    BilinearResult r;
    std::vector<FreqPatch> pieces;
    double sup_rhs = 0.0;
    for (const ModBand& b : lows) {
        if (b.k1 < 1 || b.k1 > k - 10)
            throw std::domain_error("lemma34: needs every k1 in [1, k-10]");
        if (f_k2.dxi != b.f.dxi || f_k2.dtau != b.f.dtau)
            throw std::domain_error("lemma34: inputs must share lattice steps");
        if (!patch_in_shell(b.f, b.k1) || !patch_in_shell(b.weighted, b.k1))
            throw std::domain_error("lemma34: every f_k1 must be supported in I_k1");
        pieces.push_back(convolve(f_k2, b.f, 100000000LL, &r.path));
        sup_rhs = std::max(sup_rhs, zk_of_patch(b.weighted, b.k1, opts));
    }
    std::vector<const FreqPatch*> ptrs;
    for (const auto& p : pieces) ptrs.push_back(&p);
    FreqPatch conv = patch_sum(ptrs);
    if (!conv.cols.empty()) {
        detail::apply_inverse_dispersive(conv, k);
        detail::mask_eta_shell(conv, k);
        r.lhs = std::exp2(static_cast<double>(k)) * zk_of_patch(conv, k, opts);
    }
    r.rhs = zk_of_patch(f_k2, k2, opts) * sup_rhs;
    return detail::finish_ratio(r);
}

namespace detail {

// Shared LHS of the two balanced estimates:
// || xi eta_k(xi) A_k(xi,tau)^{-1} f_{k1} conv f_{k2} ||_{X_k}.
inline double balanced_lhs(const FreqPatch& f1, const FreqPatch& f2, int k, std::string* path,
                           const NormOptions& opts) {
    FreqPatch conv = convolve(f1, f2, 100000000LL, path);
    apply_inverse_dispersive(conv, k);
    mask_eta_shell(conv, k);
    multiply_by_xi(conv);
    if (k >= 1) return xk_of_patch(conv, k);
    return xk_norm(materialize(conv), 0, opts).value; // low shell: X_0 on the embedding lattice
}

} // namespace detail

// || xi eta_k(xi) A_k^{-1} f_{k1} conv f_{k2} ||_{X_k} <= C prod ||f_{ki}||_{Z_{ki}}
// for comparable shells max(k,k1,k2) <= min(k,k1,k2) + 30.
inline BilinearResult lemma35_witness(const FreqPatch& f1, const FreqPatch& f2, int k, int k1,
                                      int k2, const NormOptions& opts = {}) {
    if (k < 0 || k1 < 0 || k2 < 0) throw std::domain_error("lemma35: needs k, k1, k2 >= 0");
    if (std::max({k, k1, k2}) > std::min({k, k1, k2}) + 30)
        throw std::domain_error("lemma35: needs max(k,k1,k2) <= min(k,k1,k2) + 30");
    if (f1.dxi != f2.dxi || f1.dtau != f2.dtau)
        throw std::domain_error("lemma35: inputs must share lattice steps");
    if (!patch_in_shell(f1, k1)) throw std::domain_error("lemma35: f_k1 must be supported in I_k1");
    if (!patch_in_shell(f2, k2)) throw std::domain_error("lemma35: f_k2 must be supported in I_k2");
    BilinearResult r;
    r.lhs = detail::balanced_lhs(f1, f2, k, &r.path, opts);
    r.rhs = zk_of_patch(f1, k1, opts) * zk_of_patch(f2, k2, opts);
    return detail::finish_ratio(r);
}

// Same LHS under the high-high hypotheses k1, k2 >= k + 10, |k1 - k2| <= 2,
// with the 2^{-k/4} gain on the right.
inline BilinearResult lemma36_witness(const FreqPatch& f1, const FreqPatch& f2, int k, int k1,
                                      int k2, const NormOptions& opts = {}) {
    if (k < 0) throw std::domain_error("lemma36: needs k >= 0");
    if (k1 < k + 10 || k2 < k + 10 || std::abs(k1 - k2) > 2)
        throw std::domain_error("lemma36: needs k1, k2 >= k+10 and |k1-k2| <= 2");
    if (f1.dxi != f2.dxi || f1.dtau != f2.dtau)
        throw std::domain_error("lemma36: inputs must share lattice steps");
    if (!patch_in_shell(f1, k1)) throw std::domain_error("lemma36: f_k1 must be supported in I_k1");
    if (!patch_in_shell(f2, k2)) throw std::domain_error("lemma36: f_k2 must be supported in I_k2");
    BilinearResult r;
    r.lhs = detail::balanced_lhs(f1, f2, k, &r.path, opts);
    r.rhs = std::exp2(-0.25 * k) * zk_of_patch(f1, k1, opts) * zk_of_patch(f2, k2, opts);
    return detail::finish_ratio(r);
}

// Single-band bound with the support trichotomy. Inputs are L^2 bumps
// supported in D_{k1,j1} and D_{k2,j2} with k1 <= 1 and k2 near k. Measured:
//   max_j 2^k 2^{j/2} beta_{k,j} ||eta_k eta_j(tau-omega) (tau-omega+i)^{-1} conv||
//     / [(2^{k1/2} + 2^{-k/2})^{-1} 2^{j1} ||f1|| 2^{j2/2} beta_{k2,j2} ||f2||]
// plus, when j1 >= k + k1 - 20, the strengthened bound carrying an extra
// 2^{-max(j,j2)/2} (reported as aux_ratio). Every nonzero output cell inside
// I_k is checked against the trichotomy: with j ranging over the modulation
// intervals containing it, either max(j,j1,j2) lies within 10 of k+k1, or it
// exceeds k+k1+10 and the top two of (j,j1,j2) are within 10 of each other.
// The quoted norm bounds assume k >= 20; the support condition rests only on
// scale separation, so the witness accepts any k >= k1 + 6.
inline BilinearResult lemma37_witness(const FreqPatch& f1, int k1, int j1, const FreqPatch& f2,
                                      int k2, int j2, int k) {
    if (k1 > 1) throw std::domain_error("lemma37: needs k1 <= 1");
    if (k < k1 + 6) throw std::domain_error("lemma37: needs k >= k1 + 6");
    if (k2 < std::max(1, k - 2) || k2 > k + 2)
        throw std::domain_error("lemma37: needs k2 in [k-2, k+2], k2 >= 1");
    if (j1 < 0 || j2 < 0) throw std::domain_error("lemma37: needs j1, j2 >= 0");
    if (f1.dxi != f2.dxi || f1.dtau != f2.dtau)
        throw std::domain_error("lemma37: inputs must share lattice steps");
    if (!patch_in_region(f1, k1, j1))
        throw std::domain_error("lemma37: f1 must be supported in D_{k1,j1}");
    if (!patch_in_region(f2, k2, j2))
        throw std::domain_error("lemma37: f2 must be supported in D_{k2,j2}");

    BilinearResult r;
    FreqPatch conv = convolve(f1, f2, 100000000LL, &r.path);
    const double amax = patch_max_abs(conv);
    const double thresh = 1e-12 * amax;
    MuEval mu(conv);

    std::map<int, double> band2; // eta_k eta_j |A|^{-2}-weighted masses
    const int kk1 = k + k1;
    for (int i = 0; i < conv.ncols(); ++i) {
        double xi = conv.xi_of(i);
        if (!in_shell(k, xi)) continue;
        double ek = eta(k, xi);
        for (const PatchRun& run : conv.cols[i].runs)
            for (size_t rr = 0; rr < run.v.size(); ++rr) {
                double a = std::abs(run.v[rr]);
                if (a <= thresh) continue;
                double m = mu(conv.x0 + i, run.t0 + static_cast<long long>(rr));
                int jb = mod_bin_of(m);
                for (int j = jb; j <= jb + 1; ++j) {
                    if (!in_mod_interval(j, m)) continue;
                    ++r.scanned_cells;
                    int hi = std::max({j, j1, j2});
                    int med = j + j1 + j2 - hi - std::min({j, j1, j2});
                    bool ok = (hi >= kk1 - 10 && hi <= kk1 + 10) || (hi >= kk1 + 10 && hi - med <= 10);
                    if (!ok) r.support_ok = false;
                    double w = ek * eta(j, m);
                    if (w != 0.0) band2[j] += w * w * a * a / (m * m + 1.0);
                }
            }
    }

    double base = std::pow(std::exp2(0.5 * k1) + std::exp2(-0.5 * k), -1.0) *
                  std::exp2(static_cast<double>(j1)) * patch_l2(f1) * std::exp2(0.5 * j2) *
                  beta_weight(k2, j2) * patch_l2(f2);
    const double cell = conv.cell();
    double aux = 0.0;
    for (const auto& [j, m2] : band2) {
        double lhs_j = std::exp2(static_cast<double>(k)) * std::exp2(0.5 * j) *
                       beta_weight(k, j) * std::sqrt(m2 * cell);
        r.lhs = std::max(r.lhs, lhs_j);
        aux = std::max(aux, lhs_j * std::exp2(0.5 * std::max(j, j2)));
    }
    r.rhs = base;
    r = detail::finish_ratio(r);
    if (j1 >= kk1 - 20 && base > 0.0) r.aux_ratio = aux / base;
    return r;
}

// || d/dx (u v) ||_{N^sigma} <= C_sigma (||u||_{F^sigma} ||v||_{F^0}
//                                        + ||u||_{F^0} ||v||_{F^sigma})
// on full lattice fields.
inline BilinearResult prop38_witness(const SpaceTimeField& u, const SpaceTimeField& v,
                                     double sigma, const NormOptions& opts = {}) {
    if (sigma < 0.0) throw std::domain_error("prop38: needs sigma >= 0");
    if (u.rep != Rep::physical || v.rep != Rep::physical)
        throw std::logic_error("prop38: needs physical representation");
    if (!(u.xgrid == v.xgrid) || !(u.tgrid == v.tgrid))
        throw std::domain_error("prop38: inputs must share the lattice");
    SpaceTimeField w = u;
    for (size_t i = 0; i < w.data.size(); ++i) w.data[i] *= v.data[i];
    SpaceTimeField wf = to_frequency(w);
    for (int ix = 0; ix < wf.nx(); ++ix) {
        cplx d{0.0, wf.xgrid.xi_at(ix)};
        for (int it = 0; it < wf.nt(); ++it) wf.at(ix, it) *= d;
    }
    SpaceTimeField wp = to_physical(wf);
    BilinearResult r;
    r.lhs = nsigma_norm(wp, sigma, opts).value;
    double us = fsigma_norm(u, sigma, opts).value, u0 = fsigma_norm(u, 0.0, opts).value;
    double vs = fsigma_norm(v, sigma, opts).value, v0 = fsigma_norm(v, 0.0, opts).value;
    r.rhs = us * v0 + u0 * vs;
    r.path = "lattice";
    return detail::finish_ratio(r);
}

} // namespace bolab
