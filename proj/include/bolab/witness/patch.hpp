#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bolab/core/fft.hpp"
#include "bolab/core/spacetime_field.hpp"
#include "bolab/dyadic/shells.hpp"

namespace bolab {

// Contiguous tau-run of cells at global indices t0 .. t0 + v.size() - 1.
struct PatchRun {
    long long t0 = 0;
    std::vector<cplx> v;
    bool empty() const { return v.empty(); }
    long long t_end() const { return t0 + static_cast<long long>(v.size()); }
};

// One xi-column: disjoint runs in ascending tau order. Convolutions of
// high-shell data produce tau-islands separated by ~omega'(xi) dxi / dtau
// cells; one contiguous span per column would mostly store zeros.
struct PatchCol {
    std::vector<PatchRun> runs;
    bool empty() const { return runs.empty(); }
};

// Sparse window of a conceptual global lattice with steps (dxi, dtau):
// rectangular in xi, ragged in tau. Columns can follow the dispersion graph
// tau ~ omega(xi), which keeps high-shell data storable; a bounding rectangle
// there would need ~2^{2k} rows. Global cell (m, n) sits at (m*dxi, n*dtau).
struct FreqPatch {
    double dxi = 0.0625;
    double dtau = 0.5;
    long long x0 = 0; // global xi index of cols[0]
    std::vector<PatchCol> cols;

    int ncols() const { return static_cast<int>(cols.size()); }
    double xi_of(int i) const { return dxi * static_cast<double>(x0 + i); }
    double tau_of(long long n) const { return dtau * static_cast<double>(n); }
    double cell() const { return dxi * dtau; }
};

// Evaluates mu = tau - omega(xi) on patch cells. When dtau/dxi^2 is a whole
// number q and the integer products stay below 2^53, the value
// dxi^2 * (q*n + sgn(m)*m^2) is exact; this matters at high shells where tau
// and omega cancel to O(1) out of O(2^{2k}) and plain floating subtraction
// would lose the modulation variable entirely.
class MuEval {
  public:
    explicit MuEval(const FreqPatch& p) : dxi_(p.dxi), dtau_(p.dtau) {
        double d2 = dxi_ * dxi_;
        double q = dtau_ / d2;
        if (q >= 1.0 && q == std::floor(q) && q <= 9.0e15) {
            q_ = static_cast<long long>(q);
            exact_ = true;
        }
    }

    double operator()(long long m, long long n) const {
        if (exact_) {
            long long am = std::llabs(m);
            if (am <= (1LL << 26) && std::llabs(n) <= (9007199254740992LL / q_)) {
                long long total = q_ * n + (m >= 0 ? am * am : -am * am);
                if (std::llabs(total) <= 9007199254740992LL)
                    return dxi_ * dxi_ * static_cast<double>(total);
            }
        }
        double xi = dxi_ * static_cast<double>(m);
        return dtau_ * static_cast<double>(n) - omega(xi);
    }

  private:
    double dxi_, dtau_;
    long long q_ = 0;
    bool exact_ = false;
};

// Visit every stored cell: f(column index, global tau index, value).
template <typename F>
void patch_cells(const FreqPatch& p, F&& f) {
    for (int i = 0; i < p.ncols(); ++i)
        for (const PatchRun& r : p.cols[i].runs) {
            long long n = r.t0;
            for (const cplx& z : r.v) f(i, n++, z);
        }
}

template <typename F>
void patch_cells_mut(FreqPatch& p, F&& f) {
    for (int i = 0; i < p.ncols(); ++i)
        for (PatchRun& r : p.cols[i].runs) {
            long long n = r.t0;
            for (cplx& z : r.v) f(i, n++, z);
        }
}

inline double patch_l2(const FreqPatch& p) {
    double s = 0.0;
    patch_cells(p, [&](int, long long, const cplx& z) { s += std::norm(z); });
    return std::sqrt(s * p.cell());
}

inline double patch_max_abs(const FreqPatch& p) {
    double m = 0.0;
    patch_cells(p, [&](int, long long, const cplx& z) { m = std::max(m, std::abs(z)); });
    return m;
}

inline long long patch_nnz(const FreqPatch& p) {
    long long n = 0;
    patch_cells(p, [&](int, long long, const cplx& z) {
        if (z != cplx{0.0, 0.0}) ++n;
    });
    return n;
}

// Stored value at global cell (gx, n); zero off the stored support.
inline cplx patch_value(const FreqPatch& p, long long gx, long long n) {
    long long i = gx - p.x0;
    if (i < 0 || i >= p.ncols()) return {0.0, 0.0};
    for (const PatchRun& r : p.cols[static_cast<size_t>(i)].runs) {
        if (n < r.t0) return {0.0, 0.0};
        if (n < r.t_end()) return r.v[static_cast<size_t>(n - r.t0)];
    }
    return {0.0, 0.0};
}

// Support predicates over strictly nonzero cells.
inline bool patch_in_shell(const FreqPatch& p, int k) {
    for (int i = 0; i < p.ncols(); ++i) {
        if (in_shell(k, p.xi_of(i))) continue;
        for (const PatchRun& r : p.cols[i].runs)
            for (const cplx& z : r.v)
                if (z != cplx{0.0, 0.0}) return false;
    }
    return true;
}

inline bool patch_in_low(const FreqPatch& p) {
    for (int i = 0; i < p.ncols(); ++i) {
        if (std::fabs(p.xi_of(i)) <= 2.0) continue;
        for (const PatchRun& r : p.cols[i].runs)
            for (const cplx& z : r.v)
                if (z != cplx{0.0, 0.0}) return false;
    }
    return true;
}

// Support inside D_{k,j}: xi in I_k and the modulation variable (tau - omega
// for k >= 1, tau itself for k <= 0) in the j-th modulation interval.
inline bool patch_in_region(const FreqPatch& p, int k, int j) {
    MuEval mu(p);
    for (int i = 0; i < p.ncols(); ++i) {
        bool shell_ok = in_shell(k, p.xi_of(i));
        for (const PatchRun& rn : p.cols[i].runs)
            for (size_t s = 0; s < rn.v.size(); ++s) {
                if (rn.v[s] == cplx{0.0, 0.0}) continue;
                if (!shell_ok) return false;
                long long n = rn.t0 + static_cast<long long>(s);
                double m = (k >= 1) ? mu(p.x0 + i, n) : p.tau_of(n);
                if (!in_mod_interval(j, m)) return false;
            }
    }
    return true;
}

namespace detail {

using TauSpan = std::pair<long long, long long>; // [lo, hi)

// Merge half-open spans into disjoint ascending zero-filled runs.
inline void allocate_runs(PatchCol& c, std::vector<TauSpan>& spans) {
    if (spans.empty()) return;
    std::sort(spans.begin(), spans.end());
    for (const TauSpan& s : spans) {
        if (!c.runs.empty() && s.first <= c.runs.back().t_end()) {
            PatchRun& last = c.runs.back();
            if (s.second > last.t_end())
                last.v.resize(static_cast<size_t>(s.second - last.t0), cplx{0.0, 0.0});
        } else {
            c.runs.push_back(PatchRun{
                s.first, std::vector<cplx>(static_cast<size_t>(s.second - s.first), cplx{0.0, 0.0})});
        }
    }
}

// The run containing global index lo; the column must have been prepared with
// spans covering every contribution.
inline PatchRun& covering_run(PatchCol& c, long long lo) {
    for (PatchRun& r : c.runs)
        if (lo >= r.t0 && lo < r.t_end()) return r;
    throw std::logic_error("patch: contribution outside allocated runs");
}

// Accumulate w = a conv b into out[off .. off+la+lb-2].
inline void conv1d_direct(const cplx* a, int la, const cplx* b, int lb, cplx* out) {
    for (int i = 0; i < la; ++i) {
        cplx ai = a[i];
        if (ai == cplx{0.0, 0.0}) continue;
        for (int j = 0; j < lb; ++j) out[i + j] += ai * b[j];
    }
}

inline void conv1d_fft(const cplx* a, int la, const cplx* b, int lb, cplx* out) {
    int n = la + lb - 1;
    std::vector<cplx> fa(n, cplx{0.0, 0.0}), fb(n, cplx{0.0, 0.0});
    std::copy(a, a + la, fa.begin());
    std::copy(b, b + lb, fb.begin());
    dft(fa, -1);
    dft(fb, -1);
    for (int i = 0; i < n; ++i) fa[i] *= fb[i];
    dft(fa, +1);
    double inv = 1.0 / n;
    for (int i = 0; i < n; ++i) out[i] += fa[i] * inv;
}

} // namespace detail

// Union-extent sum of patches sharing lattice steps.
inline FreqPatch patch_sum(const std::vector<const FreqPatch*>& parts) {
    FreqPatch out;
    bool first = true;
    long long xlo = 0, xhi = 0;
    for (const FreqPatch* p : parts) {
        if (p->cols.empty()) continue;
        if (first) {
            out.dxi = p->dxi;
            out.dtau = p->dtau;
            xlo = p->x0;
            xhi = p->x0 + p->ncols();
            first = false;
        } else {
            if (p->dxi != out.dxi || p->dtau != out.dtau)
                throw std::logic_error("patch_sum: mismatched lattice steps");
            xlo = std::min(xlo, p->x0);
            xhi = std::max(xhi, p->x0 + static_cast<long long>(p->ncols()));
        }
    }
    if (first) return out;
    out.x0 = xlo;
    out.cols.resize(static_cast<size_t>(xhi - xlo));
    for (size_t i = 0; i < out.cols.size(); ++i) {
        long long gx = xlo + static_cast<long long>(i);
        std::vector<detail::TauSpan> spans;
        for (const FreqPatch* p : parts) {
            long long local = gx - p->x0;
            if (local < 0 || local >= p->ncols()) continue;
            for (const PatchRun& r : p->cols[static_cast<size_t>(local)].runs)
                if (!r.empty()) spans.emplace_back(r.t0, r.t_end());
        }
        detail::allocate_runs(out.cols[i], spans);
        for (const FreqPatch* p : parts) {
            long long local = gx - p->x0;
            if (local < 0 || local >= p->ncols()) continue;
            for (const PatchRun& r : p->cols[static_cast<size_t>(local)].runs) {
                if (r.empty()) continue;
                PatchRun& dst = detail::covering_run(out.cols[i], r.t0);
                size_t off = static_cast<size_t>(r.t0 - dst.t0);
                for (size_t s = 0; s < r.v.size(); ++s) dst.v[off + s] += r.v[s];
            }
        }
    }
    return out;
}

// Lattice convolution (A conv B)(zeta) = sum A(zeta') B(zeta - zeta') dxi dtau.
// Run pairs are summed directly while the total work nnz(A)*nnz(B) stays
// below direct_limit; above it, long run pairs switch to FFT convolution.
// Output indices are integer sums, so the placement is exact at any shell.
inline FreqPatch convolve(const FreqPatch& A, const FreqPatch& B,
                          long long direct_limit = 100000000LL, std::string* path = nullptr) {
    if (A.dxi != B.dxi || A.dtau != B.dtau)
        throw std::logic_error("convolve: mismatched lattice steps");
    FreqPatch out;
    out.dxi = A.dxi;
    out.dtau = A.dtau;
    if (A.cols.empty() || B.cols.empty()) {
        if (path) *path = "empty";
        return out;
    }
    out.x0 = A.x0 + B.x0;
    out.cols.resize(static_cast<size_t>(A.ncols() + B.ncols() - 1));

    // extent pass: every run pair contributes one span to column i + j
    std::vector<std::vector<detail::TauSpan>> spans(out.cols.size());
    for (int i = 0; i < A.ncols(); ++i)
        for (const PatchRun& ra : A.cols[i].runs) {
            if (ra.empty()) continue;
            for (int j = 0; j < B.ncols(); ++j)
                for (const PatchRun& rb : B.cols[j].runs) {
                    if (rb.empty()) continue;
                    long long lo = ra.t0 + rb.t0;
                    spans[static_cast<size_t>(i + j)].emplace_back(
                        lo, lo + static_cast<long long>(ra.v.size() + rb.v.size()) - 1);
                }
        }
    for (size_t m = 0; m < out.cols.size(); ++m) detail::allocate_runs(out.cols[m], spans[m]);

    bool all_direct = patch_nnz(A) * patch_nnz(B) <= direct_limit;
    bool used_fft = false;
    for (int i = 0; i < A.ncols(); ++i)
        for (const PatchRun& ra : A.cols[i].runs) {
            if (ra.empty()) continue;
            for (int j = 0; j < B.ncols(); ++j)
                for (const PatchRun& rb : B.cols[j].runs) {
                    if (rb.empty()) continue;
                    PatchRun& dst = detail::covering_run(out.cols[static_cast<size_t>(i + j)],
                                                         ra.t0 + rb.t0);
                    size_t off = static_cast<size_t>(ra.t0 + rb.t0 - dst.t0);
                    long long work =
                        static_cast<long long>(ra.v.size()) * static_cast<long long>(rb.v.size());
                    if (all_direct || work <= 65536) {
                        detail::conv1d_direct(ra.v.data(), static_cast<int>(ra.v.size()),
                                              rb.v.data(), static_cast<int>(rb.v.size()),
                                              dst.v.data() + off);
                    } else {
                        detail::conv1d_fft(ra.v.data(), static_cast<int>(ra.v.size()), rb.v.data(),
                                           static_cast<int>(rb.v.size()), dst.v.data() + off);
                        used_fft = true;
                    }
                }
        }
    double measure = A.cell();
    patch_cells_mut(out, [&](int, long long, cplx& z) { z *= measure; });
    if (path) *path = used_fft ? "mixed-fft" : "direct";
    return out;
}

// Embed a patch into a full FFT lattice (frequency representation), for norms
// that need the physical side. Throws when the covering lattice would exceed
// max_cells.
inline SpaceTimeField materialize(const FreqPatch& p, long long max_cells = (1LL << 24)) {
    long long mmax = 1, tmax = 2;
    for (int i = 0; i < p.ncols(); ++i)
        for (const PatchRun& r : p.cols[i].runs) {
            if (r.empty()) continue;
            mmax = std::max(mmax, std::llabs(p.x0 + i));
            tmax = std::max({tmax, std::llabs(r.t0), std::llabs(r.t_end() - 1)});
        }
    long long nx = 4;
    while (nx / 2 - 1 < mmax) nx *= 2;
    long long nt = 2 * tmax + 1;
    if (nt < 5) nt = 5;
    if (nx * nt > max_cells) throw std::domain_error("materialize: patch too large for an FFT lattice");
    FrequencyGrid xg(2.0 * pi / p.dxi, static_cast<int>(nx));
    TimeGrid tg(pi * static_cast<double>(nt - 1) / (static_cast<double>(nt) * p.dtau),
                static_cast<int>(nt));
    SpaceTimeField f(xg, tg, Rep::frequency);
    patch_cells(p, [&](int i, long long n, const cplx& z) {
        f.at(xg.index_of(static_cast<int>(p.x0 + i)), tg.index_of(static_cast<int>(n))) = z;
    });
    return f;
}

} // namespace bolab
