#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "bolab/core/rng.hpp"
#include "bolab/core/spacetime_field.hpp"
#include "bolab/norms/xk.hpp"
#include "bolab/witness/bilinear.hpp"
#include "bolab/witness/bumps.hpp"
#include "bolab/witness/patch.hpp"

using namespace bolab;

namespace {

// Accumulate a patch into a frequency-representation field covering it.
void embed(const FreqPatch& p, SpaceTimeField& f) {
    patch_cells(p, [&](int i, long long n, const cplx& z) {
        f.at(f.xgrid.index_of(static_cast<int>(p.x0 + i)),
             f.tgrid.index_of(static_cast<int>(n))) += z;
    });
}

void grow_extent(const FreqPatch& p, long long& mmax, long long& tmax) {
    for (int i = 0; i < p.ncols(); ++i)
        for (const PatchRun& r : p.cols[i].runs) {
            if (r.empty()) continue;
            mmax = std::max(mmax, std::llabs(p.x0 + i));
            tmax = std::max({tmax, std::llabs(r.t0), std::llabs(r.t_end() - 1)});
        }
}

double patch_diff(const FreqPatch& a, const FreqPatch& b) {
    double m = 0.0;
    patch_cells(a, [&](int i, long long n, const cplx& z) {
        m = std::max(m, std::abs(z - patch_value(b, a.x0 + i, n)));
    });
    patch_cells(b, [&](int i, long long n, const cplx& z) {
        m = std::max(m, std::abs(z - patch_value(a, b.x0 + i, n)));
    });
    return m;
}

} // namespace

TEST_CASE("patch convolution matches a hand-built example") {
    FreqPatch A;
    A.dxi = 0.25;
    A.dtau = 0.5;
    A.x0 = 2;
    A.cols.resize(2);
    A.cols[0].runs = {PatchRun{0, {cplx{1.0, 0.0}, cplx{0.0, 2.0}}}};
    A.cols[1].runs = {PatchRun{-1, {cplx{3.0, 0.0}}}};

    FreqPatch B;
    B.dxi = 0.25;
    B.dtau = 0.5;
    B.x0 = -1;
    B.cols.resize(1);
    B.cols[0].runs = {PatchRun{3, {cplx{0.0, 1.0}, cplx{2.0, 0.0}}}};

    std::string path;
    FreqPatch C = convolve(A, B, 100000000LL, &path);
    CHECK(path == "direct");
    CHECK(C.x0 == 1);
    REQUIRE(C.ncols() == 2);

    // ([1, 2i] conv [i, 2]) * dxi*dtau = [i, 0, 4i] * 0.125 at tau index 3
    REQUIRE(C.cols[0].runs.size() == 1);
    REQUIRE(C.cols[0].runs[0].t0 == 3);
    REQUIRE(C.cols[0].runs[0].v.size() == 3);
    CHECK(std::abs(C.cols[0].runs[0].v[0] - cplx{0.0, 0.125}) < 1e-15);
    CHECK(std::abs(C.cols[0].runs[0].v[1]) < 1e-15);
    CHECK(std::abs(C.cols[0].runs[0].v[2] - cplx{0.0, 0.5}) < 1e-15);

    // ([3] conv [i, 2]) * 0.125 = [0.375i, 0.75] at tau index 2
    REQUIRE(C.cols[1].runs.size() == 1);
    REQUIRE(C.cols[1].runs[0].t0 == 2);
    REQUIRE(C.cols[1].runs[0].v.size() == 2);
    CHECK(std::abs(C.cols[1].runs[0].v[0] - cplx{0.0, 0.375}) < 1e-15);
    CHECK(std::abs(C.cols[1].runs[0].v[1] - cplx{0.75, 0.0}) < 1e-15);

    CHECK_THROWS_AS(convolve(A, FreqPatch{0.125, 0.5, 0, {}}), std::logic_error);
}

TEST_CASE("patch sum accumulates overlapping columns") {
    FreqPatch A;
    A.x0 = 0;
    A.cols.resize(1);
    A.cols[0].runs = {PatchRun{0, {cplx{1.0, 0.0}, cplx{2.0, 0.0}}}};
    FreqPatch B = A;
    B.cols[0].runs = {PatchRun{1, {cplx{10.0, 0.0}}}};
    // far-away second run stays its own island
    B.cols[0].runs.push_back(PatchRun{100, {cplx{4.0, 0.0}}});
    std::vector<const FreqPatch*> parts{&A, &B};
    FreqPatch S = patch_sum(parts);
    REQUIRE(S.ncols() == 1);
    REQUIRE(S.cols[0].runs.size() == 2);
    REQUIRE(S.cols[0].runs[0].t0 == 0);
    REQUIRE(S.cols[0].runs[0].v.size() == 2);
    CHECK(S.cols[0].runs[0].v[0] == cplx{1.0, 0.0});
    CHECK(S.cols[0].runs[0].v[1] == cplx{12.0, 0.0});
    REQUIRE(S.cols[0].runs[1].t0 == 100);
    CHECK(S.cols[0].runs[1].v[0] == cplx{4.0, 0.0});
}

TEST_CASE("direct and FFT convolution paths agree") {
    DetRng rng(1801);
    const double dxi = std::exp2(-6.0), dtau = 0.25;
    FreqPatch f1 = dkj_bump(-2, 6, +1, dxi, dtau, rng);
    FreqPatch f2 = dkj_bump(-2, 6, -1, dxi, dtau, rng);
    std::string p_direct, p_fft;
    FreqPatch cd = convolve(f1, f2, 100000000LL, &p_direct);
    FreqPatch cf = convolve(f1, f2, 0LL, &p_fft);
    CHECK(p_direct == "direct");
    CHECK(p_fft == "mixed-fft");
    double diff = patch_diff(cd, cf);
    CHECK(diff < 1e-12 * patch_max_abs(cd));
}

TEST_CASE("patch convolution realizes the product of lattice fields") {
    // For fields on a common lattice, the transform of the pointwise product
    // equals the frequency convolution divided by (2 pi)^2, provided the
    // covering lattice is large enough that nothing wraps around.
    DetRng rng(1905);
    const double dxi = std::exp2(-4.0), dtau = 0.5;
    FreqPatch pa = dkj_bump(2, 1, +1, dxi, dtau, rng, PhaseMode::per_cell);
    FreqPatch pb = dkj_bump(3, 2, -1, dxi, dtau, rng, PhaseMode::per_cell);
    FreqPatch pc = convolve(pa, pb);

    long long mmax = 1, tmax = 2;
    grow_extent(pa, mmax, tmax);
    grow_extent(pb, mmax, tmax);
    grow_extent(pc, mmax, tmax);
    long long nx = 4;
    while (nx / 2 - 1 < mmax + 2) nx *= 2;
    long long nt = 2 * tmax + 3;
    FrequencyGrid xg(2.0 * pi / dxi, static_cast<int>(nx));
    TimeGrid tg(pi * static_cast<double>(nt - 1) / (static_cast<double>(nt) * dtau),
                static_cast<int>(nt));
    REQUIRE(xg.dxi() == Catch::Approx(dxi).epsilon(1e-14));
    REQUIRE(tg.dtau() == Catch::Approx(dtau).epsilon(1e-14));

    SpaceTimeField fa(xg, tg, Rep::frequency), fb(xg, tg, Rep::frequency);
    SpaceTimeField fc(xg, tg, Rep::frequency);
    embed(pa, fa);
    embed(pb, fb);
    embed(pc, fc);

    SpaceTimeField u = to_physical(fa), v = to_physical(fb);
    SpaceTimeField w = u;
    for (size_t i = 0; i < w.data.size(); ++i) w.data[i] *= v.data[i];
    SpaceTimeField wf = to_frequency(w);

    const double scale = 1.0 / (4.0 * pi * pi);
    double maxdiff = 0.0, ref = scale * patch_max_abs(pc);
    for (size_t i = 0; i < wf.data.size(); ++i)
        maxdiff = std::max(maxdiff, std::abs(wf.data[i] - scale * fc.data[i]));
    CHECK(maxdiff < 1e-9 * ref);
}

TEST_CASE("exact modulation evaluation survives a high shell") {
    FreqPatch p;
    p.dxi = 0.0625;
    p.dtau = 0.5; // dtau/dxi^2 = 128, integer arithmetic applies
    MuEval mu(p);
    // xi = 2^20, omega = -2^40; tau = -2^40 + 2.5. The two big halves cancel
    // in integers, leaving mu = 2.5 exactly.
    long long m = 1LL << 24;
    long long n = -(1LL << 41) + 5;
    CHECK(mu(m, n) == 2.5);
    // Mirror column: omega(-xi) = +xi^2.
    CHECK(mu(-m, (1LL << 41) + 5) == 2.5);

    FreqPatch q;
    q.dxi = 0.3; // non-integer ratio, plain evaluation
    q.dtau = 0.5;
    MuEval mu2(q);
    CHECK(mu2(4, 10) == Catch::Approx(0.5 * 10 - omega(0.3 * 4)).epsilon(1e-15));
}

TEST_CASE("patch modulation norm matches the lattice norm") {
    DetRng rng(2101);
    FreqPatch p = dkj_bump(3, 2, +1, std::exp2(-4.0), 0.5, rng, PhaseMode::per_cell);
    double direct = xk_of_patch(p, 3);
    double lattice = xk_norm(materialize(p), 3).value;
    CHECK(direct == Catch::Approx(lattice).epsilon(1e-12));
    CHECK(direct > 0.0);

    FreqPatch off = p;
    off.x0 += 200; // push live columns out of the shell
    CHECK_THROWS_AS(xk_of_patch(off, 3), std::domain_error);
}

TEST_CASE("lemma33 witness measures a finite constant at shell twenty") {
    DetRng rng(7001);
    const double dxi = std::exp2(-4.0), dtau = 0.5;
    BumpPair high = shell_band_bump(20, +1, dxi, dtau, 16.0, rng);
    FreqPatch low = low_bump(dxi, dtau, rng);

    BilinearResult r = lemma33_witness(high.f, low, 20, 20);
    CHECK(r.path == "direct");
    CHECK(r.lhs > 0.0);
    CHECK(r.rhs > 0.0);
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio > 0.0);
    CHECK_FALSE(r.violation);

    // deterministic re-run
    DetRng rng2(7001);
    BumpPair high2 = shell_band_bump(20, +1, dxi, dtau, 16.0, rng2);
    FreqPatch low2 = low_bump(dxi, dtau, rng2);
    BilinearResult r2 = lemma33_witness(high2.f, low2, 20, 20);
    CHECK(r2.ratio == r.ratio);

    CHECK_THROWS_AS(lemma33_witness(high.f, low, 19, 19), std::domain_error);
    CHECK_THROWS_AS(lemma33_witness(high.f, low, 20, 23), std::domain_error);
    DetRng rng3(7002);
    FreqPatch mid = dkj_bump(3, 1, +1, dxi, dtau, rng3);
    CHECK_THROWS_AS(lemma33_witness(high.f, mid, 20, 20), std::domain_error);

    FreqPatch zero;
    zero.dxi = dxi;
    zero.dtau = dtau;
    BilinearResult rz = lemma33_witness(high.f, zero, 20, 20);
    CHECK(rz.lhs == 0.0);
    CHECK(rz.rhs == 0.0);
    CHECK(rz.ratio == 0.0);
    CHECK_FALSE(rz.violation);
}

TEST_CASE("lemma34 witness combines several low bands") {
    DetRng rng(7301);
    const double dxi = std::exp2(-4.0), dtau = 0.5;
    BumpPair high = shell_band_bump(20, +1, dxi, dtau, 16.0, rng);
    BumpPair b3 = shell_band_bump(3, -1, dxi, dtau, 4.0, rng);
    BumpPair b5 = shell_band_bump(5, -1, dxi, dtau, 4.0, rng);
    std::vector<ModBand> lows{{3, b3.f, b3.weighted}, {5, b5.f, b5.weighted}};

    BilinearResult r = lemma34_witness(high.f, 20, 20, lows);
    CHECK(r.lhs > 0.0);
    CHECK(r.rhs > 0.0);
    CHECK(std::isfinite(r.ratio));
    CHECK_FALSE(r.violation);

    std::vector<ModBand> bad{{11, b3.f, b3.weighted}};
    CHECK_THROWS_AS(lemma34_witness(high.f, 20, 20, bad), std::domain_error);
}

TEST_CASE("lemma35 witness handles comparable shells") {
    DetRng rng(7501);
    const double dxi = std::exp2(-4.0), dtau = 0.5;
    // Both factors in I_5 with the sum near 1.2 * 2^5, inside the shell cutoff.
    BumpPair b1 = shell_band_bump_at(5, 19.2, 1.5, dxi, dtau, 0.0, 8.0, rng);
    BumpPair b2 = shell_band_bump_at(5, 18.8, 1.5, dxi, dtau, 0.0, 8.0, rng);
    BilinearResult r = lemma35_witness(b1.f, b2.f, 5, 5, 5);
    CHECK(r.lhs > 0.0);
    CHECK(r.rhs > 0.0);
    CHECK(std::isfinite(r.ratio));
    CHECK_FALSE(r.violation);

    FreqPatch e1, e2;
    CHECK_THROWS_AS(lemma35_witness(e1, e2, 0, 0, 31), std::domain_error);
}

TEST_CASE("lemma36 gain tracks the quarter-power of the output shell") {
    // The three runs are exact dyadic dilations of one another: dxi ~ 2^k,
    // dtau ~ 4^k, and the modulation window (center and halfwidth) ~ 4^k, so
    // every patch has the same integer support and cell values across k. The
    // window sits at a positive offset from the dispersion graph, keeping all
    // modulation mass in bands j >= 1 whose weights dilate cleanly; band 0 has
    // a weight floor that would break the scaling. Any drift in
    // ratio * 2^{k/4} then comes from the estimate itself, not the inputs.
    double r4min = 1e300, r4max = 0.0;
    for (int k : {4, 6, 8}) {
        DetRng rng(911);
        const double dxi = std::exp2(k - 5), dtau = std::exp2(2 * k - 14);
        const double mc0 = 1.25 * std::exp2(2 * k - 6), mhw = std::exp2(2 * k - 7);
        const double c1 = 1.05 * std::exp2(k + 10);
        const double c2 = -(c1 - 1.1 * std::exp2(k));
        BumpPair b1 = shell_band_bump_at(k + 10, c1, 2.5 * dxi, dxi, dtau, mc0, mhw, rng);
        BumpPair b2 = shell_band_bump_at(k + 10, c2, 2.5 * dxi, dxi, dtau, mc0, mhw, rng);
        BilinearResult r = lemma36_witness(b1.f, b2.f, k, k + 10, k + 10);
        CHECK(r.path == "direct");
        CHECK(r.lhs > 0.0);
        CHECK(std::isfinite(r.ratio));
        CHECK_FALSE(r.violation);
        double r4 = r.ratio * std::exp2(0.25 * k);
        r4min = std::min(r4min, r4);
        r4max = std::max(r4max, r4);
    }
    CAPTURE(r4min, r4max);
    CHECK(r4max / r4min < 4.0);

    FreqPatch e1, e2;
    CHECK_THROWS_AS(lemma36_witness(e1, e2, 4, 13, 14), std::domain_error);
}

TEST_CASE("lemma37 support trichotomy holds across band pairs") {
    const double dxi = std::exp2(-6.0), dtau = 0.25;
    const int k = 8, k1 = -2, k2 = 8;
    int casenum = 0;
    for (auto [j1, j2] : std::vector<std::pair<int, int>>{{0, 0}, {3, 6}, {5, 10}, {0, 9}}) {
        DetRng rng(1300 + 17 * ++casenum);
        FreqPatch f1 = dkj_bump(k1, j1, +1, dxi, dtau, rng);
        FreqPatch f2 = dkj_bump(k2, j2, +1, dxi, dtau, rng);
        BilinearResult r = lemma37_witness(f1, k1, j1, f2, k2, j2, k);
        CAPTURE(j1, j2);
        CHECK(r.support_ok);
        CHECK(r.scanned_cells > 0);
        CHECK(r.lhs > 0.0);
        CHECK(r.rhs > 0.0);
        CHECK(std::isfinite(r.ratio));
        CHECK(r.aux_ratio > 0.0);
        CHECK_FALSE(r.violation);
    }

    DetRng rng(1399);
    FreqPatch f1 = dkj_bump(k1, 3, +1, dxi, dtau, rng);
    FreqPatch f2 = dkj_bump(k2, 6, +1, dxi, dtau, rng);
    // claimed band differs from the actual support
    CHECK_THROWS_AS(lemma37_witness(f1, k1, 5, f2, k2, 6, k), std::domain_error);
    // k1 too high
    CHECK_THROWS_AS(lemma37_witness(f1, 2, 3, f2, k2, 6, k), std::domain_error);
    // shells not separated
    CHECK_THROWS_AS(lemma37_witness(f1, k1, 3, f2, 3, 6, 3), std::domain_error);
}

TEST_CASE("prop38 witness compares the product derivative to the norm pair") {
    FrequencyGrid xg(16.0, 64);
    TimeGrid tg(1.0, 33);
    DetRng rng(4200);
    SpaceTimeField uf(xg, tg, Rep::frequency), vf(xg, tg, Rep::frequency);
    for (int m = -8; m <= 8; ++m)
        for (int it = 0; it < tg.n_t; ++it) {
            double w = std::exp2(-std::abs(m)) * std::exp2(-std::abs(tg.mode_of(it)) / 3.0);
            uf.at(xg.index_of(m), it) = w * rng.cnormal();
            vf.at(xg.index_of(m), it) = w * rng.cnormal();
        }
    SpaceTimeField u = to_physical(uf), v = to_physical(vf);

    NormOptions opts;
    opts.split_budget = 120;
    BilinearResult r = prop38_witness(u, v, 1.0, opts);
    CHECK(r.path == "lattice");
    CHECK(r.lhs > 0.0);
    CHECK(r.rhs > 0.0);
    CHECK(std::isfinite(r.ratio));
    CHECK_FALSE(r.violation);

    CHECK_THROWS_AS(prop38_witness(u, v, -0.5, opts), std::domain_error);
    CHECK_THROWS_AS(prop38_witness(uf, v, 1.0, opts), std::logic_error);
    FrequencyGrid xg2(16.0, 128);
    SpaceTimeField w2(xg2, tg, Rep::physical);
    CHECK_THROWS_AS(prop38_witness(u, w2, 1.0, opts), std::domain_error);
}

TEST_CASE("bilinear kinds map from tokens") {
    CHECK(bilinear_kind_from_token("Lemma33") == BilinearKind::lemma33);
    CHECK(bilinear_kind_from_token("Lemma34") == BilinearKind::lemma34);
    CHECK(bilinear_kind_from_token("Lemma35") == BilinearKind::lemma35);
    CHECK(bilinear_kind_from_token("Lemma36") == BilinearKind::lemma36);
    CHECK(bilinear_kind_from_token("Lemma37") == BilinearKind::lemma37);
    CHECK(bilinear_kind_from_token("Prop38") == BilinearKind::prop38);
    CHECK_THROWS_AS(bilinear_kind_from_token("Lemma99"), std::domain_error);
}
