#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bolab/counterexamples/prop51.hpp"
#include "bolab/counterexamples/prop52.hpp"
#include "bolab/counterexamples/report.hpp"
#include "bolab/witness/bilinear.hpp"
#include "bolab/witness/bumps.hpp"
#include "bolab/witness/patch.hpp"

using namespace bolab;

namespace {

// Dense lattice version of a separable block: one run per column following
// the dispersion curve, profile sampled through the exact modulation values.
FreqPatch densify(const HighBlock& hb, double dtau) {
    FreqPatch p;
    p.dxi = hb.dxi;
    p.dtau = dtau;
    p.x0 = hb.x0;
    p.cols.resize(hb.a.size());
    MuEval mu(p);
    const double half = hb.support_mu();
    for (int i = 0; i < p.ncols(); ++i) {
        double ai = hb.a[static_cast<size_t>(i)];
        if (ai == 0.0) continue;
        double w0 = omega(p.xi_of(i));
        long long nlo = static_cast<long long>(std::ceil((w0 - half) / dtau));
        long long nhi = static_cast<long long>(std::floor((w0 + half) / dtau));
        PatchRun run;
        run.t0 = nlo;
        run.v.resize(static_cast<size_t>(nhi - nlo + 1));
        for (long long n = nlo; n <= nhi; ++n)
            run.v[static_cast<size_t>(n - nlo)] = cplx{ai * hb.profile(mu(p.x0 + i, n)), 0.0};
        p.cols[static_cast<size_t>(i)].runs.push_back(std::move(run));
    }
    return p;
}

} // namespace

TEST_CASE("separable block: profile cutoffs and banded norm") {
    HighBlock hb;
    hb.k = 5;
    hb.dxi = 0.125;
    hb.mu_scale = 512.0;
    hb.x0 = 244; // xi = 30.5 .. 33.5
    hb.a.resize(25);
    for (size_t i = 0; i < hb.a.size(); ++i)
        hb.a[i] = psi(hb.xi_of(static_cast<long long>(i)) - 32.0);

    CHECK(hb.profile(0.0) == 1.0);
    CHECK(hb.profile(1.25 * 512.0) == 1.0);   // plateau edge
    CHECK(hb.profile(1.6 * 512.0) == 0.0);    // support edge
    CHECK(hb.profile(1.59 * 512.0) > 0.0);
    CHECK(hb.profile_weighted(0.0) == 1.0);   // second derivative vanishes on the plateau
    CHECK(hb.support_mu() == 1.6 * 512.0);

    double plain = xk_of_high_block(hb, false);
    double weighted = xk_of_high_block(hb, true);
    CHECK(plain > 0.0);
    // the tau-derivative correction is O(mu_scale^-2)
    CHECK(weighted == Catch::Approx(plain).epsilon(1.0e-5));

    HighBlock empty = hb;
    std::fill(empty.a.begin(), empty.a.end(), 0.0);
    CHECK(xk_of_high_block(empty, true) == 0.0);

    HighBlock stray = hb;
    stray.x0 = 60; // xi = 7.5, outside shell 5
    CHECK_THROWS_AS(xk_of_high_block(stray, false), std::domain_error);
}

TEST_CASE("two-scale convolution norm matches a dense evaluation") {
    // small enough that the block fits on the lattice outright; the two-scale
    // path still splits into flat and sampled bands, so both branches are
    // covered by the comparison
    HighBlock hb;
    hb.k = 5;
    hb.dxi = 0.125;
    hb.mu_scale = 512.0;
    hb.x0 = 244;
    hb.a.resize(25);
    for (size_t i = 0; i < hb.a.size(); ++i)
        hb.a[i] = psi(hb.xi_of(static_cast<long long>(i)) - 32.0);

    FreqPatch unit;
    unit.dxi = 0.125;
    unit.dtau = 0.25; // dtau/dxi^2 = 16
    unit.x0 = 13;     // xi = 1.625 .. 2.375
    unit.cols.resize(7);
    for (int i = 0; i < unit.ncols(); ++i) {
        double ax = psi(4.0 * (unit.xi_of(i) - 2.0));
        if (ax == 0.0) continue;
        PatchRun run;
        run.t0 = -6;
        run.v.resize(13);
        for (long long n = -6; n <= 6; ++n)
            run.v[static_cast<size_t>(n + 6)] = cplx{ax * psi(unit.tau_of(n)), 0.0};
        unit.cols[static_cast<size_t>(i)].runs.push_back(std::move(run));
    }

    ConvNorm cn = weighted_conv_xk(unit, hb, 5);
    CHECK(cn.flat_bands == 9);   // 1.6 * 2^8 = 409.6 under the ~473 margin, 2^9 over
    CHECK(cn.direct_bands == 2); // bands 9 and 10 reach the profile tails
    CHECK(cn.flat_margin > std::exp2(8.0));
    CHECK(cn.flat_margin < std::exp2(9.0));

    FreqPatch conv = convolve(unit, densify(hb, 0.25));
    detail::mask_eta_shell(conv, 5);
    detail::apply_inverse_dispersive(conv, 5);
    double dense = xk_of_patch(conv, 5);
    // continuum band quadrature against the dtau = 1/4 lattice sum
    CHECK(cn.value == Catch::Approx(dense).epsilon(0.02));

    FreqPatch coarse = unit;
    coarse.dxi = 0.0625;
    CHECK_THROWS_AS(weighted_conv_xk(coarse, hb, 5), std::logic_error);

    FreqPatch tainted = unit;
    tainted.cols[3].runs[0].v[6] = cplx{0.5, 0.5};
    CHECK_THROWS_AS(weighted_conv_xk(tainted, hb, 5), std::logic_error);
}

TEST_CASE("interacting pair sits on its stated supports") {
    Prop51Fields F = prop51_fields(8);

    patch_cells(F.f1, [&](int i, long long n, const cplx& z) {
        CHECK(std::fabs(F.f1.xi_of(i) - 2.0) <= 0.16);
        CHECK(std::fabs(F.f1.tau_of(n)) <= 1.5);
        CHECK(z.imag() == 0.0);
    });
    // column peak: psi(0) = 1 twice over
    CHECK(patch_value(F.f1, 256, 0).real() == Catch::Approx(prop51_unit_amp).epsilon(1.0e-14));
    CHECK(patch_value(F.f1w, 256, 0).real() == Catch::Approx(prop51_unit_amp).epsilon(1.0e-14));

    double c = 256.0;
    for (size_t i = 0; i < F.fk.a.size(); ++i)
        if (F.fk.a[i] != 0.0) CHECK(std::fabs(F.fk.xi_of(static_cast<long long>(i)) - c) <= 1.6);
    CHECK(F.fk.mu_scale == std::exp2(18.0));

    CHECK(F.f1_norm == Catch::Approx(1.0003052440857136).epsilon(1.0e-10));
    CHECK(F.fk_norm == Catch::Approx(310.71354031202844).epsilon(1.0e-10));

    CHECK_THROWS_AS(prop51_fields(5), std::domain_error);
    CHECK_THROWS_AS(prop51_fields(17), std::domain_error);
}

TEST_CASE("high-low ratio at one shell") {
    Prop51Result r = prop51_ratio(8);
    CHECK(r.lhs == Catch::Approx(0.0080842415729981826).epsilon(1.0e-10));
    CHECK(r.rhs == Catch::Approx(310.80838378255982).epsilon(1.0e-10));
    CHECK(r.ratio == Catch::Approx(2.6010371646389959e-05).epsilon(1.0e-10));
    CHECK(r.flat_bands == 18);
    CHECK(r.direct_bands == 2);

    // on the resonant box the convolution is constant: it must equal the
    // high amplitude times the unit block's mass
    Prop51Fields F = prop51_fields(8);
    double cellsum = 0.0;
    patch_cells(F.f1, [&](int, long long, const cplx& z) { cellsum += z.real(); });
    double expected = cellsum * F.f1.cell() * prop51_high_amp;
    CHECK(r.region_min == Catch::Approx(expected).epsilon(1.0e-12));
    CHECK(r.region_min > 0.0);
}

TEST_CASE("ratio sweep grows linearly with the shell index") {
    CounterexampleReport rep = prop51_report({8, 10, 12});
    REQUIRE(rep.k == std::vector<int>{8, 10, 12});
    CHECK(rep.pass);
    CHECK(rep.ratio[0] == Catch::Approx(2.6010371646389959e-05).epsilon(1.0e-10));
    CHECK(rep.ratio[1] == Catch::Approx(3.5467301847526355e-05).epsilon(1.0e-10));
    CHECK(rep.ratio[2] == Catch::Approx(4.6144605371622525e-05).epsilon(1.0e-10));
    CHECK(rep.ratio[1] > rep.ratio[0]);
    CHECK(rep.ratio[2] > rep.ratio[1]);
    CHECK(rep.slope == Catch::Approx(5.0335584313081414e-06).epsilon(1.0e-10));

    // the box value is set by the unit block's mass, independent of k
    REQUIRE(rep.extra.count("region_min") == 1);
    for (double m : rep.extra.at("region_min"))
        CHECK(m == Catch::Approx(6.371978557902331e-07).epsilon(1.0e-12));

    std::string csv = rep.to_csv();
    CHECK(csv.rfind("k,lhs,rhs,ratio,region_min\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv == rep.to_csv()); // deterministic

    auto j = rep.to_json();
    CHECK(j["name"] == "prop51");
    CHECK(j["pass"] == true);
    CHECK(j["k"].size() == 3);
    CHECK(j.contains("region_min"));

    CHECK_THROWS_AS(prop51_report({10, 8}), std::domain_error);
    CHECK_FALSE(prop51_report({}).pass);
}

TEST_CASE("opposite-shell pair and the tilted low-frequency template") {
    Prop52Fields F = prop52_fields(8);

    MuEval mu_p(F.u_plus);
    patch_cells(F.u_plus, [&](int i, long long n, const cplx& z) {
        CHECK(std::fabs(F.u_plus.xi_of(i) - 256.0) <= 6.4);
        CHECK(std::fabs(mu_p(F.u_plus.x0 + i, n)) <= 1.6 * 1024.0);
        CHECK(z.imag() == 0.0);
    });
    for (int i = 0; i < F.u_minus.ncols(); ++i)
        CHECK(F.u_minus.xi_of(i) < 0.0);

    // sharp half-line cutoff: no column at xi <= 0 exists at all
    CHECK(F.v.x0 > 0);
    patch_cells(F.v, [&](int i, long long n, const cplx&) {
        double xi = F.v.xi_of(i);
        CHECK(xi > 0.0);
        CHECK(xi <= 3.2);
        CHECK(std::fabs(F.v.tau_of(n) + 512.0 * xi) <= 1.6 * 1024.0);
    });

    CHECK(F.u_plus_norm == Catch::Approx(0.92905355474649609).epsilon(1.0e-10));
    CHECK(F.u_minus_norm == Catch::Approx(F.u_plus_norm).epsilon(1.0e-12));
    CHECK(F.v_norm == Catch::Approx(0.43437832217049654).epsilon(1.0e-10));
    CHECK(F.v_nominal == 0.5625); // 2^-4 + 1/2, exact

    CHECK_THROWS_AS(prop52_fields(5), std::domain_error);
    CHECK_THROWS_AS(prop52_fields(17), std::domain_error);
}

TEST_CASE("resonance identities and interaction outputs") {
    Prop52Result r8 = prop52_measure(8);
    // lattice nodes and dispersion values are dyadic rationals small enough
    // that the identity remainders evaluate exactly; 8.75 is the box corner
    CHECK(r8.resonance_max_low == 8.75);
    CHECK(r8.resonance_max_high == 8.75);
    CHECK(r8.beta_gap == 0.0);
    CHECK(r8.low_region_min == Catch::Approx(0.0001496334994969397).epsilon(1.0e-10));
    CHECK(r8.high_region_min == Catch::Approx(1.7366465330168165e-06).epsilon(1.0e-10));
    CHECK(r8.side_product == Catch::Approx(0.86314050758710048).epsilon(1.0e-10));
    CHECK(r8.side_floor == 0.5625);

    Prop52Result r10 = prop52_measure(10);
    // the low box never moves, so its minimum is k-independent; the shell-k
    // box inherits the 2^-k amplitude of the template, a factor 4 per step
    CHECK(r10.low_region_min == Catch::Approx(r8.low_region_min).epsilon(1.0e-12));
    CHECK(r8.high_region_min / r10.high_region_min == Catch::Approx(4.0).epsilon(1.0e-9));
    CHECK(r10.side_floor == 0.53125);
}

TEST_CASE("floor report stays above one half") {
    CounterexampleReport rep = prop52_report({8, 10});
    REQUIRE(rep.k == std::vector<int>{8, 10});
    CHECK(rep.pass);
    CHECK(rep.rhs[0] == 0.5625);
    CHECK(rep.rhs[1] == 0.53125);
    CHECK(rep.ratio[0] == Catch::Approx(0.86314050758710048 / 0.5625).epsilon(1.0e-10));
    for (double m : rep.extra.at("resonance_max")) CHECK(m == 8.75);
    for (double g : rep.extra.at("beta_gap")) CHECK(g == 0.0);
    for (double m : rep.extra.at("low_region_min")) CHECK(m > 0.0);
    for (double m : rep.extra.at("high_region_min")) CHECK(m > 0.0);

    std::string csv = rep.to_csv();
    CHECK(csv.rfind("k,lhs,rhs,ratio,beta_gap,high_region_min,low_region_min,resonance_max\n", 0) ==
          0);

    CounterexampleReport one = prop52_check(8);
    CHECK(one.name == "prop52");
    REQUIRE(one.k == std::vector<int>{8});
    CHECK(one.pass);

    CHECK_THROWS_AS(prop52_report({10, 8}), std::domain_error);
    CHECK_FALSE(prop52_report({}).pass);
}

TEST_CASE("sigma proxy scales by the shell weight") {
    Prop52Fields F = prop52_fields(8);
    double x = xk_of_patch(F.u_plus, 8);
    CHECK(fsigma_proxy_of_patch(F.u_plus, 8, 0.0) == x);
    CHECK(fsigma_proxy_of_patch(F.u_plus, 8, 0.5) == Catch::Approx(16.0 * x).epsilon(1.0e-14));
    CHECK(fsigma_proxy_of_patch(F.u_plus, 8, -0.5) == Catch::Approx(x / 16.0).epsilon(1.0e-14));
}
