#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "bolab/core/dispersion.hpp"
#include "bolab/core/pde_residual.hpp"
#include "bolab/core/rng.hpp"
#include "bolab/core/spacetime_field.hpp"
#include "bolab/core/spectral_field.hpp"

using namespace bolab;

namespace {

std::vector<cplx> mode(const FrequencyGrid& g, int m, cplx amp = {1.0, 0.0}) {
    std::vector<cplx> s(g.n);
    double xi = g.dxi() * m;
    for (int j = 0; j < g.n; ++j) {
        double ph = xi * g.x_at(j);
        s[j] = amp * cplx{std::cos(ph), std::sin(ph)};
    }
    return s;
}

std::vector<cplx> random_samples(const FrequencyGrid& g, std::uint64_t seed) {
    DetRng rng(seed);
    std::vector<cplx> s(g.n);
    for (auto& v : s) v = rng.cnormal();
    return s;
}

} // namespace

TEST_CASE("single mode lands on one cell with value L") {
    FrequencyGrid g(64.0, 256);
    auto f = forward_transform(g, mode(g, 3));
    CHECK(std::abs(f.at_mode(3) - cplx{64.0, 0.0}) < 1e-9);
    double off = 0.0;
    for (int i = 0; i < g.n; ++i)
        if (i != g.index_of(3)) off = std::max(off, std::abs(f.coef[i]));
    CHECK(off < 1e-9);
}

TEST_CASE("transform round trip") {
    FrequencyGrid g(64.0, 512);
    auto s = random_samples(g, 11);
    // zero the Nyquist content so the round trip is exact
    auto f = forward_transform(g, s);
    auto s2 = inverse_transform(f);
    auto f2 = forward_transform(g, s2);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.n; ++i) {
        num += std::norm(f2.coef[i] - f.coef[i]);
        den += std::norm(f.coef[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-12);
}

TEST_CASE("lattice Plancherel") {
    FrequencyGrid g(32.0, 128);
    auto f = forward_transform(g, random_samples(g, 5));
    auto s = inverse_transform(f);
    CHECK(l2(f) == Catch::Approx(l2_physical(g, s)).epsilon(1e-12));
}

TEST_CASE("Hilbert transform maps cos to sin") {
    FrequencyGrid g(64.0, 256);
    std::vector<cplx> s(g.n);
    double xi = g.dxi() * 5;
    for (int j = 0; j < g.n; ++j) s[j] = std::cos(xi * g.x_at(j));
    auto hs = inverse_transform(hilbert(forward_transform(g, s)));
    for (int j = 0; j < g.n; j += 17) {
        CHECK(std::abs(hs[j].real() - std::sin(xi * g.x_at(j))) < 1e-10);
        CHECK(std::abs(hs[j].imag()) < 1e-12);
    }
}

TEST_CASE("Hilbert squared is minus identity off the zero mode") {
    FrequencyGrid g(64.0, 256);
    auto f = forward_transform(g, random_samples(g, 7));
    auto hh = hilbert(hilbert(f));
    for (int i = 0; i < g.n; ++i) {
        double xi = g.xi_at(i);
        if (xi == 0.0 || i == g.nyquist_index())
            CHECK(std::abs(hh.coef[i]) == 0.0);
        else
            CHECK(hh.coef[i] == -f.coef[i]); // multiplication by -i twice is exact
    }
}

TEST_CASE("Hilbert transform of real data is real") {
    FrequencyGrid g(64.0, 256);
    DetRng rng(9);
    std::vector<cplx> s(g.n);
    for (auto& v : s) v = cplx{rng.normal(), 0.0};
    auto hs = inverse_transform(hilbert(forward_transform(g, s)));
    double worst = 0.0;
    for (auto& v : hs) worst = std::max(worst, std::fabs(v.imag()));
    CHECK(worst < 1e-12);
}

TEST_CASE("free evolution is unitary and satisfies the group law") {
    FrequencyGrid g(64.0, 512);
    auto f = forward_transform(g, random_samples(g, 13));
    auto wf = free_evolution(f, 0.7);
    double drift = 0.0;
    for (int i = 0; i < g.n; ++i)
        drift = std::max(drift, std::fabs(std::abs(wf.coef[i]) - std::abs(f.coef[i])));
    CHECK(drift < 1e-13 * l2_spectrum(f));

    auto ab = free_evolution(free_evolution(f, 0.3), -0.9);
    auto once = free_evolution(f, -0.6);
    double err = 0.0, den = 0.0;
    for (int i = 0; i < g.n; ++i) {
        err += std::norm(ab.coef[i] - once.coef[i]);
        den += std::norm(f.coef[i]);
    }
    CHECK(std::sqrt(err / den) < 1e-12);

    auto id = free_evolution(f, 0.0);
    for (int i = 0; i < g.n; ++i) CHECK(id.coef[i] == f.coef[i]);
}

TEST_CASE("free evolution phase on a single mode") {
    FrequencyGrid g(64.0, 256);
    double t = 0.37;
    auto f = forward_transform(g, mode(g, 4));
    auto wf = free_evolution(f, t);
    double xi = g.dxi() * 4;
    cplx expect = cplx{64.0, 0.0} * std::exp(cplx{0.0, t * omega(xi)});
    CHECK(std::abs(wf.at_mode(4) - expect) < 1e-10);
}

TEST_CASE("x derivative of a single mode") {
    FrequencyGrid g(64.0, 256);
    auto f = x_derivative(forward_transform(g, mode(g, -6)));
    double xi = -6.0 * g.dxi();
    CHECK(std::abs(f.at_mode(-6) - cplx{0.0, xi} * cplx{64.0, 0.0}) < 1e-9);
}

TEST_CASE("dilation: identity at lambda 1, exact samples for a Gaussian") {
    FrequencyGrid g(128.0, 512);
    std::vector<cplx> s(g.n);
    double sig = 0.7;
    for (int j = 0; j < g.n; ++j) {
        double x = g.x_at(j);
        s[j] = std::exp(-x * x / (2.0 * sig * sig));
    }
    auto f = forward_transform(g, s);
    auto same = dilate(f, 1.0);
    for (int i = 0; i < g.n; ++i) CHECK(same.coef[i] == f.coef[i]);

    for (double lam : {0.5, 0.25, 0.125}) {
        auto d = dilate(f, lam);
        auto ds = inverse_transform(d);
        double worst = 0.0;
        for (int j = 0; j < g.n; ++j) {
            double x = g.x_at(j);
            double expect = lam * std::exp(-(lam * x) * (lam * x) / (2.0 * sig * sig));
            worst = std::max(worst, std::abs(ds[j] - cplx{expect, 0.0}));
        }
        CHECK(worst < 1e-10);

        double l1_orig = 0.0, l1_dil = 0.0;
        for (int j = 0; j < g.n; ++j) {
            l1_orig += std::abs(s[j]);
            l1_dil += std::abs(ds[j]);
        }
        CHECK(std::fabs(l1_dil - l1_orig) * g.dx() < 1e-8);
    }
}

TEST_CASE("dispersive identity gap vanishes") {
    CHECK(dispersive_gap(1.0, 1.0) == 0.0);
    CHECK(dispersive_gap(2.0, -0.5) == 0.0);
    CHECK(dispersive_gap(-3.0, -4.0) == 0.0);
    DetRng rng(21);
    double worst = 0.0;
    for (int i = 0; i < 200000; ++i) {
        double a = rng.uniform(-100.0, 100.0), b = rng.uniform(-100.0, 100.0);
        double tol = 1e-9 * (1.0 + std::fabs(a) + std::fabs(b)) * (1.0 + std::fabs(a) + std::fabs(b));
        worst = std::max(worst, dispersive_gap(a, b) / tol);
    }
    CHECK(worst < 1.0);
}

TEST_CASE("space-time transform round trip and Plancherel factor") {
    FrequencyGrid xg(32.0, 64);
    TimeGrid tg(1.0, 65);
    SpaceTimeField u(xg, tg, Rep::physical);
    DetRng rng(31);
    for (auto& v : u.data) v = rng.cnormal();
    auto f = to_frequency(u);
    auto u2 = to_physical(f);
    // the transform removes Nyquist-row content, so compare after one pass
    auto f2 = to_frequency(u2);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < f.data.size(); ++i) {
        num += std::norm(f2.data[i] - f.data[i]);
        den += std::norm(f.data[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-12);
    CHECK(l2_frequency(f) == Catch::Approx(2.0 * pi * l2_physical(u2)).epsilon(1e-12));
}

TEST_CASE("residual of a free single real mode scales quadratically") {
    FrequencyGrid xg(64.0, 128);
    TimeGrid tg(1.0, 257);
    double xi = 8.0 * xg.dxi();
    auto run = [&](double a) {
        SpaceTimeField u(xg, tg, Rep::physical);
        for (int ix = 0; ix < xg.n; ++ix)
            for (int it = 0; it < tg.n_t; ++it) {
                double ph = xi * xg.x_at(ix) + omega(xi) * tg.t_at(it);
                u.at(ix, it) = a * std::cos(ph);
            }
        return pde_residual(u).l2;
    };
    double r1 = run(1e-2), r2 = run(5e-3);
    CHECK(r1 / r2 == Catch::Approx(4.0).epsilon(1e-6));
}
