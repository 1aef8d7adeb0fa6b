#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "bolab/core/pde_residual.hpp"
#include "bolab/solver/config.hpp"
#include "bolab/solver/duhamel.hpp"
#include "bolab/solver/picard.hpp"
#include "bolab/solver/reference.hpp"

using namespace bolab;

namespace {

SpectralField slice_spectrum(const SpaceTimeField& u, int it) {
    std::vector<cplx> s(u.nx());
    for (int ix = 0; ix < u.nx(); ++ix) s[ix] = u.at(ix, it);
    return forward_transform(u.xgrid, s);
}

double max_abs(const SpaceTimeField& u) {
    double m = 0.0;
    for (const auto& v : u.data) m = std::max(m, std::abs(v));
    return m;
}

double rel_l2_final(const SpaceTimeField& a, const SpaceTimeField& b) {
    const int it = a.nt() - 1;
    double num = 0.0, den = 0.0;
    for (int ix = 0; ix < a.nx(); ++ix) {
        num += std::norm(a.at(ix, it) - b.at(ix, it));
        den += std::norm(a.at(ix, it));
    }
    return std::sqrt(num / den);
}

} // namespace

TEST_CASE("duhamel of zero and at time zero") {
    FrequencyGrid g(64.0, 64);
    TimeGrid tg(1.0, 33);
    SpaceTimeField z(g, tg, Rep::physical);
    SpaceTimeField dz = duhamel(z);
    CHECK(max_abs(dz) == 0.0);

    SpectralField phi(g);
    phi.at_mode(2) = cplx{0.4, -0.2};
    SpaceTimeField u = free_field(phi, tg);
    SpaceTimeField du = duhamel(u);
    // the integral from 0 to 0 is empty regardless of the integrand
    int c = tg.center_index();
    double m = 0.0;
    for (int ix = 0; ix < g.n; ++ix) m = std::max(m, std::abs(du.at(ix, c)));
    CHECK(m == 0.0);

    SpaceTimeField f = to_frequency(u);
    CHECK_THROWS_AS(duhamel(f), std::logic_error);
}

TEST_CASE("duhamel matches the two-mode closed form") {
    // For data c1 e^{i xi1 x} + c2 e^{i xi2 x} the free evolution squares to
    // three travelling exponentials; for each output frequency X the integral
    //   -(1/2) int_0^t e^{i(t-s) w(X)} (iX) (sum) ds
    // evaluates to -(cp cq / (2L)) (iX) e^{i t w(X)} (e^{i t th} - 1)/(i th)
    // per ordered input pair, th = w(xi_p) + w(xi_q) - w(X). The lattice
    // square is alias-free here, so only the Simpson error remains.
    const double L = 16.0 * pi;
    FrequencyGrid g(L, 64);
    TimeGrid tg(1.0, 129);
    const int m1 = 2, m2 = -5;
    const cplx c1{0.8, 0.1}, c2{-0.3, 0.4};

    SpectralField phi(g);
    phi.at_mode(m1) = c1;
    phi.at_mode(m2) = c2;
    SpaceTimeField u = free_field(phi, tg);
    SpaceTimeField du = duhamel(u, true);

    auto envelope = [&](double t, double th) -> cplx {
        if (th == 0.0) return {t, 0.0};
        cplx num = cplx{std::cos(t * th), std::sin(t * th)} - cplx{1.0, 0.0};
        return num / cplx{0.0, th};
    };
    auto oracle = [&](int mp, int mq, cplx cp, cplx cq, double t) -> cplx {
        double xip = g.dxi() * mp, xiq = g.dxi() * mq;
        double X = xip + xiq;
        double th = omega(xip) + omega(xiq) - omega(X);
        cplx ph{std::cos(t * omega(X)), std::sin(t * omega(X))};
        return -(cp * cq / (2.0 * L)) * cplx{0.0, X} * ph * envelope(t, th);
    };

    double worst = 0.0, off = 0.0, scale = 0.0;
    for (int it = 0; it < tg.n_t; ++it) {
        double t = tg.t_at(it);
        SpectralField s = slice_spectrum(du, it);
        cplx e11 = oracle(m1, m1, c1, c1, t);
        cplx e12 = oracle(m1, m2, c1, c2, t) + oracle(m2, m1, c2, c1, t);
        cplx e22 = oracle(m2, m2, c2, c2, t);
        scale = std::max({scale, std::abs(e11), std::abs(e12), std::abs(e22)});
        worst = std::max({worst, std::abs(s.at_mode(2 * m1) - e11),
                          std::abs(s.at_mode(m1 + m2) - e12), std::abs(s.at_mode(2 * m2) - e22)});
        for (int i = 0; i < g.n; ++i) {
            int m = g.mode_of(i);
            if (m == 2 * m1 || m == m1 + m2 || m == 2 * m2) continue;
            off = std::max(off, std::abs(s.coef[i]));
        }
    }
    CHECK(scale > 1e-4);
    CHECK(worst <= 1e-8 * scale);
    CHECK(off <= 1e-11 * scale);
}

TEST_CASE("picard converges on small data and reports the trace") {
    SolverConfig cfg;
    cfg.period = 64.0;
    cfg.nx = 64;
    cfg.nt = 65;
    cfg.max_iter = 16;
    cfg.tol = 1e-13;

    SpectralField phi(cfg.xgrid());
    phi.at_mode(0) = cplx{0.02, 0.008};
    phi.at_mode(3) = cplx{0.028, 0.016};
    PicardResult r = picard_solve(phi, cfg);

    CHECK(r.trace.data_admissible);
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations <= 12);
    CHECK(r.trace.final_residual <= 1e-9);
    REQUIRE(r.trace.steps.size() >= 5);
    for (const auto& s : r.trace.steps)
        if (s.n >= 2 && s.ratio > 0.0) CHECK(s.ratio <= 0.5);

    ContractionVerdict v = contraction_monitor(r.trace);
    CHECK(v.pass);
    CHECK(v.fitted_ratio <= 0.5);

    // iterate norms stay bounded and the solution carries finite regularity
    double f0max = 0.0;
    for (const auto& s : r.trace.steps) f0max = std::max(f0max, s.f0);
    CHECK(f0max <= 2.0 * r.trace.steps.front().f0);
    CHECK(std::isfinite(fsigma_norm(r.solution, 1.0).value));
    CHECK(std::isfinite(fsigma_norm(r.solution, 2.0).value));

    // conservation of the mean: the zero mode of the nonlinear flux vanishes
    cplx mean0 = slice_spectrum(r.solution, 0).at_mode(0);
    double drift = 0.0;
    for (int it = 1; it < cfg.nt; ++it)
        drift = std::max(drift, std::abs(slice_spectrum(r.solution, it).at_mode(0) - mean0));
    CHECK(drift <= 1e-8 * (1.0 + std::abs(mean0)));

    // the returned M(T) samples match a recomputation and grow with T
    REQUIRE(r.trace.m_times.size() == 8);
    std::vector<double> again = m_curve(r.solution, r.trace.m_times);
    for (size_t i = 0; i < again.size(); ++i) {
        CHECK(again[i] == r.trace.m_values[i]);
        if (i > 0) CHECK(r.trace.m_values[i] >= r.trace.m_values[i - 1] - 1e-8);
    }

    // byte-identical trace on a rerun
    PicardResult r2 = picard_solve(phi, cfg);
    CHECK(r.trace.to_csv() == r2.trace.to_csv());
}

TEST_CASE("picard on zero data converges immediately") {
    SolverConfig cfg;
    cfg.nx = 64;
    cfg.nt = 33;
    SpectralField phi(cfg.xgrid());
    PicardResult r = picard_solve(phi, cfg);
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations == 1);
    CHECK(max_abs(r.solution) == 0.0);
    CHECK(r.trace.final_residual == 0.0);
}

TEST_CASE("picard rejects bad configs and mismatched grids") {
    SolverConfig cfg;
    cfg.nx = 64;
    cfg.nt = 33;
    SpectralField phi(cfg.xgrid());

    SolverConfig bad = cfg;
    bad.nt = 32;
    CHECK_THROWS_AS(picard_solve(phi, bad), std::domain_error);
    bad = cfg;
    bad.half_width = 1.5;
    CHECK_THROWS_AS(picard_solve(phi, bad), std::domain_error);
    bad = cfg;
    bad.nx = 48;
    CHECK_THROWS_AS(picard_solve(phi, bad), std::domain_error);
    bad = cfg;
    bad.max_iter = 0;
    CHECK_THROWS_AS(picard_solve(phi, bad), std::domain_error);

    SpectralField other(FrequencyGrid(64.0, 128));
    CHECK_THROWS_AS(picard_solve(other, cfg), std::domain_error);
}

TEST_CASE("picard flags inadmissible data and detects divergence") {
    SolverConfig cfg;
    cfg.nx = 64;
    cfg.nt = 33;
    cfg.max_iter = 10;

    SpectralField phi(cfg.xgrid());
    phi.at_mode(2) = cplx{400.0, 0.0};
    bool threw = false;
    try {
        picard_solve(phi, cfg);
    } catch (const DivergenceError& e) {
        threw = true;
        CHECK_FALSE(e.trace.data_admissible);
        CHECK(e.trace.phi_h0 > cfg.eps_bar);
        REQUIRE(e.trace.steps.size() >= 4);
        const auto& st = e.trace.steps;
        size_t last = st.size() - 1;
        CHECK(st[last].d_f0 > st[last - 1].d_f0);
        CHECK(st[last - 1].d_f0 > st[last - 2].d_f0);
    }
    CHECK(threw);
}

TEST_CASE("reference integrator is exact on the linear flow") {
    SolverConfig cfg;
    cfg.nx = 64;
    cfg.nt = 65;
    cfg.nonlinear = false;

    SpectralField phi(cfg.xgrid());
    phi.at_mode(1) = cplx{0.3, -0.1};
    phi.at_mode(-7) = cplx{0.2, 0.25};
    SpaceTimeField ref = reference_solve(phi, cfg);
    SpaceTimeField fre = free_field(phi, cfg.tgrid());
    double worst = 0.0;
    for (size_t i = 0; i < ref.data.size(); ++i)
        worst = std::max(worst, std::abs(ref.data[i] - fre.data[i]));
    CHECK(worst <= 1e-12);

    // linear picard run reproduces the free evolution in one step
    PicardResult r = picard_solve(phi, cfg);
    CHECK(r.trace.converged);
    CHECK(r.trace.iterations == 1);
}

TEST_CASE("reference integrator converges at fourth order") {
    SolverConfig cfg;
    cfg.nx = 64;
    cfg.nt = 33;

    SpectralField phi(cfg.xgrid());
    phi.at_mode(2) = cplx{20.0, 0.0};
    phi.at_mode(-1) = cplx{0.0, 8.0};
    cfg.eps_bar = 100.0; // order study only; no smallness needed

    cfg.substeps = 1;
    SpaceTimeField u1 = reference_solve(phi, cfg);
    cfg.substeps = 2;
    SpaceTimeField u2 = reference_solve(phi, cfg);
    cfg.substeps = 4;
    SpaceTimeField u4 = reference_solve(phi, cfg);

    double e12 = 0.0, e24 = 0.0;
    const int it = cfg.nt - 1;
    for (int ix = 0; ix < cfg.nx; ++ix) {
        e12 += std::norm(u1.at(ix, it) - u2.at(ix, it));
        e24 += std::norm(u2.at(ix, it) - u4.at(ix, it));
    }
    double order = 0.5 * std::log2(e12 / e24);
    CAPTURE(e12, e24, order);
    CHECK(order >= 3.7);
    CHECK(order <= 4.3);
}

TEST_CASE("reference integrator detects a blow-up step") {
    SolverConfig cfg;
    cfg.nx = 64;
    cfg.nt = 33;
    SpectralField phi(cfg.xgrid());
    phi.at_mode(3) = cplx{1e6, 0.0};
    CHECK_THROWS_AS(reference_solve(phi, cfg), StabilityError);
}

TEST_CASE("picard and reference solutions agree") {
    SolverConfig cfg;
    cfg.nx = 64;
    cfg.nt = 129;
    cfg.tol = 1e-13;
    cfg.max_iter = 16;

    SpectralField phi(cfg.xgrid());
    phi.at_mode(2) = cplx{0.35, 0.1};
    phi.at_mode(-3) = cplx{-0.15, 0.2};
    PicardResult pr = picard_solve(phi, cfg);
    REQUIRE(pr.trace.converged);

    cfg.substeps = 2;
    SpaceTimeField ref = reference_solve(phi, cfg);
    CHECK(rel_l2_final(pr.solution, ref) <= 1e-6);

    ResidualReport res = pde_residual(pr.solution);
    double amp = max_abs(pr.solution);
    CHECK(res.linf <= 1e-3 * amp); // limited by the nt=129 time stencils
}

TEST_CASE("real data keeps the solution real and conserves the L2 mass") {
    SolverConfig cfg;
    cfg.nx = 64;
    cfg.nt = 65;
    cfg.tol = 1e-13;
    cfg.max_iter = 16;

    SpectralField phi(cfg.xgrid());
    phi.at_mode(0) = cplx{0.03, 0.0};
    phi.at_mode(1) = cplx{0.02, 0.005};
    phi.at_mode(-1) = std::conj(phi.at_mode(1));
    phi.at_mode(4) = cplx{0.04, -0.01};
    phi.at_mode(-4) = std::conj(phi.at_mode(4));
    PicardResult r = picard_solve(phi, cfg);
    REQUIRE(r.trace.converged);

    double imag_max = 0.0;
    for (const auto& v : r.solution.data) imag_max = std::max(imag_max, std::fabs(v.imag()));
    CHECK(imag_max <= 1e-12);

    auto l2_slice = [&](int it) {
        double s = 0.0;
        for (int ix = 0; ix < cfg.nx; ++ix) s += std::norm(r.solution.at(ix, it));
        return s * cfg.xgrid().dx();
    };
    double base = l2_slice(cfg.tgrid().center_index());
    double drift = 0.0;
    for (int it = 0; it < cfg.nt; ++it) drift = std::max(drift, std::fabs(l2_slice(it) - base));
    CHECK(drift <= 1e-6 * base);
}

TEST_CASE("contraction monitor on synthetic traces") {
    IterationTrace t;
    t.steps.push_back({0, 1.0, 0.0, 0.0, 0.0});
    for (int n = 1; n <= 6; ++n)
        t.steps.push_back({n, 1.0, std::exp2(-n), 0.0, n >= 2 ? 0.5 : 0.0});
    ContractionVerdict v = contraction_monitor(t);
    CHECK(v.pass);
    CHECK(v.fitted_ratio == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(v.monotone);

    IterationTrace flat;
    flat.steps.push_back({0, 1.0, 0.0, 0.0, 0.0});
    for (int n = 1; n <= 5; ++n) flat.steps.push_back({n, 1.0, 0.3, 0.0, 1.0});
    ContractionVerdict vf = contraction_monitor(flat);
    CHECK_FALSE(vf.pass);
    CHECK(vf.fitted_ratio == Catch::Approx(1.0).epsilon(1e-12));

    IterationTrace tiny;
    tiny.steps.push_back({0, 1.0, 0.0, 0.0, 0.0});
    tiny.steps.push_back({1, 1.0, 0.5, 0.0, 0.0});
    tiny.steps.push_back({2, 1.0, 0.25, 0.0, 0.5});
    CHECK_THROWS_AS(contraction_monitor(tiny), std::domain_error);

    IterationTrace exact;
    exact.steps.push_back({0, 1.0, 0.0, 0.0, 0.0});
    exact.steps.push_back({1, 1.0, 1e-3, 0.0, 0.0});
    for (int n = 2; n <= 5; ++n) exact.steps.push_back({n, 1.0, 0.0, 0.0, 0.0});
    ContractionVerdict ve = contraction_monitor(exact);
    CHECK(ve.pass);
}

TEST_CASE("lipschitz probe is stable under shrinking perturbations") {
    SolverConfig cfg;
    cfg.nx = 64;
    cfg.nt = 33;
    cfg.tol = 1e-13;
    cfg.max_iter = 16;

    SpectralField phi(cfg.xgrid());
    phi.at_mode(2) = cplx{0.06, 0.03};
    phi.at_mode(-4) = cplx{0.02, -0.05};

    LipschitzProbe same = lipschitz_probe(phi, phi, 0.0, cfg);
    CHECK(same.identical_data);
    CHECK(same.ratio == 0.0);

    auto perturbed = [&](double d) {
        SpectralField q = phi;
        q.at_mode(5) += cplx{d, 0.5 * d};
        return q;
    };
    LipschitzProbe big = lipschitz_probe(phi, perturbed(1e-3), 0.0, cfg);
    LipschitzProbe small = lipschitz_probe(phi, perturbed(1e-4), 0.0, cfg);
    CAPTURE(big.ratio, small.ratio);
    CHECK(big.ratio > 0.0);
    CHECK(small.ratio > 0.0);
    double spread = big.ratio / small.ratio;
    CHECK(spread <= 2.0);
    CHECK(spread >= 0.5);
}

TEST_CASE("m curve vanishes on zero fields and grows on static ones") {
    FrequencyGrid g(64.0, 64);
    TimeGrid tg(1.0, 33);
    SpaceTimeField z(g, tg, Rep::physical);
    std::vector<double> ts{0.25, 0.5, 0.75, 1.0};
    for (double v : m_curve(z, ts)) CHECK(v == 0.0);

    SpaceTimeField s(g, tg, Rep::physical);
    for (int ix = 0; ix < g.n; ++ix) {
        double x = g.x_at(ix);
        cplx val{std::exp(-0.1 * x * x), 0.02 * std::sin(0.3 * x)};
        for (int it = 0; it < tg.n_t; ++it) s.at(ix, it) = val;
    }
    std::vector<double> mv = m_curve(s, ts);
    for (size_t i = 1; i < mv.size(); ++i) CHECK(mv[i] >= mv[i - 1] - 1e-8);
    CHECK(mv.back() > 0.0);
}
