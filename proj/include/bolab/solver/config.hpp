#pragma once

#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bolab/core/grid.hpp"

namespace bolab {

// Knobs shared by the fixed-point and reference integrators. The time lattice
// is [-T, T] with nt nodes, dt = 2T/(nt - 1); the spatial lattice is the
// periodic box of the given period with nx points.
struct SolverConfig {
    double period = 64.0;
    int nx = 512;
    double half_width = 1.0; // T, at most 1
    int nt = 257;            // odd
    double eps_bar = 0.05;   // admissible-data ceiling for the sigma = 0 data norm
    int max_iter = 24;
    double tol = 1e-10;      // stop once the difference norm falls below this
    bool dealias = true;     // 2/3-rule truncation around the quadratic term
    bool nonlinear = true;   // false: drop the nonlinear term entirely
    int substeps = 1;        // reference-stepper refinements per lattice dt
    bool trace_norms = true; // sample the M(T) curve of the returned iterate

    double dt() const { return 2.0 * half_width / (nt - 1); }
    FrequencyGrid xgrid() const { return FrequencyGrid(period, nx); }
    TimeGrid tgrid() const { return TimeGrid(half_width, nt); }
};

inline void validate(const SolverConfig& cfg) {
    if (!(cfg.period > 0.0)) throw std::domain_error("solver config: period must be positive");
    if (cfg.nx < 4 || (cfg.nx & (cfg.nx - 1)) != 0)
        throw std::domain_error("solver config: nx must be a power of two >= 4");
    if (!(cfg.half_width > 0.0) || cfg.half_width > 1.0)
        throw std::domain_error("solver config: time half width must lie in (0, 1]");
    if (cfg.nt < 5 || cfg.nt % 2 == 0)
        throw std::domain_error("solver config: nt must be odd and >= 5");
    if (!(cfg.eps_bar > 0.0)) throw std::domain_error("solver config: eps_bar must be positive");
    if (cfg.max_iter < 1) throw std::domain_error("solver config: max_iter must be >= 1");
    if (!(cfg.tol > 0.0)) throw std::domain_error("solver config: tol must be positive");
    if (cfg.substeps < 1) throw std::domain_error("solver config: substeps must be >= 1");
}

struct IterationStep {
    int n = 0;          // iterate index
    double f0 = 0.0;    // windowed spacetime norm of u_n
    double d_f0 = 0.0;  // same norm of u_n - u_{n-1}; 0 in the n = 0 row
    double d_h0 = 0.0;  // sup over lattice times of the sigma = 0 norm of the difference
    double ratio = 0.0; // d_f0 of this row over the previous row, 0 when undefined
};

struct IterationTrace {
    std::vector<IterationStep> steps;
    double phi_h0 = 0.0;         // sigma = 0 norm of the data
    bool data_admissible = true; // phi_h0 < eps_bar
    bool converged = false;
    int iterations = 0;          // index of the returned iterate
    double final_residual = 0.0; // sup-in-t relative fixed-point defect
    std::vector<double> m_times;  // window half-widths sampled on the returned iterate
    std::vector<double> m_values; // matching windowed-norm values

    // One row per iteration, deterministic shortest-round-trip formatting.
    std::string to_csv() const {
        auto num = [](double v) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        std::ostringstream os;
        os << "n,f0,d_f0,d_h0,ratio\n";
        for (const auto& s : steps)
            os << s.n << ',' << num(s.f0) << ',' << num(s.d_f0) << ',' << num(s.d_h0) << ','
               << num(s.ratio) << '\n';
        return os.str();
    }
};

// Thrown when the iteration's difference norms rise three times in a row;
// carries everything measured up to that point.
struct DivergenceError : std::runtime_error {
    IterationTrace trace;
    DivergenceError(const std::string& what, IterationTrace t)
        : std::runtime_error(what), trace(std::move(t)) {}
};

// Thrown by the reference stepper when one step grows the state tenfold.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bolab
