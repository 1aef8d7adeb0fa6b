#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace bolab {

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Spatial lattice: n points x_j = -L/2 + j*L/n on the periodic box [-L/2, L/2).
// Conjugate frequencies xi_m = 2*pi*m/L, m in [-n/2, n/2), stored in FFT order
// (m = 0..n/2-1 then m = -n/2..-1). The Nyquist cell m = -n/2 is always zeroed.
struct FrequencyGrid {
    double period = 64.0;
    int n = 512;

    FrequencyGrid() = default;
    FrequencyGrid(double period_, int n_) : period(period_), n(n_) {
        if (period <= 0.0) throw std::invalid_argument("grid: period must be positive");
        if (n < 4 || (n & (n - 1)) != 0) throw std::invalid_argument("grid: n must be a power of two >= 4");
    }

    double dx() const { return period / n; }
    double dxi() const { return 2.0 * pi / period; }
    double x_at(int j) const { return -0.5 * period + j * dx(); }
    int mode_of(int i) const { return i < n / 2 ? i : i - n; }
    int index_of(int m) const { return m >= 0 ? m : m + n; }
    double xi_at(int i) const { return dxi() * mode_of(i); }
    int nyquist_index() const { return n / 2; }
    // largest cleanly represented |xi| (Nyquist excluded)
    double xi_max() const { return dxi() * (n / 2 - 1); }

    bool operator==(const FrequencyGrid&) const = default;
};

// Time lattice: n_t points t_i = -T + i*dt spanning [-T, T] with dt = 2T/(n_t-1).
// n_t must be odd so that t = 0 is the center point. tau-transforms treat the
// lattice as periodic with period n_t*dt; for odd n_t the tau grid
// tau_m = 2*pi*m/(n_t*dt), m in [-(n_t-1)/2, (n_t-1)/2], is symmetric.
struct TimeGrid {
    double half_width = 1.0;
    int n_t = 257;

    TimeGrid() = default;
    TimeGrid(double half_width_, int n_t_) : half_width(half_width_), n_t(n_t_) {
        if (half_width <= 0.0) throw std::invalid_argument("time grid: half width must be positive");
        if (n_t < 5) throw std::invalid_argument("time grid: need at least 5 points");
        if (n_t % 2 == 0) throw std::invalid_argument("time grid: n_t must be odd");
    }

    double dt() const { return 2.0 * half_width / (n_t - 1); }
    double t_at(int i) const { return -half_width + i * dt(); }
    int center_index() const { return (n_t - 1) / 2; }
    double tau_period() const { return n_t * dt(); }
    double dtau() const { return 2.0 * pi / tau_period(); }
    int mode_of(int i) const { return i <= (n_t - 1) / 2 ? i : i - n_t; }
    int index_of(int m) const { return m >= 0 ? m : m + n_t; }
    double tau_at(int i) const { return dtau() * mode_of(i); }
    double tau_max() const { return dtau() * ((n_t - 1) / 2); }

    bool operator==(const TimeGrid&) const = default;
};

} // namespace bolab
