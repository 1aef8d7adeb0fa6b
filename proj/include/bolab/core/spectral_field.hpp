#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bolab/core/dispersion.hpp"
#include "bolab/core/fft.hpp"
#include "bolab/core/grid.hpp"

namespace bolab {

// One-dimensional spectrum on a FrequencyGrid, FFT storage order.
// Conventions: coef[i] approximates F(f)(xi_i) = integral f(x) e^{-i x xi} dx,
// and the inverse carries the 1/(2*pi) factor. The Nyquist cell is kept zero.
struct SpectralField {
    FrequencyGrid grid;
    std::vector<cplx> coef;

    SpectralField() = default;
    explicit SpectralField(const FrequencyGrid& g) : grid(g), coef(g.n, cplx{0.0, 0.0}) {}
    SpectralField(const FrequencyGrid& g, std::vector<cplx> c) : grid(g), coef(std::move(c)) {
        if (static_cast<int>(coef.size()) != g.n) throw std::invalid_argument("spectral field: size mismatch");
    }

    cplx& at_mode(int m) { return coef[grid.index_of(m)]; }
    const cplx& at_mode(int m) const { return coef[grid.index_of(m)]; }
};

inline void zero_nyquist(SpectralField& f) {
    if (f.grid.n % 2 == 0) f.coef[f.grid.nyquist_index()] = cplx{0.0, 0.0};
}

inline SpectralField forward_transform(const FrequencyGrid& g, const std::vector<cplx>& samples) {
    if (static_cast<int>(samples.size()) != g.n) throw std::invalid_argument("forward transform: size mismatch");
    SpectralField out(g);
    dft(samples.data(), out.coef.data(), g.n, -1);
    const double dx = g.dx();
    for (int i = 0; i < g.n; ++i) {
        double sign = (g.mode_of(i) % 2 == 0) ? 1.0 : -1.0; // origin shift x_0 = -L/2
        out.coef[i] *= sign * dx;
    }
    zero_nyquist(out);
    return out;
}

inline std::vector<cplx> inverse_transform(const SpectralField& f) {
    const auto& g = f.grid;
    std::vector<cplx> buf(g.n);
    for (int i = 0; i < g.n; ++i) {
        double sign = (g.mode_of(i) % 2 == 0) ? 1.0 : -1.0;
        buf[i] = sign * f.coef[i];
    }
    dft(buf, +1);
    const double inv_l = 1.0 / g.period;
    for (auto& v : buf) v *= inv_l;
    return buf;
}

inline double l2_physical(const FrequencyGrid& g, const std::vector<cplx>& samples) {
    double s = 0.0;
    for (const auto& v : samples) s += std::norm(v);
    return std::sqrt(s * g.dx());
}

// L2 of the spectrum with measure dxi/(2*pi); equals the physical L2 norm.
inline double l2(const SpectralField& f) {
    double s = 0.0;
    for (const auto& v : f.coef) s += std::norm(v);
    return std::sqrt(s * f.grid.dxi() / (2.0 * pi));
}

// Plain L2(dxi) of the spectrum, no 2*pi factor.
inline double l2_spectrum(const SpectralField& f) {
    double s = 0.0;
    for (const auto& v : f.coef) s += std::norm(v);
    return std::sqrt(s * f.grid.dxi());
}

// Hilbert transform: multiplier -i*sgn(xi), sgn(0) = 0.
inline SpectralField hilbert(const SpectralField& f) {
    SpectralField out = f;
    for (int i = 0; i < out.grid.n; ++i) {
        double xi = out.grid.xi_at(i);
        if (xi > 0.0)
            out.coef[i] *= cplx{0.0, -1.0};
        else if (xi < 0.0)
            out.coef[i] *= cplx{0.0, 1.0};
        else
            out.coef[i] = cplx{0.0, 0.0};
    }
    zero_nyquist(out);
    return out;
}

// Free evolution W(t): multiplication by exp(i*t*omega(xi)).
inline SpectralField free_evolution(const SpectralField& f, double t) {
    SpectralField out = f;
    for (int i = 0; i < out.grid.n; ++i) {
        double ph = t * omega(out.grid.xi_at(i));
        out.coef[i] *= cplx{std::cos(ph), std::sin(ph)};
    }
    zero_nyquist(out);
    return out;
}

inline SpectralField x_derivative(const SpectralField& f) {
    SpectralField out = f;
    for (int i = 0; i < out.grid.n; ++i) out.coef[i] *= cplx{0.0, out.grid.xi_at(i)};
    zero_nyquist(out);
    return out;
}

// Evaluate the semidiscrete transform dx * sum_j f_j e^{-i x_j xi} at an
// arbitrary frequency (trigonometric interpolation of the spectrum).
inline cplx semidiscrete_transform(const FrequencyGrid& g, const std::vector<cplx>& samples, double xi) {
    cplx acc{0.0, 0.0};
    for (int j = 0; j < g.n; ++j) {
        double ph = -g.x_at(j) * xi;
        acc += samples[j] * cplx{std::cos(ph), std::sin(ph)};
    }
    return acc * g.dx();
}

// Dilation (delta_lambda f)(x) = lambda * f(lambda * x), lambda in (0, 1].
// Realized in frequency space: the new spectrum samples the trigonometric
// interpolant of the old one at xi/lambda; entries beyond the band limit are 0.
inline SpectralField dilate(const SpectralField& f, double lambda) {
    if (!(lambda > 0.0) || lambda > 1.0) throw std::domain_error("dilate: lambda must lie in (0, 1]");
    if (lambda == 1.0) return f;
    const auto& g = f.grid;
    std::vector<cplx> samples = inverse_transform(f);
    SpectralField out(g);
    for (int i = 0; i < g.n; ++i) {
        double target = g.xi_at(i) / lambda;
        if (std::fabs(target) > g.xi_max()) continue;
        out.coef[i] = semidiscrete_transform(g, samples, target);
    }
    zero_nyquist(out);
    return out;
}

} // namespace bolab
