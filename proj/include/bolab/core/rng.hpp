#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace bolab {

// Deterministic random source: raw mt19937_64 draws mapped to doubles by
// ldexp, Box-Muller for normals. Avoids std::*_distribution, whose output is
// implementation defined.
class DetRng {
  public:
    explicit DetRng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return std::ldexp(static_cast<double>(eng_() >> 11), -53); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    std::complex<double> cnormal() { return {normal(), normal()}; }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

} // namespace bolab
