#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace bolab {

using cplx = std::complex<double>;

namespace detail {

// FFTW plan cache. Plans are created once per (size, sign) with
// FFTW_ESTIMATE | FFTW_UNALIGNED (deterministic, works on arbitrary buffers)
// and executed via the new-array interface, which is thread safe.
class FftPlans {
  public:
    static FftPlans& instance() {
        static FftPlans p;
        return p;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<cplx> a(n), b(n);
        fftw_plan p = fftw_plan_dft_1d(
            n, reinterpret_cast<fftw_complex*>(a.data()), reinterpret_cast<fftw_complex*>(b.data()),
            sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

  private:
    FftPlans() = default;
    std::mutex mu_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

} // namespace detail

// Unnormalized DFT, out[k] = sum_j in[j] * exp(sign * 2*pi*i*j*k/n).
// sign = -1 forward, +1 backward. in == out is allowed.
inline void dft(const cplx* in, cplx* out, int n, int sign) {
    fftw_plan p = detail::FftPlans::instance().get(n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
    if (in == out) {
        std::vector<cplx> tmp(in, in + n);
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()),
                         reinterpret_cast<fftw_complex*>(out));
    } else {
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }
}

inline void dft(std::vector<cplx>& buf, int sign) { dft(buf.data(), buf.data(), static_cast<int>(buf.size()), sign); }

} // namespace bolab
