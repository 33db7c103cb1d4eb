#include "kljn/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace kljn {

namespace {

std::mutex plan_mutex;
std::map<std::pair<int, int>, fftw_plan> plan_cache;

// FFTW_UNALIGNED lets a cached plan run on any caller buffer via the
// new-array execute interface regardless of SIMD alignment.
fftw_plan plan_for(int n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    std::vector<std::complex<double>> a(n), b(n);
    fftw_plan p = fftw_plan_dft_1d(
        n, reinterpret_cast<fftw_complex*>(a.data()),
        reinterpret_cast<fftw_complex*>(b.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache.emplace(key, p);
    return p;
}

} // namespace

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& in,
                                      bool inverse) {
    const int n = static_cast<int>(in.size());
    std::vector<std::complex<double>> out(in.size());
    if (n == 0) return out;
    int sign = inverse ? FFTW_BACKWARD : FFTW_FORWARD;
    fftw_plan p = plan_for(n, sign);
    // fftw_execute_dft does not modify the input array for out-of-place c2c.
    fftw_execute_dft(
        p,
        reinterpret_cast<fftw_complex*>(
            const_cast<std::complex<double>*>(in.data())),
        reinterpret_cast<fftw_complex*>(out.data()));
    if (inverse) {
        double inv = 1.0 / static_cast<double>(n);
        for (auto& v : out) v *= inv;
    }
    return out;
}

} // namespace kljn
