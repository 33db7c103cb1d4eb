#pragma once
#include <complex>
#include <vector>

namespace kljn {

// Out-of-place complex DFT (FFTW backend, arbitrary length).
// forward: X[k] = sum_n x[n] e^{-2*pi*i*k*n/N}; inverse includes the 1/N
// normalization so inverse(forward(x)) == x.  Plan creation is serialized
// behind a mutex; execution is concurrent and thread-safe.
std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& in,
                                      bool inverse);

} // namespace kljn
