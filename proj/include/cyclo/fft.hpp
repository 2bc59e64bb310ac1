#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cyclo/siggen.hpp"

namespace cyclo {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n);

enum class DftPolicy {
    FallbackToNaive,    // any length; O(N^2) when N is not a power of two
    RequirePowerOfTwo,  // ConfigError otherwise
};

// Unnormalized forward transform X[v] = sum_k x[k] exp(-i 2 pi v k / N).
std::vector<cplx> forward_dft(std::span<const cplx> x, DftPolicy policy = DftPolicy::FallbackToNaive);

// x[k] = (1/N) sum_v X[v] exp(+i 2 pi v k / N).
std::vector<cplx> inverse_dft(std::span<const cplx> X, DftPolicy policy = DftPolicy::FallbackToNaive);

// In-place iterative radix-2 transform; `data.size()` must be a power of two.
void fft_radix2(std::span<cplx> data, bool inverse);

struct Spectrum {
    std::vector<cplx> bins;
    std::size_t n = 0;
    double freq_resolution_hz = 0.0;  // sample_rate_hz / n
    double sample_period_s = 0.0;
};

Spectrum dft(const SampleBuffer& signal, DftPolicy policy = DftPolicy::FallbackToNaive);

}  // namespace cyclo
