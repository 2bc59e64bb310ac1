#include "cyclo/fft.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "cyclo/error.hpp"

namespace cyclo {

namespace {

// exp(sign * i 2 pi k / n) with k reduced mod n, so large products v*k keep
// full phase accuracy.
cplx unit_root(std::size_t k, std::size_t n, double sign) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
    return {std::cos(phase), sign * std::sin(phase)};
}

std::vector<cplx> naive_transform(std::span<const cplx> x, double sign) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t v = 0; v < n; ++v) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) acc += x[k] * unit_root(v * k, n, sign);
        out[v] = acc;
    }
    return out;
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(std::span<cplx> data, bool inverse) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) throw ConfigError("radix-2 FFT needs a power-of-two length, got " + std::to_string(n));
    if (n == 1) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) twiddle[k] = unit_root(k, n, sign);

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const cplx t = data[start + k + half] * twiddle[k * stride];
                const cplx u = data[start + k];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
    }
}

std::vector<cplx> forward_dft(std::span<const cplx> x, DftPolicy policy) {
    if (x.empty()) throw ConfigError("DFT of an empty sequence");
    if (is_power_of_two(x.size())) {
        std::vector<cplx> out(x.begin(), x.end());
        fft_radix2(out, false);
        return out;
    }
    if (policy == DftPolicy::RequirePowerOfTwo)
        throw ConfigError("fast transform requires a power-of-two length, got " + std::to_string(x.size()));
    return naive_transform(x, -1.0);
}

std::vector<cplx> inverse_dft(std::span<const cplx> X, DftPolicy policy) {
    if (X.empty()) throw ConfigError("inverse DFT of an empty sequence");
    std::vector<cplx> out;
    if (is_power_of_two(X.size())) {
        out.assign(X.begin(), X.end());
        fft_radix2(out, true);
    } else if (policy == DftPolicy::RequirePowerOfTwo) {
        throw ConfigError("fast transform requires a power-of-two length, got " + std::to_string(X.size()));
    } else {
        out = naive_transform(X, 1.0);
    }
    const double scale = 1.0 / static_cast<double>(X.size());
    for (auto& value : out) value *= scale;
    return out;
}

Spectrum dft(const SampleBuffer& signal, DftPolicy policy) {
    const auto samples = signal.samples();
    std::vector<cplx> x(samples.begin(), samples.end());
    Spectrum spectrum;
    spectrum.bins = forward_dft(x, policy);
    spectrum.n = x.size();
    spectrum.freq_resolution_hz = signal.sample_rate_hz() / static_cast<double>(x.size());
    spectrum.sample_period_s = signal.sample_period_s();
    return spectrum;
}

}  // namespace cyclo
