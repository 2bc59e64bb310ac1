#include "cyclo/scd.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>

#include "cyclo/error.hpp"
#include "cyclo/format.hpp"

namespace cyclo {

namespace {

std::size_t wrap(std::int64_t index, std::size_t n) {
    const auto m = static_cast<std::int64_t>(n);
    const std::int64_t r = index % m;
    return static_cast<std::size_t>(r < 0 ? r + m : r);
}

}  // namespace

std::string to_string(WindowKind kind) {
    switch (kind) {
        case WindowKind::Hamming: return "hamming";
        case WindowKind::Rectangular: return "rectangular";
    }
    return "unknown";
}

WindowKind parse_window(const std::string& name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "hamming") return WindowKind::Hamming;
    if (lower == "rectangular" || lower == "rect") return WindowKind::Rectangular;
    throw ConfigError("unknown window '" + name + "' (expected hamming or rectangular)");
}

SmoothingWindow make_window(WindowKind kind, std::size_t length) {
    if (length == 0) throw ConfigError("smoothing length must be positive");
    if (length % 2 == 0)
        throw ConfigError("smoothing length must be odd so the window centres on v = 0; use " +
                          std::to_string(length - 1) + " or " + std::to_string(length + 1));

    std::vector<double> weights(length, 1.0);
    if (kind == WindowKind::Hamming && length > 1) {
        const double span = static_cast<double>(length - 1);
        for (std::size_t i = 0; i <= length / 2; ++i) {
            weights[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / span);
            weights[length - 1 - i] = weights[i];
        }
        double sum = 0.0;
        for (double w : weights) sum += w;
        const double mean = sum / static_cast<double>(length);
        for (double& w : weights) w /= mean;
    }
    return SmoothingWindow(kind, std::move(weights));
}

std::int64_t alpha_shift_bins(double alpha_hz, double freq_resolution_hz) {
    if (!std::isfinite(alpha_hz)) throw ConfigError("cycle frequency must be finite");
    return std::llround(alpha_hz / (2.0 * freq_resolution_hz));
}

ScdEstimator::ScdEstimator(std::size_t n, SmoothingWindow window, double sample_period_s)
    : n_(n), window_(std::move(window)), sample_period_s_(sample_period_s) {
    if (n_ < 2) throw ConfigError("spectral correlation needs at least 2 samples");
    if (!(sample_period_s_ > 0.0)) throw ConfigError("sample period must be positive");
    if (window_.length() >= n_)
        throw ConfigError("smoothing length " + std::to_string(window_.length()) +
                          " must be below the transform length " + std::to_string(n_));
    scale_ = 1.0 / (static_cast<double>(n_ - 1) * sample_period_s_);

    if (window_.length() > 1 && is_power_of_two(n_)) {
        std::vector<cplx> circular(n_, 0.0);
        const auto half = window_.half_width();
        for (std::ptrdiff_t v = -half; v <= half; ++v) circular[wrap(v, n_)] = window_.at(v);
        fft_radix2(circular, false);
        window_spectrum_ = std::move(circular);
    }
}

// out[l] = sum_v W(v) p[(l + v) mod N]. W is symmetric, so this is a
// circular convolution with W.
std::vector<cplx> ScdEstimator::smooth(std::vector<cplx> products) const {
    if (window_.length() == 1) {
        const double w = window_.at(0);
        for (auto& p : products) p *= w;
        return products;
    }
    if (!window_spectrum_.empty()) {
        fft_radix2(products, false);
        for (std::size_t k = 0; k < n_; ++k) products[k] *= window_spectrum_[k];
        fft_radix2(products, true);
        const double inv_n = 1.0 / static_cast<double>(n_);
        for (auto& p : products) p *= inv_n;
        return products;
    }
    std::vector<cplx> out(n_, 0.0);
    const auto half = window_.half_width();
    for (std::size_t l = 0; l < n_; ++l) {
        cplx acc{0.0, 0.0};
        for (std::ptrdiff_t v = -half; v <= half; ++v)
            acc += products[wrap(static_cast<std::int64_t>(l) + v, n_)] * window_.at(v);
        out[l] = acc;
    }
    return out;
}

ScdSlice ScdEstimator::slice(const Spectrum& spectrum, double alpha_hz) const {
    if (spectrum.n != n_ || spectrum.bins.size() != n_)
        throw ConfigError("spectrum length " + std::to_string(spectrum.bins.size()) +
                          " does not match estimator length " + std::to_string(n_));
    const std::int64_t a = alpha_shift_bins(alpha_hz, spectrum.freq_resolution_hz);

    std::vector<cplx> products(n_);
    for (std::size_t k = 0; k < n_; ++k) {
        const auto ki = static_cast<std::int64_t>(k);
        products[k] = spectrum.bins[wrap(ki + a, n_)] * std::conj(spectrum.bins[wrap(ki - a, n_)]);
    }
    auto values = smooth(std::move(products));
    const double factor = scale_ / static_cast<double>(window_.length());
    for (auto& v : values) v *= factor;

    ScdSlice out;
    out.values = std::move(values);
    out.alpha_requested_hz = alpha_hz;
    out.alpha_effective_hz = 2.0 * static_cast<double>(a) * spectrum.freq_resolution_hz;
    out.shift_bins = a;
    out.scale = scale_;
    return out;
}

double ScdEstimator::peak_magnitude(const Spectrum& spectrum, double alpha_hz) const {
    const auto s = slice(spectrum, alpha_hz);
    double peak = 0.0;
    for (const auto& v : s.values) peak = std::max(peak, std::abs(v));
    return peak;
}

ScdSlice scd_slice(const Spectrum& spectrum, double alpha_hz, const SmoothingWindow& window,
                   double sample_period_s) {
    return ScdEstimator(spectrum.n, window, sample_period_s).slice(spectrum, alpha_hz);
}

ScdSlice scd_slice_naive(const SampleBuffer& signal, double alpha_hz, const SmoothingWindow& window) {
    const std::size_t n = signal.size();
    const double ts = signal.sample_period_s();
    const double resolution = 1.0 / (static_cast<double>(n) * ts);
    if (n < 2 || window.length() >= n) throw ConfigError("smoothing length must be below the signal length");

    std::vector<cplx> spectrum(n);
    for (std::size_t v = 0; v < n; ++v) {
        cplx acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const double phase = -2.0 * std::numbers::pi * static_cast<double>((v * k) % n) / static_cast<double>(n);
            acc += signal[k] * std::polar(1.0, phase);
        }
        spectrum[v] = acc;
    }

    const auto a = static_cast<std::int64_t>(std::llround(alpha_hz / (2.0 * resolution)));
    const auto len = static_cast<std::int64_t>(window.length());
    const std::int64_t half = (len - 1) / 2;
    const auto nn = static_cast<std::int64_t>(n);
    const double scale = 1.0 / (static_cast<double>(n - 1) * ts);

    ScdSlice out;
    out.values.assign(n, 0.0);
    for (std::int64_t l = 0; l < nn; ++l) {
        cplx acc{0.0, 0.0};
        for (std::int64_t v = -half; v <= half; ++v) {
            const std::int64_t hi = ((l + a + v) % nn + nn) % nn;
            const std::int64_t lo = ((l - a + v) % nn + nn) % nn;
            acc += spectrum[static_cast<std::size_t>(hi)] * std::conj(spectrum[static_cast<std::size_t>(lo)]) *
                   window.weights()[static_cast<std::size_t>(v + half)];
        }
        out.values[static_cast<std::size_t>(l)] = scale * (acc / static_cast<double>(len));
    }
    out.alpha_requested_hz = alpha_hz;
    out.alpha_effective_hz = 2.0 * static_cast<double>(a) * resolution;
    out.shift_bins = a;
    out.scale = scale;
    return out;
}

CycleProfile cycle_profile(const SampleBuffer& signal, std::span<const double> alphas_hz,
                           const SmoothingWindow& window) {
    const double fs = signal.sample_rate_hz();
    for (double alpha : alphas_hz)
        if (!(std::abs(alpha) < fs))
            throw ConfigError("cycle frequency " + format_double(alpha) + " Hz is outside (-fs, fs)");

    const auto spectrum = dft(signal);
    const ScdEstimator estimator(signal.size(), window, signal.sample_period_s());
    CycleProfile profile;
    profile.alphas_hz.assign(alphas_hz.begin(), alphas_hz.end());
    profile.magnitudes.reserve(alphas_hz.size());
    for (double alpha : alphas_hz) profile.magnitudes.push_back(estimator.peak_magnitude(spectrum, alpha));
    return profile;
}

std::vector<double> alpha_grid(std::size_t n, double sample_rate_hz, double alpha_max_hz, std::size_t step_bins) {
    if (n < 2) throw ConfigError("alpha grid needs n >= 2");
    if (step_bins == 0) throw ConfigError("alpha grid step must be positive");
    if (!(alpha_max_hz >= 0.0)) throw ConfigError("alpha_max_hz must be non-negative");
    const double resolution = sample_rate_hz / static_cast<double>(n);
    // |alpha| < fs  <=>  |a| < N/2
    auto a_max = static_cast<std::int64_t>(std::floor(alpha_max_hz / (2.0 * resolution) + 1e-9));
    a_max = std::min<std::int64_t>(a_max, static_cast<std::int64_t>((n - 1) / 2));
    const auto step = static_cast<std::int64_t>(step_bins);
    a_max -= a_max % step;

    std::vector<double> grid;
    for (std::int64_t a = -a_max; a <= a_max; a += step) grid.push_back(2.0 * static_cast<double>(a) * resolution);
    return grid;
}

void write_profile_csv(const CycleProfile& profile, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "alpha_hz,i_alpha\n";
    for (std::size_t i = 0; i < profile.alphas_hz.size(); ++i)
        out << format_double(profile.alphas_hz[i]) << ',' << format_double(profile.magnitudes[i]) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace cyclo
