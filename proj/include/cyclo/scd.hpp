#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cyclo/fft.hpp"
#include "cyclo/siggen.hpp"

namespace cyclo {

enum class WindowKind { Hamming, Rectangular };

std::string to_string(WindowKind kind);
WindowKind parse_window(const std::string& name);

// Odd-length, symmetric frequency-smoothing window scaled to unit mean.
class SmoothingWindow {
public:
    WindowKind kind() const { return kind_; }
    std::size_t length() const { return weights_.size(); }
    std::ptrdiff_t half_width() const { return static_cast<std::ptrdiff_t>(weights_.size() / 2); }
    std::span<const double> weights() const { return weights_; }
    // W(v) for v in [-half_width, half_width].
    double at(std::ptrdiff_t v) const { return weights_[static_cast<std::size_t>(v + half_width())]; }

private:
    friend SmoothingWindow make_window(WindowKind kind, std::size_t length);
    SmoothingWindow(WindowKind kind, std::vector<double> weights) : kind_(kind), weights_(std::move(weights)) {}

    WindowKind kind_;
    std::vector<double> weights_;
};

// Throws ConfigError for even or zero length, naming the odd neighbours.
SmoothingWindow make_window(WindowKind kind, std::size_t length);

// Frequency-smoothed spectral correlation estimate at one cycle frequency,
// indexed by discrete frequency l in [0, N).
struct ScdSlice {
    std::vector<cplx> values;
    double alpha_requested_hz = 0.0;
    double alpha_effective_hz = 0.0;
    std::int64_t shift_bins = 0;  // a = round(alpha / (2 F)), F the bin spacing
    double scale = 0.0;           // 1 / ((N - 1) Ts)
};

// Nearest representable half-shift for `alpha_hz` on an N-bin grid.
std::int64_t alpha_shift_bins(double alpha_hz, double freq_resolution_hz);

// Reusable estimator for a fixed (N, window, Ts). Power-of-two N smooths via
// circular convolution in the transform domain; other N sum directly.
class ScdEstimator {
public:
    ScdEstimator(std::size_t n, SmoothingWindow window, double sample_period_s);

    ScdSlice slice(const Spectrum& spectrum, double alpha_hz) const;
    // max_l |slice(spectrum, alpha).values[l]| without keeping the slice.
    double peak_magnitude(const Spectrum& spectrum, double alpha_hz) const;

    std::size_t n() const { return n_; }
    const SmoothingWindow& window() const { return window_; }

private:
    std::vector<cplx> smooth(std::vector<cplx> products) const;

    std::size_t n_;
    SmoothingWindow window_;
    double sample_period_s_;
    double scale_;
    std::vector<cplx> window_spectrum_;  // empty unless the fast path is used
};

ScdSlice scd_slice(const Spectrum& spectrum, double alpha_hz, const SmoothingWindow& window,
                   double sample_period_s);

// Independent reference: naive DFT plus explicit double loop, O(N^2 + N L).
ScdSlice scd_slice_naive(const SampleBuffer& signal, double alpha_hz, const SmoothingWindow& window);

struct CycleProfile {
    std::vector<double> alphas_hz;
    std::vector<double> magnitudes;
};

// I(alpha) = max_l |S^alpha(l)| for each alpha; |alpha| must be below fs.
CycleProfile cycle_profile(const SampleBuffer& signal, std::span<const double> alphas_hz,
                           const SmoothingWindow& window);

// Every representable cycle frequency 2 a F with |2 a F| <= alpha_max_hz,
// stepping by `step_bins` half-shifts, ascending.
std::vector<double> alpha_grid(std::size_t n, double sample_rate_hz, double alpha_max_hz, std::size_t step_bins = 1);

void write_profile_csv(const CycleProfile& profile, const std::string& path);

}  // namespace cyclo
