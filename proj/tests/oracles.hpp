#pragma once

// Test-only reference computations. Nothing here calls into the transform
// or estimator code under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// Direct O(N^2) evaluation of X[v] = sum_k x[k] exp(-i 2 pi v k / N).
inline std::vector<cplx> naive_dft(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t v = 0; v < n; ++v) {
        long double re = 0.0L;
        long double im = 0.0L;
        for (std::size_t k = 0; k < n; ++k) {
            const long double phase =
                -2.0L * std::numbers::pi_v<long double> * static_cast<long double>((v * k) % n) / static_cast<long double>(n);
            re += static_cast<long double>(x[k]) * std::cos(phase);
            im += static_cast<long double>(x[k]) * std::sin(phase);
        }
        out[v] = {static_cast<double>(re), static_cast<double>(im)};
    }
    return out;
}

// max_i |a_i - b_i| / max_i |b_i|; 0 when both are identically zero.
template <typename A, typename B>
double relative_error(const A& a, const B& b) {
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        ref = std::max(ref, std::abs(b[i]));
    }
    if (ref == 0.0) return diff;
    return diff / ref;
}

// Two-sided normal-approximation binomial interval around p for n trials.
struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

inline Interval binomial_ci(double p, std::size_t n, double z = 2.5758293035489004) {
    const double half = z * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return {p - half, p + half};
}

inline double sample_mean(std::span<const double> x) {
    long double s = 0.0L;
    for (double v : x) s += v;
    return static_cast<double>(s / static_cast<long double>(x.size()));
}

// Unbiased sample variance.
inline double sample_variance(std::span<const double> x) {
    const double m = sample_mean(x);
    long double s = 0.0L;
    for (double v : x) s += (v - m) * (v - m);
    return static_cast<double>(s / static_cast<long double>(x.size() - 1));
}

inline double median(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    return n % 2 == 1 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

}  // namespace oracle

namespace oracle {

// Positive cycle frequencies whose magnitude is within `rel_tol` of the
// positive-alpha maximum. For real input I(alpha) = I(fs - alpha) exactly
// under circular indexing, so a feature and its alias tie up to roundoff.
inline std::vector<double> tied_positive_maxima(std::span<const double> alphas, std::span<const double> magnitudes,
                                                double rel_tol = 1e-9) {
    double peak = -1.0;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        if (alphas[i] > 0.0) peak = std::max(peak, magnitudes[i]);
    std::vector<double> out;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        if (alphas[i] > 0.0 && magnitudes[i] >= peak * (1.0 - rel_tol)) out.push_back(alphas[i]);
    return out;
}

}  // namespace oracle
