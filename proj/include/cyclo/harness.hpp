#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cyclo/detect.hpp"
#include "cyclo/scd.hpp"
#include "cyclo/siggen.hpp"

namespace cyclo {

// Defaults reproduce the reference scenario: AM at 1 MHz, 10 kHz bandwidth,
// 3 MHz sampling, N = 4096, Hamming smoothing over L = 1301 bins.
struct SensingConfig {
    ModulationSpec modulation{};
    std::size_t n_samples = 4096;
    std::size_t smoothing_len = 1301;
    double sample_rate_hz = 3.0e6;
    std::vector<double> snr_db_list{-22.0};
    std::vector<double> target_pf_list{0.01, 0.05, 0.1, 0.2, 0.5};
    std::size_t trials = 2000;             // fresh H0 trials per SNR
    std::size_t h1_trials = 0;             // H1 trials per SNR; 0 means `trials`
    std::size_t calibration_trials = 2000;  // H0 trials used to set thresholds
    std::uint64_t master_seed = 20100101;
    WindowKind window_kind = WindowKind::Hamming;
    bool fast_transform = true;  // requires power-of-two n_samples

    std::size_t effective_h1_trials() const { return h1_trials == 0 ? trials : h1_trials; }
    // Cycle frequency probed by the feature detector: 2 fc.
    double feature_alpha_hz() const { return 2.0 * modulation.carrier_hz; }

    // Throws ConfigError describing the first violated constraint.
    void validate() const;
};

struct RocPoint {
    DetectorKind detector = DetectorKind::CycleFeature;
    double snr_db = 0.0;
    double target_pf = 0.0;
    double threshold = 0.0;
    double measured_pf = 0.0;
    double measured_pd = 0.0;
    std::size_t h0_trials = 0;
    std::size_t h1_trials = 0;
};

// Trial phases; each gets its own seed stream.
enum class TrialPhase : std::uint64_t {
    Calibration = 1,
    NullMeasurement = 2,
    SignalWaveform = 3,
    SignalNoise = 4,
};

// splitmix64 over (master_seed, phase, snr index, trial index). Stable across
// releases; changing it changes every published CSV.
std::uint64_t trial_seed(std::uint64_t master_seed, TrialPhase phase, std::uint64_t snr_index,
                         std::uint64_t trial_index);

// Computes both sensing metrics for one received buffer.
class MetricEngine {
public:
    explicit MetricEngine(const SensingConfig& config);

    SensingMetric cycle(const SampleBuffer& received) const;
    SensingMetric energy(const SampleBuffer& received) const { return energy_metric(received); }

private:
    ScdEstimator estimator_;
    double alpha_hz_;
    DftPolicy policy_;
};

// H0 buffer: noise whose variance gives `snr_db` against the unit-power signal.
SampleBuffer null_trial(const SensingConfig& config, std::size_t snr_index, TrialPhase phase, std::size_t trial);
// H1 buffer: unit-power modulated waveform through the AWGN channel.
SampleBuffer signal_trial(const SensingConfig& config, std::size_t snr_index, std::size_t trial);

struct RunOptions {
    unsigned threads = 1;  // 0 selects hardware concurrency
};

// Runs `body(i)` for i in [0, count) over `threads` workers. The first
// exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

// Monte Carlo ROC sweep. For every SNR: calibrate each detector's thresholds
// on calibration_trials H0 buffers, then count crossings on fresh H0 and H1
// buffers. Output is independent of `options.threads`.
std::vector<RocPoint> run_roc(const SensingConfig& config, const RunOptions& options = {});

// Threshold for one detector from `config.calibration_trials` noise-only
// buffers of the given variance (seed stream: Calibration, snr index 0).
Threshold calibrate_detector(const SensingConfig& config, DetectorKind detector, double target_pf,
                             double noise_variance, const RunOptions& options = {});

SensingMetric measure(const MetricEngine& engine, DetectorKind detector, const SampleBuffer& received);

// Points sorted by (detector name, snr_db, target_pf), rendered as CSV text.
std::string format_roc_csv(std::vector<RocPoint> points);
void emit_roc_csv(const std::vector<RocPoint>& points, const std::string& path);

// Real-operation counts for one sensing decision with FFT-based smoothing
// versus an energy detector on the same N samples.
struct ComplexityReport {
    std::uint64_t n = 0;
    std::uint64_t l = 0;
    std::uint64_t proposed_real_mul = 0;  // 2 N log2 N + 5 L
    std::uint64_t proposed_real_add = 0;  // 3 N log2 N + 3 L
    std::uint64_t energy_real_mul = 0;    // 4 N
    std::uint64_t energy_real_add = 0;    // 3 N

    double mul_ratio() const { return static_cast<double>(proposed_real_mul) / static_cast<double>(energy_real_mul); }
    double add_ratio() const { return static_cast<double>(proposed_real_add) / static_cast<double>(energy_real_add); }
};

ComplexityReport complexity_model(std::uint64_t n, std::uint64_t l);

// Throws IoError naming `path` on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace cyclo
