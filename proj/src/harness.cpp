#include "cyclo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>
#include <tuple>

#include "cyclo/error.hpp"
#include "cyclo/format.hpp"

namespace cyclo {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double null_noise_variance(double snr_db) { return noise_variance_for(1.0, snr_db); }

std::size_t count_at_or_above(const std::vector<double>& metrics, double threshold) {
    return static_cast<std::size_t>(
        std::count_if(metrics.begin(), metrics.end(), [threshold](double m) { return m >= threshold; }));
}

}  // namespace

void SensingConfig::validate() const {
    modulation.validate(sample_rate_hz);
    if (n_samples < 2) throw ConfigError("n_samples must be at least 2");
    if (fast_transform && !is_power_of_two(n_samples))
        throw ConfigError("n_samples must be a power of two for the fast transform, got " + std::to_string(n_samples));
    if (smoothing_len == 0 || smoothing_len % 2 == 0)
        throw ConfigError("smoothing length must be odd, got " + std::to_string(smoothing_len) + "; use " +
                          std::to_string(smoothing_len == 0 ? 1 : smoothing_len - 1) + " or " +
                          std::to_string(smoothing_len + 1));
    if (smoothing_len >= n_samples) throw ConfigError("smoothing length must be below n_samples");
    if (snr_db_list.empty()) throw ConfigError("at least one SNR is required");
    for (double snr : snr_db_list)
        if (!std::isfinite(snr)) throw ConfigError("SNR values must be finite, got " + format_double(snr));
    if (target_pf_list.empty()) throw ConfigError("at least one target Pf is required");
    if (trials == 0) throw ConfigError("trials must be positive");
    for (double pf : target_pf_list) {
        const std::size_t needed = min_calibration_trials(pf);
        if (calibration_trials < needed)
            throw ConfigError("target Pf " + format_double(pf) + " needs at least " + std::to_string(needed) +
                              " calibration trials, got " + std::to_string(calibration_trials));
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, TrialPhase phase, std::uint64_t snr_index,
                         std::uint64_t trial_index) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(phase));
    h = splitmix64(h ^ snr_index);
    return splitmix64(h ^ trial_index);
}

MetricEngine::MetricEngine(const SensingConfig& config)
    : estimator_(config.n_samples, make_window(config.window_kind, config.smoothing_len), 1.0 / config.sample_rate_hz),
      alpha_hz_(config.feature_alpha_hz()),
      policy_(config.fast_transform ? DftPolicy::RequirePowerOfTwo : DftPolicy::FallbackToNaive) {}

SensingMetric MetricEngine::cycle(const SampleBuffer& received) const {
    return cycle_metric(estimator_.slice(dft(received, policy_), alpha_hz_));
}

SampleBuffer null_trial(const SensingConfig& config, std::size_t snr_index, TrialPhase phase, std::size_t trial) {
    return noise_only(config.n_samples, null_noise_variance(config.snr_db_list.at(snr_index)), config.sample_rate_hz,
                      trial_seed(config.master_seed, phase, snr_index, trial));
}

SampleBuffer signal_trial(const SensingConfig& config, std::size_t snr_index, std::size_t trial) {
    const auto clean = generate(config.modulation, config.n_samples, config.sample_rate_hz,
                                trial_seed(config.master_seed, TrialPhase::SignalWaveform, snr_index, trial));
    return add_awgn(clean, {config.snr_db_list.at(snr_index),
                            trial_seed(config.master_seed, TrialPhase::SignalNoise, snr_index, trial)});
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count && !failed.load(); i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::vector<RocPoint> run_roc(const SensingConfig& config, const RunOptions& options) {
    config.validate();
    const MetricEngine engine(config);
    const std::size_t h1_trials = config.effective_h1_trials();
    const DetectorKind detectors[] = {DetectorKind::CycleFeature, DetectorKind::Energy};

    std::vector<RocPoint> points;
    for (std::size_t s = 0; s < config.snr_db_list.size(); ++s) {
        // metrics[detector][trial]
        auto collect = [&](std::size_t count, auto make_buffer) {
            std::vector<std::vector<double>> metrics(2, std::vector<double>(count));
            parallel_for(count, options.threads, [&](std::size_t i) {
                const auto buffer = make_buffer(i);
                metrics[0][i] = engine.cycle(buffer).value;
                metrics[1][i] = engine.energy(buffer).value;
            });
            return metrics;
        };
        const auto calibration = collect(config.calibration_trials, [&](std::size_t i) {
            return null_trial(config, s, TrialPhase::Calibration, i);
        });
        const auto null_metrics = collect(config.trials, [&](std::size_t i) {
            return null_trial(config, s, TrialPhase::NullMeasurement, i);
        });
        const auto signal_metrics = collect(h1_trials, [&](std::size_t i) { return signal_trial(config, s, i); });

        for (std::size_t d = 0; d < 2; ++d) {
            for (double pf : config.target_pf_list) {
                const Threshold threshold = calibrate_threshold(calibration[d], pf, detectors[d]);
                RocPoint point;
                point.detector = detectors[d];
                point.snr_db = config.snr_db_list[s];
                point.target_pf = pf;
                point.threshold = threshold.value;
                point.h0_trials = config.trials;
                point.h1_trials = h1_trials;
                point.measured_pf = static_cast<double>(count_at_or_above(null_metrics[d], threshold.value)) /
                                    static_cast<double>(config.trials);
                point.measured_pd = static_cast<double>(count_at_or_above(signal_metrics[d], threshold.value)) /
                                    static_cast<double>(h1_trials);
                points.push_back(point);
            }
        }
    }
    return points;
}

SensingMetric measure(const MetricEngine& engine, DetectorKind detector, const SampleBuffer& received) {
    return detector == DetectorKind::CycleFeature ? engine.cycle(received) : engine.energy(received);
}

Threshold calibrate_detector(const SensingConfig& config, DetectorKind detector, double target_pf,
                             double noise_variance, const RunOptions& options) {
    config.validate();
    const std::size_t required = min_calibration_trials(target_pf);
    if (config.calibration_trials < required)
        throw CalibrationError("target Pf " + format_double(target_pf) + " needs at least " + std::to_string(required) +
                               " calibration trials, got " + std::to_string(config.calibration_trials));
    const MetricEngine engine(config);
    std::vector<double> metrics(config.calibration_trials);
    parallel_for(metrics.size(), options.threads, [&](std::size_t i) {
        const auto buffer = noise_only(config.n_samples, noise_variance, config.sample_rate_hz,
                                       trial_seed(config.master_seed, TrialPhase::Calibration, 0, i));
        metrics[i] = measure(engine, detector, buffer).value;
    });
    return calibrate_threshold(metrics, target_pf, detector);
}

std::string format_roc_csv(std::vector<RocPoint> points) {
    std::stable_sort(points.begin(), points.end(), [](const RocPoint& a, const RocPoint& b) {
        return std::make_tuple(to_string(a.detector), a.snr_db, a.target_pf) <
               std::make_tuple(to_string(b.detector), b.snr_db, b.target_pf);
    });
    std::string out = "detector,snr_db,target_pf,threshold,measured_pf,measured_pd,h0_trials,h1_trials\n";
    for (const auto& p : points) {
        out += to_string(p.detector) + ',' + format_double(p.snr_db) + ',' + format_double(p.target_pf) + ',' +
               format_double(p.threshold) + ',' + format_double(p.measured_pf) + ',' + format_double(p.measured_pd) +
               ',' + std::to_string(p.h0_trials) + ',' + std::to_string(p.h1_trials) + '\n';
    }
    return out;
}

void emit_roc_csv(const std::vector<RocPoint>& points, const std::string& path) {
    write_text_file(path, format_roc_csv(points));
}

ComplexityReport complexity_model(std::uint64_t n, std::uint64_t l) {
    if (!std::has_single_bit(n)) throw ConfigError("complexity model needs a power-of-two N, got " + std::to_string(n));
    if (l == 0) throw ConfigError("smoothing length must be positive");
    const auto log2n = static_cast<std::uint64_t>(std::countr_zero(n));
    ComplexityReport report;
    report.n = n;
    report.l = l;
    report.proposed_real_mul = 2 * n * log2n + 5 * l;
    report.proposed_real_add = 3 * n * log2n + 3 * l;
    report.energy_real_mul = 4 * n;
    report.energy_real_add = 3 * n;
    return report;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace cyclo
