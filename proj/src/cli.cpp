#include "cyclo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>

#include "cyclo/error.hpp"
#include "cyclo/format.hpp"
#include "cyclo/harness.hpp"

namespace cyclo {

namespace {

struct CliOptions {
    std::string modulation = "am";
    double fc_hz = 1.0e6;
    double fs_hz = 3.0e6;
    double bandwidth_hz = 10.0e3;
    double mod_index = 0.5;
    double symbol_rate_hz = 10.0e3;
    std::size_t n = 4096;
    std::size_t smoothing_len = 1301;
    std::string window = "hamming";
    std::vector<double> snr_db;
    std::vector<double> target_pf;
    std::size_t trials = 2000;
    std::size_t h1_trials = 0;
    std::size_t calibration_trials = 2000;
    std::uint64_t seed = SensingConfig{}.master_seed;
    unsigned threads = 1;
    std::string out;

    // profile
    double alpha_max_hz = -1.0;  // negative: full (-fs, fs) range
    std::size_t alpha_step_bins = 1;
    std::string signal_file;

    // calibrate / detect
    std::string detector = "cycle_feature";
    std::string threshold_file;
    double noise_variance = -1.0;  // negative: derive from --snr-db

    // complexity (the arithmetic model keeps the even length verbatim)
    std::uint64_t complexity_n = 4096;
    std::uint64_t complexity_l = 1300;
};

void add_signal_flags(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--modulation", o.modulation, "Primary-user modulation: am or bpsk")->capture_default_str();
    cmd->add_option("--fc-hz", o.fc_hz, "Carrier frequency (Hz)")->capture_default_str();
    cmd->add_option("--fs-hz", o.fs_hz, "Sampling frequency (Hz)")->capture_default_str();
    cmd->add_option("--bandwidth-hz", o.bandwidth_hz, "AM message bandwidth (Hz)")->capture_default_str();
    cmd->add_option("--mod-index", o.mod_index, "AM modulation index in [0, 1]")->capture_default_str();
    cmd->add_option("--symbol-rate-hz", o.symbol_rate_hz, "BPSK symbol rate (Hz)")->capture_default_str();
    cmd->add_option("--n", o.n, "Samples per sensing window (N)")->capture_default_str();
    cmd->add_option("--smoothing-len", o.smoothing_len,
                    "Frequency-smoothing length L, odd (the tabulated 1300 is rounded up to 1301)")
        ->capture_default_str();
    cmd->add_option("--window", o.window, "Smoothing window: hamming or rectangular")->capture_default_str();
    cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
    cmd->add_option("--out", o.out, "Output file (default: standard output)");
}

void add_trial_flags(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("--trials", o.trials, "Fresh H0 trials per SNR (and H1 trials unless --h1-trials)")
        ->capture_default_str();
    cmd->add_option("--h1-trials", o.h1_trials, "H1 trials per SNR (0: same as --trials)")->capture_default_str();
    cmd->add_option("--calibration-trials", o.calibration_trials, "H0 trials used to set each threshold")
        ->capture_default_str();
    cmd->add_option("--threads", o.threads, "Worker threads (0: all cores); results do not depend on it")
        ->capture_default_str();
}

SensingConfig make_config(const CliOptions& o) {
    SensingConfig config;
    config.modulation.kind = parse_modulation(o.modulation);
    config.modulation.carrier_hz = o.fc_hz;
    config.modulation.bandwidth_hz = o.bandwidth_hz;
    config.modulation.am_mod_index = o.mod_index;
    config.modulation.symbol_rate_hz = o.symbol_rate_hz;
    config.n_samples = o.n;
    config.smoothing_len = o.smoothing_len;
    config.sample_rate_hz = o.fs_hz;
    if (!o.snr_db.empty()) config.snr_db_list = o.snr_db;
    if (!o.target_pf.empty()) config.target_pf_list = o.target_pf;
    config.trials = o.trials;
    config.h1_trials = o.h1_trials;
    config.calibration_trials = o.calibration_trials;
    config.master_seed = o.seed;
    config.window_kind = parse_window(o.window);
    return config;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
    } else {
        write_text_file(path, text);
    }
}

std::string format_profile(const CycleProfile& profile) {
    std::string text = "alpha_hz,i_alpha\n";
    for (std::size_t i = 0; i < profile.alphas_hz.size(); ++i)
        text += format_double(profile.alphas_hz[i]) + ',' + format_double(profile.magnitudes[i]) + '\n';
    return text;
}

double single_value(const std::vector<double>& values, double fallback, const std::string& flag) {
    if (values.empty()) return fallback;
    if (values.size() > 1) throw ConfigError(flag + " takes a single value for this subcommand");
    return values.front();
}

void cmd_roc(const CliOptions& o, std::ostream& out) {
    const auto points = run_roc(make_config(o), {o.threads});
    emit(format_roc_csv(points), o.out, out);
}

void cmd_profile(const CliOptions& o, std::ostream& out) {
    const auto config = make_config(o);
    std::optional<SampleBuffer> signal;
    if (!o.signal_file.empty()) {
        signal = read_signal_file(o.signal_file);
    } else {
        config.modulation.validate(config.sample_rate_hz);
        if (o.n == 0) throw ConfigError("--n must be positive");
        auto clean = generate(config.modulation, config.n_samples, config.sample_rate_hz, o.seed);
        if (o.snr_db.empty()) {
            signal = std::move(clean);
        } else {
            const double snr = single_value(o.snr_db, 0.0, "--snr-db");
            signal = add_awgn(clean, {snr, trial_seed(o.seed, TrialPhase::SignalNoise, 0, 0)});
        }
    }
    const double fs = signal->sample_rate_hz();
    const double alpha_max = o.alpha_max_hz < 0.0 ? fs : o.alpha_max_hz;
    const auto grid = alpha_grid(signal->size(), fs, alpha_max, o.alpha_step_bins);
    const auto profile = cycle_profile(*signal, grid, make_window(config.window_kind, o.smoothing_len));
    emit(format_profile(profile), o.out, out);
}

double null_variance(const CliOptions& o) {
    if (o.noise_variance >= 0.0) {
        if (!(o.noise_variance > 0.0)) throw ConfigError("--noise-variance must be positive");
        return o.noise_variance;
    }
    return noise_variance_for(1.0, single_value(o.snr_db, -22.0, "--snr-db"));
}

Threshold calibrate_from_flags(SensingConfig config, const CliOptions& o, DetectorKind detector) {
    const double pf = single_value(o.target_pf, 0.1, "--target-pf");
    config.target_pf_list = {pf};
    config.snr_db_list = {0.0};
    const double variance = null_variance(o);
    if (!(variance > 0.0) || !std::isfinite(variance)) throw ConfigError("noise variance must be positive and finite");
    return calibrate_detector(config, detector, pf, variance, {o.threads});
}

void cmd_calibrate(const CliOptions& o, std::ostream& out) {
    const auto detector = parse_detector(o.detector);
    const auto threshold = calibrate_from_flags(make_config(o), o, detector);
    if (o.out.empty()) {
        out << to_string(threshold.detector) << ',' << format_double(threshold.target_pf) << ','
            << format_double(threshold.value) << '\n';
    } else {
        write_threshold_file(threshold, o.out);
    }
}

void cmd_detect(const CliOptions& o, std::ostream& out) {
    if (o.signal_file.empty()) throw ConfigError("detect needs --signal-file");
    const auto detector = parse_detector(o.detector);
    const auto signal = read_signal_file(o.signal_file);

    auto config = make_config(o);
    config.n_samples = signal.size();
    config.sample_rate_hz = signal.sample_rate_hz();
    config.fast_transform = is_power_of_two(signal.size());

    Threshold threshold;
    if (!o.threshold_file.empty()) {
        threshold = read_threshold_file(o.threshold_file);
        if (threshold.detector != detector)
            throw UsageError("threshold file is for the " + to_string(threshold.detector) + " detector, not " +
                             to_string(detector));
    } else {
        threshold = calibrate_from_flags(config, o, detector);
    }
    config.modulation.validate(config.sample_rate_hz);

    const MetricEngine engine(config);
    const auto metric = measure(engine, detector, signal);
    out << "detector,metric,threshold,decision\n"
        << to_string(detector) << ',' << format_double(metric.value) << ',' << format_double(threshold.value) << ','
        << to_string(decide(metric, threshold)) << '\n';
}

void cmd_complexity(const CliOptions& o, std::ostream& out) {
    const auto r = complexity_model(o.complexity_n, o.complexity_l);
    std::ostringstream text;
    text << "n=" << r.n << '\n'
         << "l=" << r.l << '\n'
         << "proposed_real_mul=" << r.proposed_real_mul << '\n'
         << "proposed_real_add=" << r.proposed_real_add << '\n'
         << "energy_real_mul=" << r.energy_real_mul << '\n'
         << "energy_real_add=" << r.energy_real_add << '\n'
         << "mul_ratio=" << format_double(r.mul_ratio()) << '\n'
         << "add_ratio=" << format_double(r.add_ratio()) << '\n';
    emit(text.str(), o.out, out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CliOptions o;
    CLI::App app{"Single-cycle-frequency cyclostationary spectrum sensing", "cyclosense"};
    app.require_subcommand(1);

    auto* roc = app.add_subcommand("roc", "Monte Carlo ROC sweep of both detectors (CSV)");
    add_signal_flags(roc, o);
    add_trial_flags(roc, o);
    roc->add_option("--snr-db", o.snr_db, "SNR in dB, repeatable (default -22)");
    roc->add_option("--target-pf", o.target_pf, "Target false-alarm rate, repeatable (default 0.01 0.05 0.1 0.2 0.5)");

    auto* profile = app.add_subcommand("profile", "Cycle-frequency profile I(alpha) of one signal (CSV)");
    add_signal_flags(profile, o);
    profile->add_option("--snr-db", o.snr_db, "Add AWGN at this SNR (default: noiseless)");
    profile->add_option("--alpha-max-hz", o.alpha_max_hz, "Largest |alpha| on the grid (default: fs)");
    profile->add_option("--alpha-step-bins", o.alpha_step_bins, "Grid step in units of 2 fs/N")->capture_default_str();
    profile->add_option("--signal-file", o.signal_file, "Read the signal from a sample dump instead of generating it");

    auto* calibrate = app.add_subcommand("calibrate", "Threshold for a target Pf from noise-only trials");
    add_signal_flags(calibrate, o);
    add_trial_flags(calibrate, o);
    calibrate->add_option("--detector", o.detector, "cycle_feature or energy")->capture_default_str();
    calibrate->add_option("--target-pf", o.target_pf, "Target false-alarm rate (default 0.1)");
    calibrate->add_option("--snr-db", o.snr_db, "Noise level as SNR against a unit-power signal (default -22)");
    calibrate->add_option("--noise-variance", o.noise_variance, "Noise variance (overrides --snr-db)");

    auto* detect = app.add_subcommand("detect", "One-shot H0/H1 decision on a signal file");
    add_signal_flags(detect, o);
    add_trial_flags(detect, o);
    detect->add_option("--signal-file", o.signal_file, "Sample dump to classify")->required();
    detect->add_option("--detector", o.detector, "cycle_feature or energy")->capture_default_str();
    detect->add_option("--threshold-file", o.threshold_file, "Threshold from `calibrate --out`");
    detect->add_option("--target-pf", o.target_pf, "Calibrate on the fly for this Pf (default 0.1)");
    detect->add_option("--snr-db", o.snr_db, "Calibration noise level as SNR against unit power (default -22)");
    detect->add_option("--noise-variance", o.noise_variance, "Calibration noise variance (overrides --snr-db)");

    auto* complexity = app.add_subcommand("complexity", "Real multiply/add counts per sensing decision");
    complexity->add_option("--n", o.complexity_n, "Samples per window, power of two")->capture_default_str();
    complexity->add_option("--smoothing-len", o.complexity_l,
                           "Smoothing length L, used verbatim (the estimator itself needs an odd L)")
        ->capture_default_str();
    complexity->add_option("--out", o.out, "Output file (default: standard output)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitConfig;
    }

    try {
        if (*roc) cmd_roc(o, out);
        else if (*profile) cmd_profile(o, out);
        else if (*calibrate) cmd_calibrate(o, out);
        else if (*detect) cmd_detect(o, out);
        else if (*complexity) cmd_complexity(o, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    return kExitOk;
}

}  // namespace cyclo
