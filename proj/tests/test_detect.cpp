#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>

#include "cyclo/detect.hpp"
#include "cyclo/error.hpp"
#include "cyclo/harness.hpp"
#include "oracles.hpp"

using namespace cyclo;

namespace {

std::vector<double> random_metrics(std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> dist(0.5);
    std::vector<double> out(k);
    for (double& v : out) v = dist(rng);
    return out;
}

}  // namespace

TEST_CASE("cycle metric is the peak slice magnitude") {
    ScdSlice zero;
    zero.values.assign(16, 0.0);
    CHECK(cycle_metric(zero).value == 0.0);

    ScdSlice s;
    s.values = {cplx(1.0, 0.0), cplx(-3.0, 4.0), cplx(0.0, -2.0)};
    s.alpha_effective_hz = 42.0;
    const auto m = cycle_metric(s);
    CHECK(m.value == 5.0);
    CHECK(m.detector == DetectorKind::CycleFeature);
    CHECK(m.alpha_effective_hz == 42.0);

    CHECK_THROWS_AS(cycle_metric(ScdSlice{}), ConfigError);
}

TEST_CASE("cycle metric scales with the square of the signal") {
    const double fs = 3.0e6;
    ModulationSpec spec;
    const auto x = add_awgn(generate_am(spec, 1024, fs, 3), {-5.0, 4});
    const ScdEstimator est(1024, make_window(WindowKind::Hamming, 101), 1.0 / fs);
    const double base = cycle_metric(est.slice(dft(x), 2.0e6)).value;
    std::vector<double> scaled(x.samples().begin(), x.samples().end());
    for (double& v : scaled) v *= 2.0;
    const double doubled = cycle_metric(est.slice(dft(SampleBuffer(scaled, fs)), 2.0e6)).value;
    CHECK(doubled == 4.0 * base);
}

TEST_CASE("energy metric") {
    CHECK(energy_metric(SampleBuffer(std::vector<double>(64, 0.0), 1.0)).value == 0.0);
    CHECK(energy_metric(SampleBuffer(std::vector<double>(4096, 1.0), 1.0)).value == 4096.0);
    CHECK(energy_metric(SampleBuffer({3.0, -4.0}, 1.0)).detector == DetectorKind::Energy);

    // Integer samples: every partial sum is exact, so any accumulation order agrees.
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> ints(-50, 50);
    std::vector<double> x(1000);
    for (double& v : x) v = ints(rng);
    double reversed = 0.0;
    for (auto it = x.rbegin(); it != x.rend(); ++it) reversed += (*it) * (*it);
    CHECK(energy_metric(SampleBuffer(x, 1.0)).value == reversed);

    const auto noise = noise_only(4096, 2.0, 1.0, 9);
    long double wide = 0.0L;
    for (double v : noise.samples()) wide += static_cast<long double>(v) * v;
    CHECK(energy_metric(noise).value == doctest::Approx(static_cast<double>(wide)).epsilon(1e-13));
}

TEST_CASE("energy is additive over concatenation") {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> ints(-64, 64);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> a(100 + rep), b(57 + 3 * rep);
        for (double& v : a) v = ints(rng) / 8.0;
        for (double& v : b) v = ints(rng) / 8.0;
        std::vector<double> ab(a);
        ab.insert(ab.end(), b.begin(), b.end());
        CHECK(energy_metric(SampleBuffer(ab, 1.0)).value ==
              energy_metric(SampleBuffer(a, 1.0)).value + energy_metric(SampleBuffer(b, 1.0)).value);
    }
}

TEST_CASE("threshold is the exact order statistic") {
    std::vector<double> sample(100);
    std::iota(sample.begin(), sample.end(), 1.0);
    std::shuffle(sample.begin(), sample.end(), std::mt19937_64(1));
    const auto t = calibrate_threshold(sample, 0.1, DetectorKind::Energy);
    CHECK(t.value == 90.0);
    CHECK(t.target_pf == 0.1);
    CHECK(t.calibration_trials == 100);
    CHECK(t.detector == DetectorKind::Energy);

    std::vector<double> symmetric(101);
    std::iota(symmetric.begin(), symmetric.end(), -50.0);
    for (double& v : symmetric) v = std::abs(v) + (v < 0 ? 0.5 : 0.0);  // distinct, non-negative
    std::vector<double> sorted(symmetric);
    std::sort(sorted.begin(), sorted.end());
    CHECK(calibrate_threshold(symmetric, 0.5).value == sorted[50]);

    std::vector<double> ties(20, 3.0);
    CHECK(calibrate_threshold(ties, 0.5).value == 3.0);
}

TEST_CASE("calibration demands enough tail mass") {
    CHECK(min_calibration_trials(0.1) == 100);
    CHECK(min_calibration_trials(0.01) == 1000);
    CHECK(min_calibration_trials(0.05) == 200);
    std::vector<double> small(99, 1.0);
    try {
        calibrate_threshold(small, 0.1);
        FAIL("expected CalibrationError");
    } catch (const CalibrationError& e) {
        CHECK(std::string(e.what()).find("100") != std::string::npos);
    }
    std::vector<double> sample(1000, 1.0);
    CHECK_THROWS_AS(calibrate_threshold(sample, 0.0), ConfigError);
    CHECK_THROWS_AS(calibrate_threshold(sample, 1.0), ConfigError);
    sample[3] = -1.0;
    CHECK_THROWS_AS(calibrate_threshold(sample, 0.5), ConfigError);
}

TEST_CASE("threshold never rises as the target Pf grows") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto sample = random_metrics(500 + seed * 37, seed);
        double previous = std::numeric_limits<double>::infinity();
        for (double pf = 0.02; pf < 1.0; pf += 0.01) {
            const double value = calibrate_threshold(sample, pf).value;
            CHECK(value <= previous);
            previous = value;
        }
    }
}

TEST_CASE("decision rule") {
    const Threshold one{1.0, 0.1, 100, DetectorKind::CycleFeature};
    CHECK(decide({0.0, DetectorKind::CycleFeature, 0.0}, one) == Decision::H0_Inactive);
    CHECK(decide({2.0, DetectorKind::CycleFeature, 0.0}, one) == Decision::H1_Active);
    CHECK(decide({1.0, DetectorKind::CycleFeature, 0.0}, one) == Decision::H1_Active);
    CHECK_THROWS_AS(decide({2.0, DetectorKind::Energy, 0.0}, one), UsageError);
}

TEST_CASE("decisions are monotone in the metric and scale-equivariant") {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        const auto sample = random_metrics(400, rng());
        const auto t = calibrate_threshold(sample, 0.25, DetectorKind::Energy);
        const double c = std::ldexp(1.0, rep % 7 - 3) * (1.0 + rep);
        std::vector<double> scaled(sample);
        for (double& v : scaled) v *= c;
        const auto ts = calibrate_threshold(scaled, 0.25, DetectorKind::Energy);
        for (double m : random_metrics(50, rng())) {
            const SensingMetric metric{m, DetectorKind::Energy, 0.0};
            const auto d = decide(metric, t);
            if (d == Decision::H1_Active) CHECK(decide({m * 1.5 + 0.1, DetectorKind::Energy, 0.0}, t) == d);
            CHECK(decide({m * c, DetectorKind::Energy, 0.0}, ts) == d);
        }
    }
}

TEST_CASE("calibrated cycle threshold holds its false-alarm rate on fresh noise") {
    SensingConfig config;
    config.snr_db_list = {-22.0};
    const MetricEngine engine(config);
    std::vector<double> calibration(2000);
    for (std::size_t i = 0; i < calibration.size(); ++i)
        calibration[i] = engine.cycle(null_trial(config, 0, TrialPhase::Calibration, i)).value;
    const auto t = calibrate_threshold(calibration, 0.1);
    std::size_t alarms = 0;
    for (std::size_t i = 0; i < 2000; ++i) {
        const auto m = engine.cycle(null_trial(config, 0, TrialPhase::NullMeasurement, i));
        if (decide(m, t) == Decision::H1_Active) ++alarms;
    }
    const double pf = static_cast<double>(alarms) / 2000.0;
    MESSAGE("measured Pf = " << pf);
    CHECK(oracle::binomial_ci(0.1, 2000).contains(pf));
}

TEST_CASE("threshold files round-trip") {
    const auto path = (std::filesystem::temp_directory_path() / "cyclo_threshold.csv").string();
    const Threshold t{123456.78901234567, 0.01, 1000, DetectorKind::Energy};
    write_threshold_file(t, path);
    const auto back = read_threshold_file(path);
    CHECK(back.value == t.value);
    CHECK(back.target_pf == t.target_pf);
    CHECK(back.detector == t.detector);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_threshold_file(path), IoError);
    CHECK(parse_detector("cycle") == DetectorKind::CycleFeature);
    CHECK_THROWS_AS(parse_detector("matched"), ConfigError);
}
