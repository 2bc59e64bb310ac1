#include "cyclo/detect.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "cyclo/error.hpp"
#include "cyclo/format.hpp"

namespace cyclo {

namespace {

// Absorbs representation error in products like 0.9 * 100 before ceil().
constexpr double kRankSlack = 1e-9;

void require_pf(double target_pf) {
    if (!(target_pf > 0.0 && target_pf < 1.0))
        throw ConfigError("target false-alarm rate must lie in (0, 1), got " + format_double(target_pf));
}

}  // namespace

std::string to_string(DetectorKind kind) {
    switch (kind) {
        case DetectorKind::CycleFeature: return "cycle_feature";
        case DetectorKind::Energy: return "energy";
    }
    return "unknown";
}

DetectorKind parse_detector(const std::string& name) {
    if (name == "cycle_feature" || name == "cycle") return DetectorKind::CycleFeature;
    if (name == "energy") return DetectorKind::Energy;
    throw ConfigError("unknown detector '" + name + "' (expected cycle_feature or energy)");
}

std::string to_string(Decision decision) {
    return decision == Decision::H1_Active ? "H1_Active" : "H0_Inactive";
}

SensingMetric cycle_metric(const ScdSlice& slice) {
    if (slice.values.empty()) throw ConfigError("cycle metric of an empty slice");
    double peak = 0.0;
    for (const auto& v : slice.values) peak = std::max(peak, std::abs(v));
    return {peak, DetectorKind::CycleFeature, slice.alpha_effective_hz};
}

SensingMetric energy_metric(const SampleBuffer& signal) {
    double energy = 0.0;
    for (double v : signal.samples()) energy += v * v;
    return {energy, DetectorKind::Energy, 0.0};
}

std::size_t min_calibration_trials(double target_pf) {
    require_pf(target_pf);
    return static_cast<std::size_t>(std::ceil(10.0 / target_pf - kRankSlack));
}

Threshold calibrate_threshold(std::span<const double> metric_sample, double target_pf, DetectorKind detector) {
    const std::size_t required = min_calibration_trials(target_pf);
    const std::size_t k = metric_sample.size();
    if (k < required)
        throw CalibrationError("calibration needs at least " + std::to_string(required) + " H0 metrics for Pf = " +
                               format_double(target_pf) + ", got " + std::to_string(k));
    for (double m : metric_sample)
        if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("calibration metrics must be finite and non-negative");

    std::vector<double> sorted(metric_sample.begin(), metric_sample.end());
    std::sort(sorted.begin(), sorted.end());
    auto rank = static_cast<std::size_t>(std::ceil((1.0 - target_pf) * static_cast<double>(k) - kRankSlack));
    rank = std::clamp<std::size_t>(rank, 1, k);
    return {sorted[rank - 1], target_pf, k, detector};
}

Decision decide(const SensingMetric& metric, const Threshold& threshold) {
    if (metric.detector != threshold.detector)
        throw UsageError("metric from " + to_string(metric.detector) + " detector compared against a " +
                         to_string(threshold.detector) + " threshold");
    return metric.value >= threshold.value ? Decision::H1_Active : Decision::H0_Inactive;
}

void write_threshold_file(const Threshold& threshold, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << to_string(threshold.detector) << ',' << format_double(threshold.target_pf) << ','
        << format_double(threshold.value) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

Threshold read_threshold_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open threshold file '" + path + "'");
    std::string line;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string field; std::getline(ss, field, ',');) fields.push_back(field);
    if (fields.size() != 3) throw IoError("threshold file '" + path + "' must hold 'detector,target_pf,threshold'");
    try {
        Threshold t;
        auto name = fields[0];
        name.erase(0, name.find_first_not_of(" \t"));
        t.detector = parse_detector(name);
        t.target_pf = parse_double(fields[1], "target_pf");
        t.value = parse_double(fields[2], "threshold");
        if (!(t.value >= 0.0)) throw ConfigError("threshold must be non-negative");
        return t;
    } catch (const ConfigError& e) {
        throw IoError("threshold file '" + path + "': " + e.what());
    }
}

}  // namespace cyclo
