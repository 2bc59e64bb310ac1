#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "cyclo/scd.hpp"
#include "cyclo/siggen.hpp"

namespace cyclo {

enum class DetectorKind { CycleFeature, Energy };

std::string to_string(DetectorKind kind);
DetectorKind parse_detector(const std::string& name);

struct SensingMetric {
    double value = 0.0;
    DetectorKind detector = DetectorKind::CycleFeature;
    double alpha_effective_hz = 0.0;  // CycleFeature only
};

struct Threshold {
    double value = 0.0;
    double target_pf = 0.0;
    std::size_t calibration_trials = 0;
    DetectorKind detector = DetectorKind::CycleFeature;
};

enum class Decision { H0_Inactive, H1_Active };

std::string to_string(Decision decision);

// M = max_l |S(l)|.
SensingMetric cycle_metric(const ScdSlice& slice);

// E = sum x[i]^2.
SensingMetric energy_metric(const SampleBuffer& signal);

// Smallest calibration sample accepted for `target_pf`: ceil(10 / target_pf).
std::size_t min_calibration_trials(double target_pf);

// Empirical (1 - target_pf) quantile: the order statistic at 1-based rank
// ceil((1 - target_pf) K) of the ascending sample. Throws CalibrationError
// when K < min_calibration_trials(target_pf).
Threshold calibrate_threshold(std::span<const double> metric_sample, double target_pf,
                              DetectorKind detector = DetectorKind::CycleFeature);

// H1 iff metric >= threshold. Throws UsageError on detector mismatch.
Decision decide(const SensingMetric& metric, const Threshold& threshold);

// Single-line threshold file `detector,target_pf,threshold`.
void write_threshold_file(const Threshold& threshold, const std::string& path);
Threshold read_threshold_file(const std::string& path);

}  // namespace cyclo
