#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cyclo {

// Real-valued sampled waveform. Construction validates that the buffer is
// nonempty, every sample is finite and the sampling rate is positive.
class SampleBuffer {
public:
    SampleBuffer(std::vector<double> samples, double sample_rate_hz);

    std::span<const double> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double sample_rate_hz() const { return sample_rate_hz_; }
    double sample_period_s() const { return 1.0 / sample_rate_hz_; }
    double duration_s() const { return static_cast<double>(samples_.size()) / sample_rate_hz_; }

    // Mean of x[k]^2.
    double average_power() const;

    double operator[](std::size_t k) const { return samples_[k]; }

private:
    std::vector<double> samples_;
    double sample_rate_hz_;
};

enum class ModulationKind { AM, BPSK };

std::string to_string(ModulationKind kind);
ModulationKind parse_modulation(const std::string& name);

struct ModulationSpec {
    ModulationKind kind = ModulationKind::AM;
    double carrier_hz = 1.0e6;
    double bandwidth_hz = 10.0e3;
    double am_mod_index = 0.5;
    double symbol_rate_hz = 10.0e3;

    // Throws ConfigError when the spec cannot be sampled at `sample_rate_hz`.
    void validate(double sample_rate_hz) const;
};

struct ChannelSpec {
    double snr_db = 0.0;  // +inf disables the channel
    std::uint64_t seed = 0;
};

// (1 + mu*m[k]) cos(2 pi fc k Ts), m a zero-mean unit-RMS Gaussian message
// brick-wall limited to bandwidth_hz, scaled to unit average power.
SampleBuffer generate_am(const ModulationSpec& spec, std::size_t n_samples,
                         double sample_rate_hz, std::uint64_t seed);

// Rectangular-pulse BPSK on a cosine carrier, unit average power. Symbol
// boundaries fall at multiples of sample_rate_hz / symbol_rate_hz samples.
SampleBuffer generate_bpsk(const ModulationSpec& spec, std::size_t n_samples,
                           double sample_rate_hz, std::uint64_t seed);

// Dispatches on spec.kind.
SampleBuffer generate(const ModulationSpec& spec, std::size_t n_samples,
                      double sample_rate_hz, std::uint64_t seed);

// signal + n, n ~ N(0, P/10^(snr/10)) with P the signal's average power
// over the full sampling bandwidth.
SampleBuffer add_awgn(const SampleBuffer& signal, const ChannelSpec& channel);

SampleBuffer noise_only(std::size_t n_samples, double variance,
                        double sample_rate_hz, std::uint64_t seed);

// Noise variance that yields `snr_db` against a signal of power `signal_power`.
double noise_variance_for(double signal_power, double snr_db);

// Text dump: header line `# sample_rate_hz=<value>` then one sample per line.
void write_signal_file(const SampleBuffer& signal, const std::string& path);
SampleBuffer read_signal_file(const std::string& path);

}  // namespace cyclo
