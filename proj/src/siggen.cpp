#include "cyclo/siggen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "cyclo/error.hpp"
#include "cyclo/fft.hpp"
#include "cyclo/format.hpp"

namespace cyclo {

namespace {

constexpr const char* kRateHeader = "# sample_rate_hz=";

void require_length(std::size_t n_samples) {
    if (n_samples == 0) throw ConfigError("n_samples must be positive");
}

void require_rate(double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw ConfigError("sample_rate_hz must be positive and finite, got " + format_double(sample_rate_hz));
}

// cos(2 pi f k / fs) evaluated on the fractional cycle count so the phase
// stays exact for long buffers.
std::vector<double> carrier(double carrier_hz, std::size_t n_samples, double sample_rate_hz) {
    std::vector<double> out(n_samples);
    const double cycles_per_sample = carrier_hz / sample_rate_hz;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double cycles = cycles_per_sample * static_cast<double>(k);
        const double frac = cycles - std::floor(cycles);
        out[k] = std::cos(2.0 * std::numbers::pi * frac);
    }
    return out;
}

void normalize_power(std::vector<double>& x) {
    double energy = 0.0;
    for (double v : x) energy += v * v;
    if (!(energy > 0.0)) throw ConfigError("generated waveform has zero power");
    const double scale = 1.0 / std::sqrt(energy / static_cast<double>(x.size()));
    for (double& v : x) v *= scale;
}

// Zero-mean, unit-RMS white Gaussian noise keeping only DFT bins with
// 0 < |f| <= bandwidth_hz.
std::vector<double> lowpass_message(std::size_t n_samples, double sample_rate_hz, double bandwidth_hz,
                                    std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<cplx> spectrum(n_samples);
    for (auto& v : spectrum) v = gauss(rng);
    spectrum = forward_dft(spectrum);

    const double resolution = sample_rate_hz / static_cast<double>(n_samples);
    std::size_t kept = 0;
    for (std::size_t v = 0; v < n_samples; ++v) {
        const double bin = v <= n_samples / 2 ? static_cast<double>(v)
                                              : static_cast<double>(v) - static_cast<double>(n_samples);
        const double f = std::abs(bin) * resolution;
        if (v == 0 || f > bandwidth_hz) {
            spectrum[v] = 0.0;
        } else {
            ++kept;
        }
    }
    if (kept == 0)
        throw ConfigError("message bandwidth " + format_double(bandwidth_hz) +
                          " Hz is below the frequency resolution " + format_double(resolution) + " Hz");

    const auto time = inverse_dft(spectrum);
    std::vector<double> message(n_samples);
    double power = 0.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        message[k] = time[k].real();
        power += message[k] * message[k];
    }
    const double scale = 1.0 / std::sqrt(power / static_cast<double>(n_samples));
    for (double& v : message) v *= scale;
    return message;
}

}  // namespace

SampleBuffer::SampleBuffer(std::vector<double> samples, double sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
    if (samples_.empty()) throw ConfigError("sample buffer must not be empty");
    require_rate(sample_rate_hz_);
    if (!std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); }))
        throw ConfigError("sample buffer contains non-finite values");
}

double SampleBuffer::average_power() const {
    double energy = 0.0;
    for (double v : samples_) energy += v * v;
    return energy / static_cast<double>(samples_.size());
}

std::string to_string(ModulationKind kind) {
    switch (kind) {
        case ModulationKind::AM: return "am";
        case ModulationKind::BPSK: return "bpsk";
    }
    return "unknown";
}

ModulationKind parse_modulation(const std::string& name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "am") return ModulationKind::AM;
    if (lower == "bpsk") return ModulationKind::BPSK;
    throw ConfigError("unknown modulation '" + name + "' (expected am or bpsk)");
}

void ModulationSpec::validate(double sample_rate_hz) const {
    require_rate(sample_rate_hz);
    if (!(carrier_hz > 0.0)) throw ConfigError("carrier_hz must be positive");
    if (!(carrier_hz < sample_rate_hz / 2.0))
        throw ConfigError("carrier " + format_double(carrier_hz) + " Hz is not below Nyquist (" +
                          format_double(sample_rate_hz / 2.0) + " Hz)");
    if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth_hz must be positive");
    if (!(bandwidth_hz < carrier_hz)) throw ConfigError("bandwidth_hz must be below carrier_hz");
    switch (kind) {
        case ModulationKind::AM:
            if (!(am_mod_index >= 0.0 && am_mod_index <= 1.0))
                throw ConfigError("AM modulation index must lie in [0, 1], got " + format_double(am_mod_index));
            break;
        case ModulationKind::BPSK:
            if (!(symbol_rate_hz > 0.0)) throw ConfigError("symbol_rate_hz must be positive");
            if (!(symbol_rate_hz < sample_rate_hz))
                throw ConfigError("symbol rate " + format_double(symbol_rate_hz) + " Hz must be below the sample rate");
            break;
    }
}

SampleBuffer generate_am(const ModulationSpec& spec, std::size_t n_samples, double sample_rate_hz,
                         std::uint64_t seed) {
    if (spec.kind != ModulationKind::AM) throw ConfigError("generate_am called with a non-AM spec");
    require_length(n_samples);
    spec.validate(sample_rate_hz);

    auto x = carrier(spec.carrier_hz, n_samples, sample_rate_hz);
    if (spec.am_mod_index > 0.0) {
        std::mt19937_64 rng(seed);
        const auto message = lowpass_message(n_samples, sample_rate_hz, spec.bandwidth_hz, rng);
        for (std::size_t k = 0; k < n_samples; ++k) x[k] *= 1.0 + spec.am_mod_index * message[k];
    }
    normalize_power(x);
    return SampleBuffer(std::move(x), sample_rate_hz);
}

SampleBuffer generate_bpsk(const ModulationSpec& spec, std::size_t n_samples, double sample_rate_hz,
                           std::uint64_t seed) {
    if (spec.kind != ModulationKind::BPSK) throw ConfigError("generate_bpsk called with a non-BPSK spec");
    require_length(n_samples);
    spec.validate(sample_rate_hz);

    auto symbol_index = [&](std::size_t k) {
        return static_cast<std::size_t>(std::floor(static_cast<double>(k) * spec.symbol_rate_hz / sample_rate_hz));
    };
    const std::size_t n_symbols = symbol_index(n_samples - 1) + 1;
    std::mt19937_64 rng(seed);
    std::vector<double> symbols(n_symbols);
    for (auto& s : symbols) s = (rng() >> 63) != 0 ? 1.0 : -1.0;

    auto x = carrier(spec.carrier_hz, n_samples, sample_rate_hz);
    for (std::size_t k = 0; k < n_samples; ++k) {
        x[k] *= symbols[std::min(symbol_index(k), n_symbols - 1)];
    }
    normalize_power(x);
    return SampleBuffer(std::move(x), sample_rate_hz);
}

SampleBuffer generate(const ModulationSpec& spec, std::size_t n_samples, double sample_rate_hz,
                      std::uint64_t seed) {
    switch (spec.kind) {
        case ModulationKind::AM: return generate_am(spec, n_samples, sample_rate_hz, seed);
        case ModulationKind::BPSK: return generate_bpsk(spec, n_samples, sample_rate_hz, seed);
    }
    throw ConfigError("unknown modulation kind");
}

double noise_variance_for(double signal_power, double snr_db) {
    if (std::isnan(snr_db)) throw ConfigError("snr_db is NaN");
    if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
    return signal_power / std::pow(10.0, snr_db / 10.0);
}

SampleBuffer add_awgn(const SampleBuffer& signal, const ChannelSpec& channel) {
    const double variance = noise_variance_for(signal.average_power(), channel.snr_db);
    const auto in = signal.samples();
    std::vector<double> out(in.begin(), in.end());
    if (variance > 0.0) {
        std::mt19937_64 rng(channel.seed);
        std::normal_distribution<double> gauss(0.0, std::sqrt(variance));
        for (double& v : out) v += gauss(rng);
    }
    return SampleBuffer(std::move(out), signal.sample_rate_hz());
}

SampleBuffer noise_only(std::size_t n_samples, double variance, double sample_rate_hz, std::uint64_t seed) {
    require_length(n_samples);
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw ConfigError("noise variance must be positive and finite, got " + format_double(variance));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(variance));
    std::vector<double> out(n_samples);
    for (double& v : out) v = gauss(rng);
    return SampleBuffer(std::move(out), sample_rate_hz);
}

void write_signal_file(const SampleBuffer& signal, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << kRateHeader << format_double(signal.sample_rate_hz()) << '\n';
    for (double v : signal.samples()) out << format_double(v) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

SampleBuffer read_signal_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open signal file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line.rfind(kRateHeader, 0) != 0)
        throw IoError("signal file '" + path + "' must start with '" + kRateHeader + "<value>'");
    double rate = 0.0;
    try {
        rate = parse_double(line.substr(std::string(kRateHeader).size()), "sample_rate_hz");
    } catch (const ConfigError& e) {
        throw IoError("signal file '" + path + "': " + e.what());
    }
    std::vector<double> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            samples.push_back(parse_double(line, "sample"));
        } catch (const ConfigError& e) {
            throw IoError("signal file '" + path + "' line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    try {
        return SampleBuffer(std::move(samples), rate);
    } catch (const ConfigError& e) {
        throw IoError("signal file '" + path + "': " + e.what());
    }
}

}  // namespace cyclo
