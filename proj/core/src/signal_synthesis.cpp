#include "subnyq/signal_synthesis.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "subnyq/io_util.hpp"
#include "subnyq/rng.hpp"

namespace subnyq {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr char kTensorMagic[8] = {'S', 'N', 'Y', 'Q', 'T', 'N', 'S', '1'};

void check_target_windows(const TargetScene& scene, const RadarParams& params) {
    const double doppler_limit = 1.0 / (2.0 * params.pri_s);
    for (const Target& t : scene.targets) {
        if (t.delay_s < 0.0 || t.delay_s >= params.pri_s)
            throw std::out_of_range("synthesize: target delay outside [0, PRI)");
        if (std::abs(t.sine_azimuth) > 1.0)
            throw std::out_of_range("synthesize: target sine-azimuth outside [-1, 1]");
        if (std::abs(t.doppler_hz) > doppler_limit)
            throw std::out_of_range("synthesize: target Doppler outside the unambiguous window");
    }
}

template <typename T>
void write_raw(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw IoError("tensor file: truncated");
    return value;
}

}  // namespace

CoefficientTensor CoefficientTensor::zeros(int num_channels, int num_rx, int num_pulses,
                                           std::vector<int> kappa) {
    CoefficientTensor tensor;
    tensor.num_channels = num_channels;
    tensor.num_rx = num_rx;
    tensor.num_pulses = num_pulses;
    tensor.kappa = std::move(kappa);
    tensor.data.assign(static_cast<std::size_t>(num_channels) * num_rx * num_pulses *
                           tensor.kappa.size(),
                       {0.0, 0.0});
    return tensor;
}

CoefficientTensor synthesize(const TargetScene& scene, const ArrayConfig& array,
                             const TxPlan& plan, const CognitiveSpectrum& spectrum,
                             const RadarParams& params) {
    params.validate();
    array.validate();
    if (array.num_tx() != plan.num_channels())
        throw ConfigError("synthesize: array and transmit plan disagree on channel count");
    if (spectrum.kappa.empty()) throw SpectrumError("synthesize: empty coefficient set");
    check_target_windows(scene, params);

    const int num_channels = array.num_tx();
    const int num_rx = array.num_rx();
    const int num_pulses = params.pulse_count;
    const int num_coeffs = spectrum.num_coeffs();
    const int num_targets = scene.size();
    const double gamma = spectrum.amplitude_scale;

    CoefficientTensor tensor =
        CoefficientTensor::zeros(num_channels, num_rx, num_pulses, spectrum.kappa);
    if (num_targets == 0) return tensor;

    // Per-target range phasors for one channel: e^{-j2pi (k/pri + f_m) tau_l}.
    std::vector<std::complex<double>> range_phase(
        static_cast<std::size_t>(num_targets) * num_coeffs);
    std::vector<std::complex<double>> pulse_phase(
        static_cast<std::size_t>(num_targets) * num_pulses);
    for (int l = 0; l < num_targets; ++l)
        for (int p = 0; p < num_pulses; ++p)
            pulse_phase[l * num_pulses + p] =
                std::polar(1.0, 2.0 * kPi * scene.targets[l].doppler_hz * p * params.pri_s);

    for (int m = 0; m < num_channels; ++m) {
        const double carrier_offset = plan.carrier_offsets_hz[m];
        for (int l = 0; l < num_targets; ++l) {
            const double delay = scene.targets[l].delay_s;
            for (int k = 0; k < num_coeffs; ++k) {
                const double freq = spectrum.kappa[k] / params.pri_s + carrier_offset;
                range_phase[l * num_coeffs + k] = std::polar(1.0, -2.0 * kPi * freq * delay);
            }
        }
        for (int q = 0; q < num_rx; ++q) {
            const double beta = compute_beta(array.tx_positions[m], array.rx_positions[q],
                                             carrier_offset, params);
            for (int l = 0; l < num_targets; ++l) {
                const std::complex<double> front =
                    gamma * scene.targets[l].reflectivity *
                    std::polar(1.0, 2.0 * kPi * beta * scene.targets[l].sine_azimuth);
                for (int p = 0; p < num_pulses; ++p) {
                    const std::complex<double> factor = front * pulse_phase[l * num_pulses + p];
                    std::complex<double>* row = tensor.data.data() + tensor.index(m, q, p, 0);
                    const std::complex<double>* phase = range_phase.data() + l * num_coeffs;
                    for (int k = 0; k < num_coeffs; ++k) row[k] += factor * phase[k];
                }
            }
        }
    }
    return tensor;
}

double mean_power(const CoefficientTensor& tensor) {
    if (tensor.data.empty()) return 0.0;
    double acc = 0.0;
    for (const auto& v : tensor.data) acc += std::norm(v);
    return acc / static_cast<double>(tensor.data.size());
}

CoefficientTensor add_noise(const CoefficientTensor& tensor, const NoiseSpec& spec) {
    if (std::isinf(spec.snr_db) && spec.snr_db > 0.0) return tensor;
    const double signal_power = mean_power(tensor);
    if (signal_power <= 0.0)
        throw std::domain_error("add_noise: SNR undefined for a zero-signal tensor");
    const double variance = signal_power * std::pow(10.0, -spec.snr_db / 10.0);
    return add_noise_with_variance(tensor, variance, spec.seed);
}

CoefficientTensor add_noise_with_variance(const CoefficientTensor& tensor, double variance,
                                          std::uint64_t seed) {
    if (variance < 0.0) throw std::domain_error("add_noise: negative noise variance");
    CoefficientTensor noisy = tensor;
    if (variance == 0.0) return noisy;
    Rng rng(seed);
    const double scale = std::sqrt(variance);
    for (auto& v : noisy.data) v += scale * rng.complex_normal();
    return noisy;
}

double snr_loss_db(double q_factor, double stopband_atten_db) {
    const double leak = std::pow(10.0, -stopband_atten_db / 10.0);
    return 10.0 * std::log10(1.0 + 2.0 * q_factor * leak);
}

DynamicRangeBudget dynamic_range(const AdcSpec& adc) {
    if (adc.ref_bandwidth_hz <= 0.0) throw ConfigError("dynamic_range: reference bandwidth must be positive");
    DynamicRangeBudget budget;
    budget.range_db = -1.76 + 6.02 * adc.effective_bits +
                      10.0 * std::log10(adc.sample_rate_hz / 2.0 / adc.ref_bandwidth_hz);
    budget.floor_dbm = -adc.saturation_dbm - budget.range_db;
    return budget;
}

DynamicRangeBudget dynamic_range_ideal(const AdcSpec& adc) {
    if (adc.ref_bandwidth_hz <= 0.0) throw ConfigError("dynamic_range: reference bandwidth must be positive");
    DynamicRangeBudget budget;
    budget.floor_dbm = adc.saturation_dbm - 6.02 * adc.bits -
                       10.0 * std::log10(adc.sample_rate_hz / 2.0 / adc.ref_bandwidth_hz);
    budget.range_db = adc.saturation_dbm - budget.floor_dbm;
    return budget;
}

void write_tensor(std::ostream& out, const CoefficientTensor& tensor, bool single_precision) {
    out.write(kTensorMagic, sizeof(kTensorMagic));
    write_raw<std::uint32_t>(out, single_precision ? 1u : 0u);
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.num_channels));
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.num_rx));
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.num_pulses));
    write_raw<std::uint32_t>(out, static_cast<std::uint32_t>(tensor.kappa.size()));
    for (int k : tensor.kappa) write_raw<std::int64_t>(out, k);
    if (single_precision) {
        for (const auto& v : tensor.data) {
            write_raw<float>(out, static_cast<float>(v.real()));
            write_raw<float>(out, static_cast<float>(v.imag()));
        }
    } else {
        for (const auto& v : tensor.data) {
            write_raw<double>(out, v.real());
            write_raw<double>(out, v.imag());
        }
    }
    if (!out) throw IoError("tensor file: write failed");
}

CoefficientTensor read_tensor(std::istream& in) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kTensorMagic, sizeof(magic)) != 0)
        throw IoError("tensor file: bad magic");
    const auto single_precision = read_raw<std::uint32_t>(in);
    CoefficientTensor tensor;
    tensor.num_channels = static_cast<int>(read_raw<std::uint32_t>(in));
    tensor.num_rx = static_cast<int>(read_raw<std::uint32_t>(in));
    tensor.num_pulses = static_cast<int>(read_raw<std::uint32_t>(in));
    const auto num_coeffs = read_raw<std::uint32_t>(in);
    tensor.kappa.resize(num_coeffs);
    for (auto& k : tensor.kappa) k = static_cast<int>(read_raw<std::int64_t>(in));
    const std::size_t total = static_cast<std::size_t>(tensor.num_channels) * tensor.num_rx *
                              tensor.num_pulses * num_coeffs;
    tensor.data.resize(total);
    if (single_precision) {
        for (auto& v : tensor.data) {
            const float re = read_raw<float>(in);
            const float im = read_raw<float>(in);
            v = {re, im};
        }
    } else {
        for (auto& v : tensor.data) {
            const double re = read_raw<double>(in);
            const double im = read_raw<double>(in);
            v = {re, im};
        }
    }
    return tensor;
}

void write_tensor_text(std::ostream& out, const CoefficientTensor& tensor) {
    out << "m,q,p,k,re,im\n";
    for (int m = 0; m < tensor.num_channels; ++m)
        for (int q = 0; q < tensor.num_rx; ++q)
            for (int p = 0; p < tensor.num_pulses; ++p)
                for (int k = 0; k < tensor.num_coeffs(); ++k) {
                    const auto& v = tensor.at(m, q, p, k);
                    out << m << ',' << q << ',' << p << ',' << tensor.kappa[k] << ','
                        << fmt_double(v.real()) << ',' << fmt_double(v.imag()) << '\n';
                }
}

}  // namespace subnyq
