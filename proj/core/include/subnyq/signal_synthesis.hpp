#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "subnyq/array_geometry.hpp"
#include "subnyq/scene_model.hpp"
#include "subnyq/waveform_spectrum.hpp"

namespace subnyq {

/// Sampled Fourier coefficients of the received echoes, indexed
/// (channel m, receiver q, pulse p, coefficient k over kappa), k fastest.
struct CoefficientTensor {
    int num_channels = 0;  // M
    int num_rx = 0;        // Q
    int num_pulses = 0;    // P
    std::vector<int> kappa;
    std::vector<std::complex<double>> data;

    int num_coeffs() const { return static_cast<int>(kappa.size()); }
    std::size_t size() const { return data.size(); }

    std::size_t index(int m, int q, int p, int k) const {
        return ((static_cast<std::size_t>(m) * num_rx + q) * num_pulses + p) * kappa.size() + k;
    }
    std::complex<double>& at(int m, int q, int p, int k) { return data[index(m, q, p, k)]; }
    const std::complex<double>& at(int m, int q, int p, int k) const {
        return data[index(m, q, p, k)];
    }

    static CoefficientTensor zeros(int num_channels, int num_rx, int num_pulses,
                                   std::vector<int> kappa);
};

/// Direct evaluation of the coefficient-domain echo model: each entry is the
/// sum over targets of
///   alpha e^{j2pi beta theta} e^{-j2pi k tau_l / pri} e^{-j2pi f_m tau_l}
///   e^{j2pi f_D p pri},
/// scaled by the cognitive amplitude factor gamma.
CoefficientTensor synthesize(const TargetScene& scene, const ArrayConfig& array,
                             const TxPlan& plan, const CognitiveSpectrum& spectrum,
                             const RadarParams& params);

struct NoiseSpec {
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
};

/// Mean per-sample power of the tensor.
double mean_power(const CoefficientTensor& tensor);

/// Adds i.i.d. circular complex Gaussian noise with variance chosen so
/// mean-signal-power / variance hits spec.snr_db. Infinite SNR returns the
/// input unchanged; a zero-signal tensor with finite SNR is rejected
/// (std::domain_error) because the level would be undefined.
CoefficientTensor add_noise(const CoefficientTensor& tensor, const NoiseSpec& spec);

/// Same, with the variance supplied directly. Used by the experiment harness,
/// which calibrates the noise floor against the non-cognitive signal level so
/// a cognitive arm keeps its in-band power advantage.
CoefficientTensor add_noise_with_variance(const CoefficientTensor& tensor, double variance,
                                          std::uint64_t seed);

/// SNR degradation from out-of-band noise folding in a subsampled receiver:
/// 10 log10(1 + 2 q 10^(-A/10)) for subsampling factor q and stop-band
/// attenuation A dB.
double snr_loss_db(double q_factor, double stopband_atten_db);

struct AdcSpec {
    double saturation_dbm = 0.0;   // P_sat, magnitude of the +/- full-scale rails
    double bits = 0.0;             // b
    double effective_bits = 0.0;   // E_NoB
    double sample_rate_hz = 0.0;   // f_s
    double ref_bandwidth_hz = 0.0; // BW the floor is expressed at
};

struct DynamicRangeBudget {
    double range_db = 0.0;
    double floor_dbm = 0.0;
};

/// Receiver dynamic range from the effective number of bits:
///   DR = -1.76 + 6.02 E_NoB + 10 log10((f_s/2)/BW),  floor = -P_sat - DR.
DynamicRangeBudget dynamic_range(const AdcSpec& adc);

/// Ideal-quantizer variant: floor = P_sat - 6.02 b - 10 log10((f_s/2)/BW).
DynamicRangeBudget dynamic_range_ideal(const AdcSpec& adc);

/// Binary layout: magic, dims (M, Q, P, K), kappa, then the complex payload
/// row-major in (m, q, p, k) order, double or float pairs.
void write_tensor(std::ostream& out, const CoefficientTensor& tensor,
                  bool single_precision = false);
CoefficientTensor read_tensor(std::istream& in);

/// Human-readable export for small tensors: one row per entry.
void write_tensor_text(std::ostream& out, const CoefficientTensor& tensor);

}  // namespace subnyq
