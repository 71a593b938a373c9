#pragma once

// Independent reference implementations used as test oracles. Everything here
// is written from the model formulas with plain loops, on purpose: these
// paths must not share code with the implementations they check.

#include <cmath>
#include <complex>
#include <vector>

#include "subnyq/array_geometry.hpp"
#include "subnyq/scene_model.hpp"
#include "subnyq/signal_synthesis.hpp"
#include "subnyq/waveform_spectrum.hpp"

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;
using cxd = std::complex<double>;

// Coefficient-domain echo model, evaluated term by term:
//   y_mqp[k] = gamma * sum_l alpha_l e^{j2pi beta theta_l}
//              e^{-j2pi k tau_l / pri} e^{-j2pi f_m tau_l} e^{j2pi f_D p pri}
// with beta = (zeta_q + xi_m)(f_m / f_c + 1).
inline std::vector<cxd> direct_coefficients(const subnyq::TargetScene& scene,
                                            const subnyq::ArrayConfig& array,
                                            const subnyq::TxPlan& plan, double gamma,
                                            const std::vector<int>& kappa,
                                            const subnyq::RadarParams& params) {
    const int num_tx = array.num_tx();
    const int num_rx = array.num_rx();
    const int num_pulses = params.pulse_count;
    const int num_coeffs = static_cast<int>(kappa.size());
    std::vector<cxd> out(static_cast<std::size_t>(num_tx) * num_rx * num_pulses * num_coeffs,
                         cxd{0.0, 0.0});
    std::size_t idx = 0;
    for (int m = 0; m < num_tx; ++m) {
        const double f_m = plan.carrier_offsets_hz[m];
        for (int q = 0; q < num_rx; ++q) {
            const double beta =
                (array.rx_positions[q] + array.tx_positions[m]) * (f_m / params.carrier_hz + 1.0);
            for (int p = 0; p < num_pulses; ++p) {
                for (int k = 0; k < num_coeffs; ++k, ++idx) {
                    cxd acc{0.0, 0.0};
                    for (const subnyq::Target& t : scene.targets) {
                        const double phase = 2.0 * kPi * beta * t.sine_azimuth -
                                             2.0 * kPi * kappa[k] * t.delay_s / params.pri_s -
                                             2.0 * kPi * f_m * t.delay_s +
                                             2.0 * kPi * t.doppler_hz * p * params.pri_s;
                        acc += t.reflectivity * cxd{std::cos(phase), std::sin(phase)};
                    }
                    out[idx] = gamma * acc;
                }
            }
        }
    }
    return out;
}

// Plain O(n^2) DFT with the forward sign convention.
inline std::vector<cxd> naive_dft(const std::vector<cxd>& x) {
    const std::size_t n = x.size();
    std::vector<cxd> out(n, cxd{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            const double phase = -2.0 * kPi * static_cast<double>(k * i) / static_cast<double>(n);
            out[k] += x[i] * cxd{std::cos(phase), std::sin(phase)};
        }
    return out;
}

// Doppler focusing by direct summation at nu_u = -1/(2 pri) + u/(P pri).
inline cxd direct_focus(const subnyq::CoefficientTensor& tensor, double pri_s, int m, int q,
                        int u, int k) {
    const double nu = -1.0 / (2.0 * pri_s) + u / (tensor.num_pulses * pri_s);
    cxd acc{0.0, 0.0};
    for (int p = 0; p < tensor.num_pulses; ++p) {
        const double phase = -2.0 * kPi * nu * p * pri_s;
        acc += tensor.at(m, q, p, k) * cxd{std::cos(phase), std::sin(phase)};
    }
    return acc;
}

// Exhaustive correlation objective over all (s, r, u) candidates, built from
// the exponent formulas alone: the atom for (s, r) in channel m has entries
//   a_k = e^{-j2pi (kappa_k + f_m pri) s / TN},  b_q = e^{j2pi beta (-1 + 2r/AZ)},
// and the objective at focus bin u is sum_m |sum_{q,k} conj(a_k b_q) Phi|^2.
struct ObjectiveMap {
    int range_bins, azimuth_bins, doppler_bins;
    std::vector<double> values;  // (u, r, s) row-major
    double& at(int s, int r, int u) {
        return values[(static_cast<std::size_t>(u) * azimuth_bins + r) * range_bins + s];
    }
};

inline ObjectiveMap exhaustive_objective(const subnyq::CoefficientTensor& tensor,
                                         const subnyq::ArrayConfig& array,
                                         const subnyq::TxPlan& plan,
                                         const subnyq::RadarParams& params) {
    const int range_bins = params.range_bins();
    const int azimuth_bins = array.azimuth_bins();
    const int doppler_bins = params.pulse_count;
    const int num_coeffs = tensor.num_coeffs();

    ObjectiveMap map{range_bins, azimuth_bins, doppler_bins,
                     std::vector<double>(static_cast<std::size_t>(range_bins) * azimuth_bins *
                                             doppler_bins,
                                         0.0)};
    for (int u = 0; u < doppler_bins; ++u) {
        const double nu = -1.0 / (2.0 * params.pri_s) + u / (doppler_bins * params.pri_s);
        for (int r = 0; r < azimuth_bins; ++r) {
            const double theta = -1.0 + 2.0 * r / static_cast<double>(azimuth_bins);
            for (int s = 0; s < range_bins; ++s) {
                double objective = 0.0;
                for (int m = 0; m < tensor.num_channels; ++m) {
                    const double f_m = plan.carrier_offsets_hz[m];
                    cxd acc{0.0, 0.0};
                    for (int q = 0; q < tensor.num_rx; ++q) {
                        const double beta = (array.rx_positions[q] + array.tx_positions[m]) *
                                            (f_m / params.carrier_hz + 1.0);
                        for (int p = 0; p < tensor.num_pulses; ++p) {
                            for (int k = 0; k < num_coeffs; ++k) {
                                const double atom_phase =
                                    -2.0 * kPi * (tensor.kappa[k] + f_m * params.pri_s) * s /
                                        static_cast<double>(range_bins) +
                                    2.0 * kPi * beta * theta + 2.0 * kPi * nu * p * params.pri_s;
                                // conj(atom) * data, atom includes the focus phasor
                                const cxd conj_atom{std::cos(atom_phase), -std::sin(atom_phase)};
                                acc += conj_atom * tensor.at(m, q, p, k);
                            }
                        }
                    }
                    objective += std::norm(acc);
                }
                map.at(s, r, u) = objective;
            }
        }
    }
    return map;
}

}  // namespace oracles
