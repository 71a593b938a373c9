#include "subnyq/recovery_engine.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "subnyq/fft.hpp"
#include "subnyq/io_util.hpp"

namespace subnyq {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

Eigen::Map<const MatrixXcd, 0, Eigen::OuterStride<>> focused_slice(const FocusedTensor& focused,
                                                                   int m, int u) {
    // K x Q view of Phi_m at focus bin u; receivers are columns.
    const std::complex<double>* base = focused.data.data() + focused.index(m, 0, u, 0);
    const Eigen::Index stride =
        static_cast<Eigen::Index>(focused.num_bins) * focused.num_coeffs();
    return {base, focused.num_coeffs(), focused.num_rx, Eigen::OuterStride<>(stride)};
}

Eigen::Map<MatrixXcd, 0, Eigen::OuterStride<>> focused_slice(FocusedTensor& focused, int m,
                                                             int u) {
    std::complex<double>* base = focused.data.data() + focused.index(m, 0, u, 0);
    const Eigen::Index stride =
        static_cast<Eigen::Index>(focused.num_bins) * focused.num_coeffs();
    return {base, focused.num_coeffs(), focused.num_rx, Eigen::OuterStride<>(stride)};
}

double total_norm(const FocusedTensor& focused) {
    double acc = 0.0;
    for (const auto& v : focused.data) acc += std::norm(v);
    return std::sqrt(acc);
}

}  // namespace

Dictionaries build_dictionaries(const RadarParams& params, const ArrayConfig& array,
                                const TxPlan& plan, const std::vector<int>& kappa) {
    params.validate();
    array.validate();
    if (array.num_tx() != plan.num_channels())
        throw ConfigError("build_dictionaries: array and transmit plan disagree on channel count");
    if (kappa.empty()) throw SpectrumError("build_dictionaries: empty coefficient set");

    Dictionaries dict;
    dict.kappa = kappa;
    dict.range_bins = params.range_bins();
    dict.azimuth_bins = array.azimuth_bins();

    const int num_channels = array.num_tx();
    const int num_rx = array.num_rx();
    const int num_coeffs = static_cast<int>(kappa.size());

    dict.range_atoms.reserve(num_channels);
    dict.azimuth_atoms.reserve(num_channels);
    for (int m = 0; m < num_channels; ++m) {
        const double carrier_offset = plan.carrier_offsets_hz[m];
        MatrixXcd range_atoms(num_coeffs, dict.range_bins);
        for (int n = 0; n < dict.range_bins; ++n) {
            // Delay of range bin n expressed as a per-coefficient phase ramp.
            const double step = -2.0 * kPi * n / static_cast<double>(dict.range_bins);
            const double carrier_phase = step * carrier_offset * params.pri_s;
            for (int k = 0; k < num_coeffs; ++k)
                range_atoms(k, n) = std::polar(1.0, step * kappa[k] + carrier_phase);
        }
        dict.range_atoms.push_back(std::move(range_atoms));

        MatrixXcd azimuth_atoms(num_rx, dict.azimuth_bins);
        for (int q = 0; q < num_rx; ++q) {
            const double beta = compute_beta(array.tx_positions[m], array.rx_positions[q],
                                             carrier_offset, params);
            for (int r = 0; r < dict.azimuth_bins; ++r) {
                const double theta = -1.0 + 2.0 * r / static_cast<double>(dict.azimuth_bins);
                azimuth_atoms(q, r) = std::polar(1.0, 2.0 * kPi * beta * theta);
            }
        }
        dict.azimuth_atoms.push_back(std::move(azimuth_atoms));
    }
    return dict;
}

FocusedTensor doppler_focus(const CoefficientTensor& tensor) {
    if (tensor.num_pulses < 1) throw std::invalid_argument("doppler_focus: no pulses");
    FocusedTensor focused;
    focused.num_channels = tensor.num_channels;
    focused.num_rx = tensor.num_rx;
    focused.num_bins = tensor.num_pulses;
    focused.kappa = tensor.kappa;
    focused.data.resize(tensor.data.size());

    const int num_pulses = tensor.num_pulses;
    const int num_coeffs = tensor.num_coeffs();
    FftPlan plan(static_cast<std::size_t>(num_pulses));
    std::vector<std::complex<double>> line(num_pulses);

    // nu_u = -1/(2 pri) + u/(P pri) turns the focusing sum into a DFT of the
    // pulse sequence with alternating signs: Phi^u = FFT_P((-1)^p y^p)[u].
    for (int m = 0; m < tensor.num_channels; ++m)
        for (int q = 0; q < tensor.num_rx; ++q)
            for (int k = 0; k < num_coeffs; ++k) {
                for (int p = 0; p < num_pulses; ++p) {
                    const auto& v = tensor.at(m, q, p, k);
                    line[p] = (p & 1) ? -v : v;
                }
                plan.forward(line.data());
                for (int u = 0; u < num_pulses; ++u) focused.at(m, q, u, k) = line[u];
            }
    return focused;
}

RecoveryResult recover(const FocusedTensor& focused, const Dictionaries& dict,
                       const StopRule& stop) {
    if (focused.data.empty() || focused.num_channels < 1 || focused.num_rx < 1)
        throw std::invalid_argument("recover: empty focused tensor");
    if (focused.num_channels != dict.num_channels() || focused.kappa != dict.kappa)
        throw ConfigError("recover: dictionary does not match the focused tensor");
    if (!stop.max_detections && !stop.residual_ratio)
        throw std::invalid_argument("recover: no stop criterion set");
    if (stop.max_detections && *stop.max_detections < 0)
        throw std::invalid_argument("recover: negative detection count");

    const int num_channels = focused.num_channels;
    const int num_bins = focused.num_bins;
    const int range_bins = dict.range_bins;
    const int azimuth_bins = dict.azimuth_bins;
    const double focus_gain = static_cast<double>(num_bins);  // P at an on-grid bin

    RecoveryResult result;
    FocusedTensor residual = focused;
    const double initial_norm = total_norm(residual);
    result.residual_norms.push_back(initial_norm);
    if (initial_norm == 0.0) return result;

    const int max_detections =
        stop.max_detections ? *stop.max_detections
                            : range_bins * azimuth_bins * num_bins;

    Eigen::ArrayXXd objective(range_bins, azimuth_bins);
    while (result.size() < max_detections) {
        // Joint atom selection: max over (u, r, s) of sum_m |W_m|^2 with
        // W_m = A_m^H Phi_m conj(B_m).
        GridIndex best{-1, -1, -1};
        double best_value = -1.0;
        for (int u = 0; u < num_bins; ++u) {
            objective.setZero();
            for (int m = 0; m < num_channels; ++m) {
                const MatrixXcd correlation = dict.range_atoms[m].adjoint() *
                                              focused_slice(residual, m, u) *
                                              dict.azimuth_atoms[m].conjugate();
                objective += correlation.array().abs2();
            }
            for (int r = 0; r < azimuth_bins; ++r)
                for (int s = 0; s < range_bins; ++s)
                    if (objective(s, r) > best_value) {
                        best_value = objective(s, r);
                        best = {s, r, u};
                    }
        }
        if (best_value <= 0.0) break;  // residual has no structure left

        const bool duplicate =
            std::find(result.support.begin(), result.support.end(), best) != result.support.end();
        if (duplicate) break;  // numerically exhausted residual
        result.support.push_back(best);

        // Joint least-squares amplitude refit over the accumulated support.
        const int support_size = result.size();
        MatrixXcd gram = MatrixXcd::Zero(support_size, support_size);
        VectorXcd rhs = VectorXcd::Zero(support_size);
        for (int i = 0; i < support_size; ++i) {
            const GridIndex& a = result.support[i];
            for (int m = 0; m < num_channels; ++m) {
                const auto range_i = dict.range_atoms[m].col(a.range_bin);
                const auto azimuth_i = dict.azimuth_atoms[m].col(a.azimuth_bin);
                rhs(i) += focus_gain * (range_i.adjoint() * focused_slice(focused, m, a.doppler_bin) *
                                        azimuth_i.conjugate())(0);
                for (int j = 0; j < support_size; ++j) {
                    const GridIndex& b = result.support[j];
                    if (a.doppler_bin != b.doppler_bin) continue;
                    gram(i, j) += focus_gain * focus_gain *
                                  range_i.dot(dict.range_atoms[m].col(b.range_bin)) *
                                  azimuth_i.dot(dict.azimuth_atoms[m].col(b.azimuth_bin));
                }
            }
        }
        Eigen::LDLT<MatrixXcd> solver(gram);
        if (solver.info() != Eigen::Success)
            throw RecoveryError("recover: ill-conditioned support system");
        const Eigen::VectorXd pivots = solver.vectorD().cwiseAbs();
        if (pivots.minCoeff() <= 1e-12 * pivots.maxCoeff())
            throw RecoveryError("recover: ill-conditioned support system");
        const VectorXcd amplitudes = solver.solve(rhs);
        result.amplitudes.assign(amplitudes.data(), amplitudes.data() + support_size);

        // Residual = data minus the fitted model, rebuilt from scratch so the
        // norms track the least-squares projection exactly.
        residual = focused;
        for (int i = 0; i < support_size; ++i) {
            const GridIndex& a = result.support[i];
            for (int m = 0; m < num_channels; ++m) {
                auto slice = focused_slice(residual, m, a.doppler_bin);
                slice.noalias() -= (focus_gain * amplitudes(i)) *
                                   dict.range_atoms[m].col(a.range_bin) *
                                   dict.azimuth_atoms[m].col(a.azimuth_bin).transpose();
            }
        }
        const double norm = total_norm(residual);
        result.residual_norms.push_back(norm);

        if (stop.residual_ratio && norm <= *stop.residual_ratio * initial_norm) break;
    }

    return result;
}

std::vector<PhysicalCoords> estimate_parameters(const std::vector<GridIndex>& support,
                                                const SceneGrid& grid) {
    std::vector<PhysicalCoords> estimates;
    estimates.reserve(support.size());
    for (const GridIndex& idx : support) estimates.push_back(grid_to_physical(idx, grid));
    return estimates;
}

namespace {

// Correlation of the continuous-parameter atom against the raw tensor,
// aggregated over channels.
double continuous_objective(const CoefficientTensor& tensor, const RadarParams& params,
                            const ArrayConfig& array, const TxPlan& plan, double delay_s,
                            double sine_azimuth, double doppler_hz) {
    const int num_coeffs = tensor.num_coeffs();
    const int num_pulses = tensor.num_pulses;
    double objective = 0.0;
    std::vector<std::complex<double>> range_conj(num_coeffs);
    std::vector<std::complex<double>> pulse_conj(num_pulses);
    for (int p = 0; p < num_pulses; ++p)
        pulse_conj[p] = std::polar(1.0, -2.0 * kPi * doppler_hz * p * params.pri_s);
    for (int m = 0; m < tensor.num_channels; ++m) {
        const double carrier_offset = plan.carrier_offsets_hz[m];
        for (int k = 0; k < num_coeffs; ++k) {
            const double freq = tensor.kappa[k] / params.pri_s + carrier_offset;
            range_conj[k] = std::polar(1.0, 2.0 * kPi * freq * delay_s);
        }
        std::complex<double> acc{0.0, 0.0};
        for (int q = 0; q < tensor.num_rx; ++q) {
            const double beta = compute_beta(array.tx_positions[m], array.rx_positions[q],
                                             carrier_offset, params);
            const std::complex<double> azimuth_conj =
                std::polar(1.0, -2.0 * kPi * beta * sine_azimuth);
            std::complex<double> rx_acc{0.0, 0.0};
            for (int p = 0; p < num_pulses; ++p) {
                const std::complex<double>* row = tensor.data.data() + tensor.index(m, q, p, 0);
                std::complex<double> k_acc{0.0, 0.0};
                for (int k = 0; k < num_coeffs; ++k) k_acc += range_conj[k] * row[k];
                rx_acc += pulse_conj[p] * k_acc;
            }
            acc += azimuth_conj * rx_acc;
        }
        objective += std::norm(acc);
    }
    return objective;
}

// Model contribution of one detection, subtracted when refining the others.
void subtract_detection(CoefficientTensor& tensor, const RadarParams& params,
                        const ArrayConfig& array, const TxPlan& plan,
                        const PhysicalCoords& coords, std::complex<double> amplitude) {
    TargetScene scene;
    Target target;
    target.reflectivity = amplitude;
    target.delay_s = coords.delay_s;
    target.sine_azimuth = coords.sine_azimuth;
    target.doppler_hz = coords.doppler_hz;
    scene.targets.push_back(target);
    CognitiveSpectrum unit;
    unit.tx_bandwidth_hz = params.tx_bandwidth_hz;
    unit.bands = {{0.0, params.tx_bandwidth_hz}};
    unit.amplitude_scale = 1.0;
    unit.kappa = tensor.kappa;
    const CoefficientTensor model = synthesize(scene, array, plan, unit, params);
    for (std::size_t i = 0; i < tensor.data.size(); ++i) tensor.data[i] -= model.data[i];
}

}  // namespace

RecoveryResult refine(const RecoveryResult& result, const CoefficientTensor& tensor,
                      const RadarParams& params, const ArrayConfig& array, const TxPlan& plan,
                      int factor) {
    if (factor < 1) throw std::invalid_argument("refine: factor must be at least 1");
    if (result.estimates.size() != result.support.size())
        throw std::invalid_argument("refine: run estimate_parameters first");
    RecoveryResult refined = result;

    SceneGrid grid;
    grid.range_bins = params.range_bins();
    grid.azimuth_bins = array.azimuth_bins();
    grid.doppler_bins = params.pulse_count;
    grid.pri_s = params.pri_s;

    const double delay_step = grid.range_bin_delay_s() / factor;
    const double azimuth_step = grid.azimuth_bin_width() / factor;
    const double doppler_step = grid.doppler_bin_hz() / factor;
    const double doppler_limit = 1.0 / (2.0 * params.pri_s);

    for (int i = 0; i < result.size(); ++i) {
        CoefficientTensor remainder = tensor;
        for (int j = 0; j < result.size(); ++j)
            if (j != i)
                subtract_detection(remainder, params, array, plan, refined.estimates[j],
                                   refined.amplitudes[j]);

        const PhysicalCoords center = refined.estimates[i];
        PhysicalCoords best = center;
        double best_value = -1.0;
        for (int du = -factor; du <= factor; ++du)
            for (int dr = -factor; dr <= factor; ++dr)
                for (int ds = -factor; ds <= factor; ++ds) {
                    PhysicalCoords probe;
                    probe.delay_s = center.delay_s + ds * delay_step;
                    probe.sine_azimuth = center.sine_azimuth + dr * azimuth_step;
                    probe.doppler_hz = center.doppler_hz + du * doppler_step;
                    if (probe.delay_s < 0.0 || probe.delay_s >= params.pri_s) continue;
                    if (probe.sine_azimuth < -1.0 || probe.sine_azimuth >= 1.0) continue;
                    if (std::abs(probe.doppler_hz) > doppler_limit) continue;
                    const double value =
                        continuous_objective(remainder, params, array, plan, probe.delay_s,
                                             probe.sine_azimuth, probe.doppler_hz);
                    if (value > best_value) {
                        best_value = value;
                        best = probe;
                    }
                }
        refined.estimates[i] = best;
    }
    return refined;
}

void write_result_csv(std::ostream& out, const RecoveryResult& result,
                      const RadarParams& params) {
    if (result.estimates.size() != result.support.size())
        throw std::invalid_argument("write_result_csv: run estimate_parameters first");
    out << "s,r,u,alpha_re,alpha_im,range_m,sine_azimuth,velocity_mps,iteration\n";
    for (int i = 0; i < result.size(); ++i) {
        const GridIndex& idx = result.support[i];
        const PhysicalCoords& est = result.estimates[i];
        out << idx.range_bin << ',' << idx.azimuth_bin << ',' << idx.doppler_bin << ','
            << fmt_double(result.amplitudes[i].real()) << ','
            << fmt_double(result.amplitudes[i].imag()) << ','
            << fmt_double(est.delay_s * kSpeedOfLight / 2.0) << ','
            << fmt_double(est.sine_azimuth) << ','
            << fmt_double(est.doppler_hz * params.wavelength_m / 2.0) << ',' << i + 1 << '\n';
    }
}

}  // namespace subnyq
