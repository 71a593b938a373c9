#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "subnyq/scene_model.hpp"
#include "subnyq/signal_synthesis.hpp"

namespace subnyq {

/// Per-channel range and azimuth dictionaries.
///
/// range_atoms[m] is K x TN with (k, n) entry
///   e^{-j2pi kappa_k n / TN} e^{-j2pi f_m pri n / TN},
/// i.e. the sampled response of a target at range bin n through channel m
/// (the second factor reduces to e^{-j2pi (f_m/B_h)(n/T)} when B_h pri = N).
///
/// azimuth_atoms[m] is Q x AZ with (q, r) entry e^{j2pi beta_mq theta_r},
/// theta_r = -1 + 2r/AZ. The sign follows the echo model, so a column is the
/// exact array response of a target in bin r.
struct Dictionaries {
    std::vector<Eigen::MatrixXcd> range_atoms;
    std::vector<Eigen::MatrixXcd> azimuth_atoms;
    std::vector<int> kappa;
    int range_bins = 0;
    int azimuth_bins = 0;

    int num_channels() const { return static_cast<int>(range_atoms.size()); }
};

Dictionaries build_dictionaries(const RadarParams& params, const ArrayConfig& array,
                                const TxPlan& plan, const std::vector<int>& kappa);

/// Coefficients after Doppler focusing, indexed (m, q, focus bin u, k).
/// Bin u holds Phi at nu_u = -1/(2 pri) + u/(P pri).
struct FocusedTensor {
    int num_channels = 0;
    int num_rx = 0;
    int num_bins = 0;
    std::vector<int> kappa;
    std::vector<std::complex<double>> data;

    int num_coeffs() const { return static_cast<int>(kappa.size()); }
    std::size_t index(int m, int q, int u, int k) const {
        return ((static_cast<std::size_t>(m) * num_rx + q) * num_bins + u) * kappa.size() + k;
    }
    std::complex<double>& at(int m, int q, int u, int k) { return data[index(m, q, u, k)]; }
    const std::complex<double>& at(int m, int q, int u, int k) const {
        return data[index(m, q, u, k)];
    }
};

/// Coherent pulse-axis summation against each grid frequency:
///   Phi^nu[k] = sum_p y^p[k] e^{-j2pi nu p pri}.
/// At the grid frequencies this is a length-P FFT of (-1)^p y^p, which is how
/// it is computed here.
FocusedTensor doppler_focus(const CoefficientTensor& tensor);

/// Stop when the support reaches max_detections, or when the residual norm
/// falls below residual_ratio times the initial norm, whichever is set and
/// hits first. At least one criterion must be set.
struct StopRule {
    std::optional<int> max_detections;
    std::optional<double> residual_ratio;
};

struct RecoveryResult {
    std::vector<GridIndex> support;
    /// Least-squares coefficients in tensor units (they absorb the cognitive
    /// amplitude scale; divide by gamma for scene-unit reflectivities).
    std::vector<std::complex<double>> amplitudes;
    std::vector<PhysicalCoords> estimates;
    /// residual_norms[0] is the initial data norm, one entry per iteration after.
    std::vector<double> residual_norms;

    int size() const { return static_cast<int>(support.size()); }
};

/// Simultaneous orthogonal matching pursuit over the M channel equations:
/// each iteration picks the (s, r, u) triple maximizing
///   sum_m |<azimuth_atom_r (x) range_atom_s, Phi_m^u>|^2,
/// ties broken toward the lowest (u, r, s), then refits all amplitudes by
/// joint least squares over the accumulated support and updates the residual.
/// The returned estimates list is empty; fill it with estimate_parameters,
/// which knows the physical grid.
RecoveryResult recover(const FocusedTensor& focused, const Dictionaries& dict,
                       const StopRule& stop);

/// Support bins to physical coordinates (same affine maps as the scene grid).
std::vector<PhysicalCoords> estimate_parameters(const std::vector<GridIndex>& support,
                                                const SceneGrid& grid);

/// Local off-grid refinement: each detection's estimate is replaced by the
/// argmax of the correlation objective over a (2*factor+1)^3 grid spanning
/// +/- one coarse bin around it, with the other detections' modeled
/// contributions removed from the tensor first.
RecoveryResult refine(const RecoveryResult& result, const CoefficientTensor& tensor,
                      const RadarParams& params, const ArrayConfig& array, const TxPlan& plan,
                      int factor);

/// One row per detection: s, r, u, amplitude, physical estimates, iteration.
void write_result_csv(std::ostream& out, const RecoveryResult& result,
                      const RadarParams& params);

}  // namespace subnyq
