#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subnyq/recovery_engine.hpp"
#include "subnyq/scene_model.hpp"

namespace subnyq {

/// Outcome of matching a recovery against ground truth with the one-bin
/// detection criterion: an estimate counts as a hit when it lies within one
/// range cell, one azimuth bin and one Doppler bin of an unmatched truth.
struct DetectionReport {
    std::vector<std::pair<int, int>> hits;         // (truth index, estimate index)
    std::vector<int> misses;                       // unmatched truth indices
    std::vector<int> false_alarms;                 // unmatched estimate indices
    std::vector<std::pair<int, int>> strict_hits;  // hits with exact bin equality

    int hit_count() const { return static_cast<int>(hits.size()); }
};

/// Greedy one-to-one matching; candidate pairs are ranked by squared 3-D bin
/// distance, ties broken by (truth, estimate) index order.
DetectionReport match_detections(const TargetScene& truth, const RecoveryResult& result,
                                 const SceneGrid& grid);

/// How an arm's transmit spectrum relates to the receiver's coefficient set.
///
/// A sub-Nyquist receiver samples a fixed subband set whether or not the
/// transmitter concentrates power there: running it non-cognitively means the
/// full-band transmit energy lands on the same kappa at unit scale. The full
/// flavor is the Nyquist receiver (every coefficient, unit scale).
enum class SpectrumKind {
    Full,         // full band, gamma = 1
    Cognitive,    // configured subbands, power-conserving gamma
    SubbandFlat,  // configured subbands, gamma = 1 (non-cognitive transmit,
                  // subband receiver)
};

/// One (mode, spectrum) combination evaluated in an experiment.
struct ExperimentArm {
    ArrayMode mode = ArrayMode::Ula;
    SpectrumKind spectrum = SpectrumKind::Full;

    std::string label() const;
};

struct ScenarioConfig {
    RadarParams params;
    double guard_hz = 0.0;
    std::vector<Band> cognitive_bands;
    std::vector<ExperimentArm> arms;

    int target_count = 10;
    MinSeparation separation;
    double amplitude_spread_db = 0.0;
    std::string scene_file;  // empty = random scenes

    double snr_db = std::numeric_limits<double>::infinity();
    std::optional<double> residual_stop_ratio;  // unset = stop at target_count
    int refine_factor = 0;                      // 0 = no refinement

    int trials = 1;
    std::uint64_t seed = 1;
    std::uint64_t array_seed = 1;

    double sample_rate_hz = 0.0;      // for alias/budget reporting
    double stopband_atten_db = 30.0;
    std::string out_dir = "out";

    CognitiveSpectrum spectrum_for(SpectrumKind kind) const;
    ArrayConfig array_for(ArrayMode mode) const;

    /// Per-coefficient noise variance for a tensor synthesized under the
    /// given spectrum. The SNR knob references the non-cognitive injected
    /// signal (clean power / gamma^2), so a cognitive arm keeps its in-band
    /// power advantage; a subsampled (cognitive) receiver additionally folds
    /// stop-band leakage, inflating the variance by the SNR-loss factor.
    double noise_variance(const CognitiveSpectrum& spectrum, double clean_power) const;
};

ScenarioConfig load_scenario_config(const std::string& path);
void write_scenario_config(std::ostream& out, const ScenarioConfig& config);

/// Aggregate detection statistics for one arm across trials.
struct ArmStats {
    ExperimentArm arm;
    std::vector<double> hit_histogram;  // fraction of trials with exactly i hits
    double mean_pd = 0.0;
    double mean_false_alarms = 0.0;
    double mean_strict_hits = 0.0;
    int trials = 0;
    int failures = 0;
};

struct TrialLog {
    std::uint64_t scene_seed = 0;
    std::uint64_t noise_seed = 0;
};

struct ExperimentStats {
    std::vector<ArmStats> arms;
    std::vector<TrialLog> trial_logs;
    int trials = 0;
};

/// Paired Monte-Carlo run: every trial draws one scene and one noise seed and
/// feeds the identical scenario to every arm. Per-trial failures are counted,
/// not fatal, up to 10% of the trial budget. Deterministic per master seed;
/// trials run in parallel with independent derived seed streams.
ExperimentStats run_experiment(const ScenarioConfig& config, int n_trials,
                               std::uint64_t master_seed);

void write_experiment_csv(std::ostream& out, const ExperimentStats& stats);

/// Plot-ready tables for one recovery: a PPI table (east_m, north_m, label)
/// and a range-azimuth-Doppler table (x_m, y_m, velocity_mps, label). Truth
/// rows are labeled "truth"; estimates are labeled "detection" or
/// "false_alarm" according to the matching criterion.
void emit_maps(const RecoveryResult& result, const TargetScene& truth, const SceneGrid& grid,
               const RadarParams& params, std::ostream& ppi_out, std::ostream& rad_out);

/// One resource-reduction comparison row (Nyquist reference vs. this system).
struct BudgetRow {
    std::string resource;
    double reference = 0.0;
    double actual = 0.0;
    double reduction_pct = 0.0;
};

/// Reference element counts a mode is compared against: the full T x R array
/// for the shared-aperture modes, the 20 x 20 virtual array for the wide one.
std::pair<int, int> reference_array(const RadarParams& params, ArrayMode mode);

std::vector<BudgetRow> resource_budget(const RadarParams& params,
                                       const CognitiveSpectrum& spectrum, double guard_hz,
                                       double sample_rate_hz, ArrayMode mode);

void write_budget_csv(std::ostream& out, const std::vector<BudgetRow>& rows);

}  // namespace subnyq
