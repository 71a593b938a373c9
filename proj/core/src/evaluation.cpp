#include "subnyq/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

#include "subnyq/io_util.hpp"
#include "subnyq/rng.hpp"

namespace subnyq {

DetectionReport match_detections(const TargetScene& truth, const RecoveryResult& result,
                                 const SceneGrid& grid) {
    // Truth is always quantized onto the supplied grid: a scene drawn on the
    // coarse reference grid must land on the wide mode's finer azimuth axis
    // before bins are compared.
    std::vector<GridIndex> truth_bins;
    truth_bins.reserve(truth.targets.size());
    for (const Target& t : truth.targets) truth_bins.push_back(physical_to_grid(t, grid));

    struct Candidate {
        int distance2;
        int truth_idx;
        int estimate_idx;
    };
    std::vector<Candidate> candidates;
    for (int t = 0; t < static_cast<int>(truth_bins.size()); ++t) {
        for (int e = 0; e < result.size(); ++e) {
            const int ds = std::abs(truth_bins[t].range_bin - result.support[e].range_bin);
            const int dr = std::abs(truth_bins[t].azimuth_bin - result.support[e].azimuth_bin);
            const int du = std::abs(truth_bins[t].doppler_bin - result.support[e].doppler_bin);
            if (ds <= 1 && dr <= 1 && du <= 1)
                candidates.push_back({ds * ds + dr * dr + du * du, t, e});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.distance2 != b.distance2) return a.distance2 < b.distance2;
        if (a.truth_idx != b.truth_idx) return a.truth_idx < b.truth_idx;
        return a.estimate_idx < b.estimate_idx;
    });

    DetectionReport report;
    std::vector<bool> truth_used(truth_bins.size(), false);
    std::vector<bool> estimate_used(result.size(), false);
    for (const Candidate& c : candidates) {
        if (truth_used[c.truth_idx] || estimate_used[c.estimate_idx]) continue;
        truth_used[c.truth_idx] = true;
        estimate_used[c.estimate_idx] = true;
        report.hits.emplace_back(c.truth_idx, c.estimate_idx);
        if (c.distance2 == 0) report.strict_hits.emplace_back(c.truth_idx, c.estimate_idx);
    }
    for (int t = 0; t < static_cast<int>(truth_bins.size()); ++t)
        if (!truth_used[t]) report.misses.push_back(t);
    for (int e = 0; e < result.size(); ++e)
        if (!estimate_used[e]) report.false_alarms.push_back(e);
    return report;
}

std::string ExperimentArm::label() const {
    const char* kind = spectrum == SpectrumKind::Cognitive    ? ":cognitive"
                       : spectrum == SpectrumKind::SubbandFlat ? ":flat"
                                                               : ":full";
    return "mode" + std::to_string(static_cast<int>(mode)) + kind;
}

CognitiveSpectrum ScenarioConfig::spectrum_for(SpectrumKind kind) const {
    if (kind == SpectrumKind::Full || cognitive_bands.empty())
        return full_band_spectrum(params.tx_bandwidth_hz, params.pri_s);
    CognitiveSpectrum spectrum =
        build_cognitive_spectrum(params.tx_bandwidth_hz, cognitive_bands, params.pri_s);
    if (kind == SpectrumKind::SubbandFlat) spectrum.amplitude_scale = 1.0;
    return spectrum;
}

ArrayConfig ScenarioConfig::array_for(ArrayMode mode) const {
    return build_array(params, mode, derive_seed(array_seed, static_cast<int>(mode)));
}

double ScenarioConfig::noise_variance(const CognitiveSpectrum& spectrum,
                                      double clean_power) const {
    const double gamma = spectrum.amplitude_scale;
    const double reference_power = clean_power / (gamma * gamma);
    if (reference_power <= 0.0)
        throw std::domain_error("noise_variance: zero-signal tensor with finite SNR");
    double variance = reference_power * std::pow(10.0, -snr_db / 10.0);
    if (!spectrum.full_band() && std::isfinite(stopband_atten_db) && sample_rate_hz > 0.0) {
        const double q_factor =
            2.0 * params.coeff_count / (sample_rate_hz * params.pri_s);
        variance *= std::pow(10.0, snr_loss_db(q_factor, stopband_atten_db) / 10.0);
    }
    return variance;
}

namespace {

struct TrialOutcome {
    // Per arm: hits, strict hits, false alarms; -1 hits marks a failed trial.
    std::vector<int> hits;
    std::vector<int> strict;
    std::vector<int> false_alarms;
};

TrialOutcome run_single_trial(const ScenarioConfig& config,
                              const std::vector<ArrayConfig>& arrays,
                              const std::vector<TxPlan>& plans,
                              const std::vector<CognitiveSpectrum>& spectra,
                              const std::vector<Dictionaries>& dicts,
                              const TargetScene& base_scene, std::uint64_t noise_seed) {
    const int num_arms = static_cast<int>(config.arms.size());
    TrialOutcome outcome;
    outcome.hits.assign(num_arms, -1);
    outcome.strict.assign(num_arms, 0);
    outcome.false_alarms.assign(num_arms, 0);

    for (int a = 0; a < num_arms; ++a) {
        try {
            const CoefficientTensor clean =
                synthesize(base_scene, arrays[a], plans[a], spectra[a], config.params);
            CoefficientTensor observed = clean;
            if (std::isfinite(config.snr_db)) {
                const double variance = config.noise_variance(spectra[a], mean_power(clean));
                observed = add_noise_with_variance(clean, variance, noise_seed);
            }

            const FocusedTensor focused = doppler_focus(observed);
            StopRule stop;
            if (config.residual_stop_ratio)
                stop.residual_ratio = *config.residual_stop_ratio;
            else
                stop.max_detections = base_scene.size();
            RecoveryResult result = recover(focused, dicts[a], stop);

            const SceneGrid arm_grid = SceneGrid::of(config.params, arrays[a]);
            result.estimates = estimate_parameters(result.support, arm_grid);
            const DetectionReport report = match_detections(base_scene, result, arm_grid);
            outcome.hits[a] = report.hit_count();
            outcome.strict[a] = static_cast<int>(report.strict_hits.size());
            outcome.false_alarms[a] = static_cast<int>(report.false_alarms.size());
        } catch (const std::exception&) {
            outcome.hits[a] = -1;
        }
    }
    return outcome;
}

}  // namespace

ExperimentStats run_experiment(const ScenarioConfig& config, int n_trials,
                               std::uint64_t master_seed) {
    if (n_trials < 1) throw ExperimentError("run_experiment: need at least one trial");
    if (config.arms.empty()) throw ExperimentError("run_experiment: no arms configured");
    const int num_arms = static_cast<int>(config.arms.size());
    const int target_count = config.target_count;

    std::vector<ArrayConfig> arrays;
    std::vector<TxPlan> plans;
    std::vector<CognitiveSpectrum> spectra;
    std::vector<Dictionaries> dicts;
    for (const ExperimentArm& arm : config.arms) {
        arrays.push_back(config.array_for(arm.mode));
        plans.push_back(make_fdm_plan(arrays.back().num_tx(), config.params.tx_bandwidth_hz,
                                      config.guard_hz));
        spectra.push_back(config.spectrum_for(arm.spectrum));
        dicts.push_back(
            build_dictionaries(config.params, arrays.back(), plans.back(), spectra.back().kappa));
    }

    // Scenes are drawn on the coarsest grid in play (the T x R reference), so
    // they stay on-grid for every arm; the wide mode's grid refines it 5:1.
    const SceneGrid scene_grid = SceneGrid::of(config.params);

    TargetScene file_scene;
    if (!config.scene_file.empty()) {
        std::ifstream in(config.scene_file);
        if (!in) throw IoError("run_experiment: cannot open scene file " + config.scene_file);
        file_scene = read_scene_csv(in, config.params);
    }

    std::vector<TrialOutcome> outcomes(n_trials);
    std::vector<TrialLog> logs(n_trials);

    auto run_range = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            const std::uint64_t scene_seed = derive_seed(master_seed, 4ull * t + 1);
            const std::uint64_t noise_seed = derive_seed(master_seed, 4ull * t + 2);
            logs[t] = {scene_seed, noise_seed};
            TargetScene scene =
                config.scene_file.empty()
                    ? random_scene(target_count, scene_grid, config.separation, scene_seed,
                                   config.amplitude_spread_db)
                    : file_scene;
            outcomes[t] =
                run_single_trial(config, arrays, plans, spectra, dicts, scene, noise_seed);
        }
    };

    const int workers = std::min<int>(n_trials, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        run_range(0, n_trials);
    } else {
        std::vector<std::future<void>> futures;
        const int chunk = (n_trials + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(n_trials, begin + chunk);
            if (begin >= end) break;
            futures.push_back(std::async(std::launch::async, run_range, begin, end));
        }
        for (auto& f : futures) f.get();
    }

    ExperimentStats stats;
    stats.trials = n_trials;
    stats.trial_logs = std::move(logs);
    int total_failures = 0;
    for (int a = 0; a < num_arms; ++a) {
        ArmStats arm_stats;
        arm_stats.arm = config.arms[a];
        arm_stats.hit_histogram.assign(target_count + 1, 0.0);
        int ok_trials = 0;
        long long hit_sum = 0, strict_sum = 0, fa_sum = 0;
        for (const TrialOutcome& outcome : outcomes) {
            if (outcome.hits[a] < 0) {
                ++arm_stats.failures;
                continue;
            }
            ++ok_trials;
            const int hits = std::min(outcome.hits[a], target_count);
            arm_stats.hit_histogram[hits] += 1.0;
            hit_sum += outcome.hits[a];
            strict_sum += outcome.strict[a];
            fa_sum += outcome.false_alarms[a];
        }
        if (ok_trials > 0) {
            for (double& h : arm_stats.hit_histogram) h /= ok_trials;
            arm_stats.mean_pd =
                static_cast<double>(hit_sum) / (static_cast<double>(ok_trials) * target_count);
            arm_stats.mean_false_alarms = static_cast<double>(fa_sum) / ok_trials;
            arm_stats.mean_strict_hits = static_cast<double>(strict_sum) / ok_trials;
        }
        arm_stats.trials = ok_trials;
        total_failures += arm_stats.failures;
        stats.arms.push_back(std::move(arm_stats));
    }
    if (total_failures * 10 > n_trials * num_arms)
        throw ExperimentError("run_experiment: more than 10% of trials failed");
    return stats;
}

void write_experiment_csv(std::ostream& out, const ExperimentStats& stats) {
    out << "arm,detected,fraction,mean_pd,mean_false_alarms,mean_strict_hits,trials,failures\n";
    for (const ArmStats& arm : stats.arms) {
        for (std::size_t i = 0; i < arm.hit_histogram.size(); ++i) {
            out << arm.arm.label() << ',' << i << ',' << fmt_double(arm.hit_histogram[i]) << ','
                << fmt_double(arm.mean_pd) << ',' << fmt_double(arm.mean_false_alarms) << ','
                << fmt_double(arm.mean_strict_hits) << ',' << arm.trials << ',' << arm.failures
                << '\n';
        }
    }
}

namespace {

void emit_point(std::ostream& ppi, std::ostream& rad, const std::string& label, double range_m,
                double sine_azimuth, double velocity_mps) {
    const double east = range_m * sine_azimuth;
    const double north = range_m * std::sqrt(std::max(0.0, 1.0 - sine_azimuth * sine_azimuth));
    ppi << fmt_double(east) << ',' << fmt_double(north) << ',' << label << '\n';
    rad << fmt_double(east) << ',' << fmt_double(north) << ',' << fmt_double(velocity_mps) << ','
        << label << '\n';
}

}  // namespace

void emit_maps(const RecoveryResult& result, const TargetScene& truth, const SceneGrid& grid,
               const RadarParams& params, std::ostream& ppi_out, std::ostream& rad_out) {
    if (!ppi_out || !rad_out) throw IoError("emit_maps: unwritable output stream");
    if (result.estimates.size() != result.support.size())
        throw std::invalid_argument("emit_maps: run estimate_parameters first");
    const DetectionReport report = match_detections(truth, result, grid);
    std::vector<bool> is_hit(result.size(), false);
    for (const auto& [t, e] : report.hits) is_hit[e] = true;

    ppi_out << "east_m,north_m,label\n";
    rad_out << "x_m,y_m,velocity_mps,label\n";
    for (const Target& t : truth.targets)
        emit_point(ppi_out, rad_out, "truth", t.range_m(), t.sine_azimuth,
                   t.speed_mps(params.wavelength_m));
    for (int e = 0; e < result.size(); ++e) {
        const PhysicalCoords& est = result.estimates[e];
        emit_point(ppi_out, rad_out, is_hit[e] ? "detection" : "false_alarm",
                   est.delay_s * kSpeedOfLight / 2.0, est.sine_azimuth,
                   est.doppler_hz * params.wavelength_m / 2.0);
    }
    if (!ppi_out || !rad_out) throw IoError("emit_maps: write failed");
}

std::pair<int, int> reference_array(const RadarParams& params, ArrayMode mode) {
    if (mode == ArrayMode::Wide) return {20, 20};
    return {params.tx_count, params.rx_count};
}

std::vector<BudgetRow> resource_budget(const RadarParams& params,
                                       const CognitiveSpectrum& spectrum, double guard_hz,
                                       double sample_rate_hz, ArrayMode mode) {
    const auto [ref_tx, ref_rx] = reference_array(params, mode);
    const ArrayConfig array = build_array(params, mode, 1);  // element counts only
    const int num_tx = array.num_tx();
    const int num_rx = array.num_rx();

    const double slot = params.tx_bandwidth_hz;
    const double effective = slot - guard_hz;
    double occupied = 0.0;
    for (const Band& b : spectrum.bands) occupied += b.width_hz();
    const double nyquist_rate = 2.0 * params.tx_bandwidth_hz;

    auto pct = [](double reference, double actual) {
        return 100.0 * (1.0 - actual / reference);
    };
    std::vector<BudgetRow> rows;
    rows.push_back({"bandwidth_per_tx_incl_guard_hz", slot, occupied, pct(slot, occupied)});
    rows.push_back(
        {"bandwidth_per_tx_excl_guard_hz", effective, occupied, pct(effective, occupied)});
    rows.push_back({"temporal_sampling_rate_hz", nyquist_rate, sample_rate_hz,
                    pct(nyquist_rate, sample_rate_hz)});
    rows.push_back({"spatial_elements", static_cast<double>(ref_tx + ref_rx),
                    static_cast<double>(num_tx + num_rx),
                    pct(ref_tx + ref_rx, num_tx + num_rx)});
    rows.push_back({"txrx_channels", static_cast<double>(ref_tx * ref_rx),
                    static_cast<double>(num_tx * num_rx),
                    pct(static_cast<double>(ref_tx) * ref_rx,
                        static_cast<double>(num_tx) * num_rx)});
    rows.push_back({"total_tx_bandwidth_incl_guard_hz", ref_tx * slot, num_tx * occupied,
                    pct(ref_tx * slot, num_tx * occupied)});
    rows.push_back({"total_tx_bandwidth_excl_guard_hz", ref_tx * effective, num_tx * occupied,
                    pct(ref_tx * effective, num_tx * occupied)});
    return rows;
}

void write_budget_csv(std::ostream& out, const std::vector<BudgetRow>& rows) {
    out << "resource,reference,actual,reduction_pct\n";
    for (const BudgetRow& row : rows)
        out << row.resource << ',' << fmt_double(row.reference) << ',' << fmt_double(row.actual)
            << ',' << fmt_double(row.reduction_pct) << '\n';
}

}  // namespace subnyq
