// Command-line front end for the sub-Nyquist MIMO radar toolkit: scene
// synthesis, sparse recovery, Monte-Carlo mode comparisons and the receiver
// resource budget, all driven by a scenario config file plus flag overrides.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "subnyq/evaluation.hpp"
#include "subnyq/io_util.hpp"
#include "subnyq/rng.hpp"

namespace fs = std::filesystem;
using namespace subnyq;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<int> mode_id;
    bool force_cognitive = false;
    bool force_non_cognitive = false;
    std::optional<double> snr_db;
    std::optional<int> targets;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;

    std::optional<SpectrumKind> spectrum_override() const {
        if (force_cognitive) return SpectrumKind::Cognitive;
        if (force_non_cognitive) return SpectrumKind::Full;
        return std::nullopt;
    }
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Scenario config file")->required();
    cmd->add_option("--out", opts.out_dir, "Output directory (defaults to the config's)");
    cmd->add_option("--mode", opts.mode_id, "Array mode override {1,2,3,4}");
    cmd->add_flag("--cognitive", opts.force_cognitive, "Force cognitive transmission");
    cmd->add_flag("--non-cognitive", opts.force_non_cognitive,
                  "Force full-band transmission (gamma = 1)");
    cmd->add_option("--snr-db", opts.snr_db, "Injected-signal SNR override");
    cmd->add_option("--targets", opts.targets, "Random-scene target count override");
    cmd->add_option("--trials", opts.trials, "Trial count override");
    cmd->add_option("--seed", opts.seed, "Master seed override");
}

ScenarioConfig resolve_config(const CommonOptions& opts) {
    ScenarioConfig config = load_scenario_config(opts.config_path);
    if (!opts.out_dir.empty()) config.out_dir = opts.out_dir;
    const std::optional<SpectrumKind> spectrum = opts.spectrum_override();
    if (opts.mode_id) {
        const SpectrumKind fallback = config.cognitive_bands.empty() ? SpectrumKind::Full
                                                                     : SpectrumKind::Cognitive;
        config.arms = {{array_mode_from_id(*opts.mode_id), spectrum.value_or(fallback)}};
    } else if (spectrum) {
        for (ExperimentArm& arm : config.arms) arm.spectrum = *spectrum;
    }
    if (opts.snr_db) config.snr_db = *opts.snr_db;
    if (opts.targets) config.target_count = *opts.targets;
    if (opts.trials) config.trials = *opts.trials;
    if (opts.seed) config.seed = *opts.seed;
    return config;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

void write_manifest(const ScenarioConfig& config, const fs::path& dir,
                    const std::string& command) {
    auto out = open_output(dir / "manifest.txt");
    out << "# resolved scenario for subnyq " << command << "\n";
    write_scenario_config(out, config);
}

TargetScene make_scene(const ScenarioConfig& config, std::uint64_t scene_seed) {
    if (!config.scene_file.empty()) {
        std::ifstream in(config.scene_file);
        if (!in) throw IoError("cannot open scene file " + config.scene_file);
        return read_scene_csv(in, config.params);
    }
    const SceneGrid grid = SceneGrid::of(config.params);
    return random_scene(config.target_count, grid, config.separation, scene_seed,
                        config.amplitude_spread_db);
}

struct ArmContext {
    ExperimentArm arm;
    ArrayConfig array;
    TxPlan plan;
    CognitiveSpectrum spectrum;
    SceneGrid grid;
};

ArmContext make_arm_context(const ScenarioConfig& config, const ExperimentArm& arm) {
    ArmContext ctx;
    ctx.arm = arm;
    ctx.array = config.array_for(arm.mode);
    ctx.plan = make_fdm_plan(ctx.array.num_tx(), config.params.tx_bandwidth_hz, config.guard_hz);
    ctx.spectrum = config.spectrum_for(arm.spectrum);
    ctx.grid = SceneGrid::of(config.params, ctx.array);
    return ctx;
}

CoefficientTensor observe(const ScenarioConfig& config, const ArmContext& ctx,
                          const TargetScene& scene, std::uint64_t noise_seed) {
    const CoefficientTensor clean =
        synthesize(scene, ctx.array, ctx.plan, ctx.spectrum, config.params);
    if (!std::isfinite(config.snr_db)) return clean;
    const double variance = config.noise_variance(ctx.spectrum, mean_power(clean));
    return add_noise_with_variance(clean, variance, noise_seed);
}

RecoveryResult run_recovery(const ScenarioConfig& config, const ArmContext& ctx,
                            const CoefficientTensor& observed, int known_targets) {
    StopRule stop;
    if (config.residual_stop_ratio)
        stop.residual_ratio = *config.residual_stop_ratio;
    else
        stop.max_detections = known_targets;
    const Dictionaries dict =
        build_dictionaries(config.params, ctx.array, ctx.plan, ctx.spectrum.kappa);
    RecoveryResult result = recover(doppler_focus(observed), dict, stop);
    result.estimates = estimate_parameters(result.support, ctx.grid);
    if (config.refine_factor > 0)
        result = refine(result, observed, config.params, ctx.array, ctx.plan,
                        config.refine_factor);
    // Report reflectivities in scene units: the fitted coefficients absorb
    // the cognitive amplitude scale.
    for (auto& amplitude : result.amplitudes) amplitude /= ctx.spectrum.amplitude_scale;
    return result;
}

int cmd_simulate(const CommonOptions& opts) {
    const ScenarioConfig config = resolve_config(opts);
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    const ArmContext ctx = make_arm_context(config, config.arms.front());

    const TargetScene scene = make_scene(config, derive_seed(config.seed, 1));
    const CoefficientTensor observed = observe(config, ctx, scene, derive_seed(config.seed, 2));

    { auto out = open_output(dir / "scene.csv"); write_scene_csv(out, scene, config.params); }
    { auto out = open_output(dir / "tensor.bin"); write_tensor(out, observed); }
    { auto out = open_output(dir / "array.csv"); write_array_table(out, ctx.array, config.params); }
    write_manifest(config, dir, "simulate");
    std::cout << "wrote " << (dir / "tensor.bin").string() << " (" << ctx.arm.label() << ", "
              << scene.size() << " targets)\n";
    return 0;
}

int cmd_recover(const CommonOptions& opts, const std::string& tensor_path) {
    const ScenarioConfig config = resolve_config(opts);
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    const ArmContext ctx = make_arm_context(config, config.arms.front());

    std::ifstream in(tensor_path, std::ios::binary);
    if (!in) throw IoError("cannot open tensor " + tensor_path);
    const CoefficientTensor observed = read_tensor(in);

    const RecoveryResult result =
        run_recovery(config, ctx, observed, config.target_count);
    { auto out = open_output(dir / "result.csv"); write_result_csv(out, result, config.params); }
    write_manifest(config, dir, "recover");
    std::cout << "recovered " << result.size() << " targets, residual "
              << fmt_double(result.residual_norms.back()) << "\n";
    return 0;
}

int cmd_run(const CommonOptions& opts) {
    const ScenarioConfig config = resolve_config(opts);
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);
    const ArmContext ctx = make_arm_context(config, config.arms.front());

    const TargetScene scene = make_scene(config, derive_seed(config.seed, 1));
    const CoefficientTensor observed = observe(config, ctx, scene, derive_seed(config.seed, 2));
    const RecoveryResult result = run_recovery(config, ctx, observed, scene.size());
    const DetectionReport report = match_detections(scene, result, ctx.grid);

    { auto out = open_output(dir / "scene.csv"); write_scene_csv(out, scene, config.params); }
    { auto out = open_output(dir / "result.csv"); write_result_csv(out, result, config.params); }
    {
        auto ppi = open_output(dir / "ppi.csv");
        auto rad = open_output(dir / "range_azimuth_doppler.csv");
        emit_maps(result, scene, ctx.grid, config.params, ppi, rad);
    }
    write_manifest(config, dir, "run");
    std::cout << ctx.arm.label() << ": " << report.hit_count() << "/" << scene.size()
              << " detected (" << report.strict_hits.size() << " strict), "
              << report.false_alarms.size() << " false alarms\n";
    return 0;
}

int cmd_trials(const CommonOptions& opts, bool all_modes) {
    ScenarioConfig config = resolve_config(opts);
    if (all_modes && !opts.mode_id) {
        // compare-modes: the four constellations plus the cognitive thinned arm
        config.arms = {{ArrayMode::Ula, SpectrumKind::Full},
                       {ArrayMode::Random, SpectrumKind::Full},
                       {ArrayMode::Thinned, SpectrumKind::Full},
                       {ArrayMode::Wide, SpectrumKind::Full},
                       {ArrayMode::Thinned, SpectrumKind::Cognitive}};
    }
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);

    const ExperimentStats stats = run_experiment(config, config.trials, config.seed);
    { auto out = open_output(dir / "trials.csv"); write_experiment_csv(out, stats); }
    {
        auto out = open_output(dir / "trial_seeds.csv");
        out << "trial,scene_seed,noise_seed\n";
        for (std::size_t t = 0; t < stats.trial_logs.size(); ++t)
            out << t << ',' << stats.trial_logs[t].scene_seed << ','
                << stats.trial_logs[t].noise_seed << '\n';
    }
    write_manifest(config, dir, all_modes ? "compare-modes" : "trials");
    for (const ArmStats& arm : stats.arms)
        std::cout << arm.arm.label() << ": mean Pd " << fmt_double(arm.mean_pd)
                  << ", mean false alarms " << fmt_double(arm.mean_false_alarms) << " over "
                  << arm.trials << " trials\n";
    return 0;
}

int cmd_budget(const CommonOptions& opts) {
    const ScenarioConfig config = resolve_config(opts);
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);

    const CognitiveSpectrum spectrum = config.spectrum_for(SpectrumKind::Cognitive);
    const AliasMap alias =
        alias_map(spectrum.kappa, config.params.coeff_count, config.sample_rate_hz,
                  config.params.pri_s);
    const double loss_db = snr_loss_db(alias.q_factor, config.stopband_atten_db);

    std::cout << "subsampling: N_s = " << alias.modulus << ", q = " << fmt_double(alias.q_factor)
              << ", injective folding, SNR loss " << fmt_double(loss_db) << " dB at "
              << fmt_double(config.stopband_atten_db) << " dB stop-band attenuation\n";

    AdcSpec adc;
    adc.saturation_dbm = 10.0;
    adc.bits = 16.0;
    adc.effective_bits = 11.85;
    adc.sample_rate_hz = config.sample_rate_hz;
    adc.ref_bandwidth_hz = 1e6;
    const DynamicRangeBudget dr = dynamic_range(adc);
    std::cout << "dynamic range: " << fmt_double(dr.range_db) << " dB, floor "
              << fmt_double(dr.floor_dbm) << " dBm (E_NoB " << adc.effective_bits << ")\n";

    for (ArrayMode mode : {ArrayMode::Thinned, ArrayMode::Wide}) {
        const auto rows =
            resource_budget(config.params, spectrum, config.guard_hz, config.sample_rate_hz, mode);
        const std::string name = "budget_mode" + std::to_string(static_cast<int>(mode)) + ".csv";
        auto out = open_output(dir / name);
        write_budget_csv(out, rows);
        std::cout << "mode " << static_cast<int>(mode) << " resource reduction:\n";
        for (const BudgetRow& row : rows)
            std::cout << "  " << row.resource << ": " << fmt_double(row.reduction_pct) << "%\n";
    }
    write_manifest(config, dir, "budget");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sub-Nyquist MIMO radar simulation and recovery toolkit"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::string tensor_path;

    auto* simulate = app.add_subcommand("simulate", "Synthesize a scene into a tensor file");
    add_common_options(simulate, opts);

    auto* recover_cmd = app.add_subcommand("recover", "Recover targets from a tensor file");
    add_common_options(recover_cmd, opts);
    recover_cmd->add_option("--tensor", tensor_path, "Tensor file from simulate")->required();

    auto* run = app.add_subcommand("run", "End-to-end single scene");
    add_common_options(run, opts);

    auto* trials = app.add_subcommand("trials", "Monte-Carlo over random scenes");
    add_common_options(trials, opts);

    auto* compare = app.add_subcommand("compare-modes", "Paired Monte-Carlo across all modes");
    add_common_options(compare, opts);

    auto* budget = app.add_subcommand("budget", "Alias, SNR-loss, dynamic-range and resource report");
    add_common_options(budget, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return cmd_simulate(opts);
        if (recover_cmd->parsed()) return cmd_recover(opts, tensor_path);
        if (run->parsed()) return cmd_run(opts);
        if (trials->parsed()) return cmd_trials(opts, false);
        if (compare->parsed()) return cmd_trials(opts, true);
        if (budget->parsed()) return cmd_budget(opts);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
