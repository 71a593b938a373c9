#include <benchmark/benchmark.h>

#include "subnyq/evaluation.hpp"
#include "subnyq/recovery_engine.hpp"

using namespace subnyq;

namespace {

struct Pipeline {
    RadarParams params;
    ArrayConfig array;
    TxPlan plan;
    CognitiveSpectrum spectrum;
    SceneGrid grid;
    TargetScene scene;
    CoefficientTensor tensor;
    Dictionaries dict;
};

// Desk-scale thinned-array scenario; coeffs_per_channel sets the model size.
Pipeline make_pipeline(int coeffs_per_channel, int targets) {
    Pipeline p;
    const double pri = 100e-6;
    p.params = RadarParams::make(8, 10, pri, 10, coeffs_per_channel / pri, 10e9);
    p.array = build_array(p.params, ArrayMode::Thinned, 7);
    p.plan = make_fdm_plan(p.array.num_tx(), p.params.tx_bandwidth_hz, 0.0);
    p.spectrum = full_band_spectrum(p.params.tx_bandwidth_hz, pri);
    p.grid = SceneGrid::of(p.params);
    p.scene = random_scene(targets, p.grid, {0.05}, 11);
    p.tensor = synthesize(p.scene, p.array, p.plan, p.spectrum, p.params);
    p.dict = build_dictionaries(p.params, p.array, p.plan, p.spectrum.kappa);
    return p;
}

void BM_Synthesize(benchmark::State& state) {
    Pipeline p = make_pipeline(static_cast<int>(state.range(0)), 10);
    for (auto _ : state) {
        auto tensor = synthesize(p.scene, p.array, p.plan, p.spectrum, p.params);
        benchmark::DoNotOptimize(tensor.data.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Synthesize)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_DopplerFocus(benchmark::State& state) {
    Pipeline p = make_pipeline(static_cast<int>(state.range(0)), 10);
    for (auto _ : state) {
        auto focused = doppler_focus(p.tensor);
        benchmark::DoNotOptimize(focused.data.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DopplerFocus)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_Recover(benchmark::State& state) {
    Pipeline p = make_pipeline(static_cast<int>(state.range(0)), 10);
    const FocusedTensor focused = doppler_focus(p.tensor);
    for (auto _ : state) {
        auto result = recover(focused, p.dict, {.max_detections = 10});
        benchmark::DoNotOptimize(result.support.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Recover)->RangeMultiplier(2)->Range(16, 64)->Complexity();

void BM_RangeDictionaryCoherence(benchmark::State& state) {
    const double pri = 100e-6;
    std::vector<Band> bands;
    for (double start : {1.63e6, 2.16e6, 3.05e6, 3.88e6, 5.66e6, 6.51e6, 8.64e6, 12.32e6})
        bands.push_back({start, start + 0.375e6});
    const auto spectrum = build_cognitive_spectrum(15e6, bands, pri);
    for (auto _ : state) {
        const double mu = range_dictionary_coherence(spectrum.kappa, 8 * 1500);
        benchmark::DoNotOptimize(mu);
    }
}
BENCHMARK(BM_RangeDictionaryCoherence);

}  // namespace

BENCHMARK_MAIN();
