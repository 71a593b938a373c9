#include "subnyq/scene_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "subnyq/io_util.hpp"
#include "subnyq/rng.hpp"

namespace subnyq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Round half up, the tie rule for bin quantization.
int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

int wrap(int value, int modulus) {
    int r = value % modulus;
    return r < 0 ? r + modulus : r;
}

}  // namespace

SceneGrid SceneGrid::of(const RadarParams& params) {
    params.validate();
    SceneGrid grid;
    grid.range_bins = params.range_bins();
    grid.azimuth_bins = params.tx_count * params.rx_count;
    grid.doppler_bins = params.pulse_count;
    grid.pri_s = params.pri_s;
    return grid;
}

SceneGrid SceneGrid::of(const RadarParams& params, const ArrayConfig& array) {
    SceneGrid grid = of(params);
    grid.azimuth_bins = array.azimuth_bins();
    return grid;
}

bool SceneGrid::contains(const GridIndex& idx) const {
    return idx.range_bin >= 0 && idx.range_bin < range_bins && idx.azimuth_bin >= 0 &&
           idx.azimuth_bin < azimuth_bins && idx.doppler_bin >= 0 &&
           idx.doppler_bin < doppler_bins;
}

PhysicalCoords grid_to_physical(const GridIndex& idx, const SceneGrid& grid) {
    if (!grid.contains(idx)) throw std::out_of_range("grid_to_physical: index outside the grid");
    PhysicalCoords coords;
    coords.delay_s = grid.pri_s * idx.range_bin / grid.range_bins;
    coords.sine_azimuth = -1.0 + 2.0 * idx.azimuth_bin / grid.azimuth_bins;
    coords.doppler_hz = -1.0 / (2.0 * grid.pri_s) + idx.doppler_bin / (grid.doppler_bins * grid.pri_s);
    return coords;
}

GridIndex physical_to_grid(const Target& target, const SceneGrid& grid) {
    GridIndex idx;
    idx.range_bin =
        wrap(round_half_up(target.delay_s / grid.pri_s * grid.range_bins), grid.range_bins);
    idx.azimuth_bin = std::clamp(
        round_half_up((target.sine_azimuth + 1.0) / 2.0 * grid.azimuth_bins), 0,
        grid.azimuth_bins - 1);
    idx.doppler_bin = wrap(
        round_half_up((target.doppler_hz * grid.pri_s + 0.5) * grid.doppler_bins),
        grid.doppler_bins);
    return idx;
}

TargetScene random_scene(int count, const SceneGrid& grid, const MinSeparation& sep,
                         std::uint64_t seed, double amplitude_spread_db) {
    if (count < 0) throw GenerationError("random_scene: negative target count");
    TargetScene scene;
    if (count == 0) return scene;

    Rng rng(seed);
    constexpr int kMaxAttempts = 2000;
    const double bin_width = grid.azimuth_bin_width();

    for (int l = 0; l < count; ++l) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
            GridIndex idx;
            idx.azimuth_bin = rng.uniform_index(grid.azimuth_bins);
            idx.range_bin = rng.uniform_index(grid.range_bins);
            idx.doppler_bin = rng.uniform_index(grid.doppler_bins);

            bool ok = true;
            for (const GridIndex& other : scene.grid) {
                const double spacing =
                    std::abs(idx.azimuth_bin - other.azimuth_bin) * bin_width;
                if (spacing < sep.sine_azimuth || idx == other) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;

            double modulus = 1.0;
            if (amplitude_spread_db > 0.0)
                modulus = std::pow(10.0, rng.uniform(-amplitude_spread_db, 0.0) / 20.0);
            const double phase = rng.uniform(0.0, 2.0 * kPi);

            Target target;
            target.reflectivity = std::polar(modulus, phase);
            const PhysicalCoords coords = grid_to_physical(idx, grid);
            target.delay_s = coords.delay_s;
            target.sine_azimuth = coords.sine_azimuth;
            target.doppler_hz = coords.doppler_hz;
            scene.targets.push_back(target);
            scene.grid.push_back(idx);
            placed = true;
        }
        if (!placed)
            throw GenerationError("random_scene: separation constraints unsatisfiable after " +
                                  std::to_string(kMaxAttempts) + " redraws");
    }
    return scene;
}

TargetScene scene_from_grid(const std::vector<GridIndex>& indices,
                            const std::vector<std::complex<double>>& amplitudes,
                            const SceneGrid& grid) {
    if (indices.size() != amplitudes.size())
        throw GenerationError("scene_from_grid: index/amplitude size mismatch");
    TargetScene scene;
    for (std::size_t l = 0; l < indices.size(); ++l) {
        const PhysicalCoords coords = grid_to_physical(indices[l], grid);
        Target target;
        target.reflectivity = amplitudes[l];
        target.delay_s = coords.delay_s;
        target.sine_azimuth = coords.sine_azimuth;
        target.doppler_hz = coords.doppler_hz;
        scene.targets.push_back(target);
        scene.grid.push_back(indices[l]);
    }
    return scene;
}

void write_scene_csv(std::ostream& out, const TargetScene& scene, const RadarParams& params) {
    out << "alpha_re,alpha_im,range_m,sine_azimuth,velocity_mps\n";
    for (const Target& t : scene.targets) {
        out << fmt_double(t.reflectivity.real()) << ',' << fmt_double(t.reflectivity.imag())
            << ',' << fmt_double(t.range_m()) << ',' << fmt_double(t.sine_azimuth) << ','
            << fmt_double(t.speed_mps(params.wavelength_m)) << '\n';
    }
}

TargetScene read_scene_csv(std::istream& in, const RadarParams& params) {
    TargetScene scene;
    std::string line;
    if (!std::getline(in, line)) throw IoError("scene file: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double fields[5];
        char comma;
        for (int i = 0; i < 5; ++i) {
            if (!(row >> fields[i])) throw IoError("scene file: malformed row '" + line + "'");
            if (i < 4 && !(row >> comma)) throw IoError("scene file: malformed row '" + line + "'");
        }
        Target t;
        t.reflectivity = {fields[0], fields[1]};
        t.delay_s = 2.0 * fields[2] / kSpeedOfLight;
        t.sine_azimuth = fields[3];
        t.doppler_hz = 2.0 * fields[4] / params.wavelength_m;
        scene.targets.push_back(t);
    }
    return scene;
}

}  // namespace subnyq
