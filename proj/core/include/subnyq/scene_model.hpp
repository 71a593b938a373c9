#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "subnyq/array_geometry.hpp"

namespace subnyq {

/// One non-fluctuating point target in physical coordinates.
struct Target {
    std::complex<double> reflectivity{1.0, 0.0};  // alpha
    double delay_s = 0.0;                         // in [0, pri)
    double sine_azimuth = 0.0;                    // in [-1, 1)
    double doppler_hz = 0.0;                      // in [-1/(2 pri), 1/(2 pri))

    double range_m() const { return delay_s * kSpeedOfLight / 2.0; }
    double speed_mps(double wavelength_m) const { return doppler_hz * wavelength_m / 2.0; }
};

struct GridIndex {
    int range_bin = 0;    // s in 0..TN-1
    int azimuth_bin = 0;  // r in 0..AZ-1
    int doppler_bin = 0;  // u in 0..P-1

    bool operator==(const GridIndex&) const = default;
};

/// The recovery grid. The azimuth axis is the virtual ULA of the array
/// actually in use (TR bins for the full-aperture modes, 400 for the wide
/// mode), so the grid is constructed from params plus an optional array.
struct SceneGrid {
    int range_bins = 0;
    int azimuth_bins = 0;
    int doppler_bins = 0;
    double pri_s = 0.0;

    static SceneGrid of(const RadarParams& params);
    static SceneGrid of(const RadarParams& params, const ArrayConfig& array);

    double range_bin_delay_s() const { return pri_s / range_bins; }
    double azimuth_bin_width() const { return 2.0 / azimuth_bins; }
    double doppler_bin_hz() const { return 1.0 / (doppler_bins * pri_s); }
    double range_cell_m() const { return range_bin_delay_s() * kSpeedOfLight / 2.0; }

    bool contains(const GridIndex& idx) const;
};

/// Physical coordinates of one grid point.
struct PhysicalCoords {
    double delay_s = 0.0;
    double sine_azimuth = 0.0;
    double doppler_hz = 0.0;
};

/// tau = pri*s/TN, theta = -1 + 2r/AZ, f_D = -1/(2 pri) + u/(P pri).
/// Throws std::out_of_range for indices outside the grid.
PhysicalCoords grid_to_physical(const GridIndex& idx, const SceneGrid& grid);

/// Nearest-bin quantization, round half up. The circular axes (delay modulo
/// the PRI, Doppler modulo 1/PRI) wrap; azimuth clamps at the top edge.
GridIndex physical_to_grid(const Target& target, const SceneGrid& grid);

struct TargetScene {
    std::vector<Target> targets;
    std::vector<GridIndex> grid;  // filled only when the scene is on-grid

    int size() const { return static_cast<int>(targets.size()); }
    bool on_grid() const { return !targets.empty() && grid.size() == targets.size(); }
};

struct MinSeparation {
    double sine_azimuth = 0.0;
};

/// L on-grid targets with pairwise sine-azimuth spacing >= sep.sine_azimuth
/// and distinct grid triples. Amplitudes are unit modulus with uniform random
/// phase; amplitude_spread_db > 0 additionally draws the modulus log-uniform
/// over [-spread, 0] dB for dynamic-range studies. Deterministic per seed.
TargetScene random_scene(int count, const SceneGrid& grid, const MinSeparation& sep,
                         std::uint64_t seed, double amplitude_spread_db = 0.0);

/// Scene built from explicit targets, quantized onto the grid.
TargetScene scene_from_grid(const std::vector<GridIndex>& indices,
                            const std::vector<std::complex<double>>& amplitudes,
                            const SceneGrid& grid);

/// CSV with columns alpha_re, alpha_im, range_m, sine_azimuth, velocity_mps.
void write_scene_csv(std::ostream& out, const TargetScene& scene, const RadarParams& params);
TargetScene read_scene_csv(std::istream& in, const RadarParams& params);

}  // namespace subnyq
