#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "subnyq/scene_model.hpp"

using namespace subnyq;

namespace {

RadarParams reference_params() { return RadarParams::make(8, 10, 100e-6, 10, 15e6, 10e9); }

SceneGrid small_grid() {
    // T=2, R=3, N=16, P=4 desk instance
    const RadarParams params = RadarParams::make(2, 3, 100e-6, 4, 16.0 / 100e-6, 10e9);
    return SceneGrid::of(params);
}

}  // namespace

TEST_CASE("grid constants at the reference parameters") {
    const RadarParams params = reference_params();
    const SceneGrid grid = SceneGrid::of(params);
    CHECK(grid.range_bins == 12000);
    CHECK(grid.azimuth_bins == 80);
    CHECK(grid.doppler_bins == 10);
    CHECK(grid.range_cell_m() == doctest::Approx(1.25));
    CHECK(grid.azimuth_bin_width() == doctest::Approx(0.025));
    CHECK(grid.doppler_bin_hz() == doctest::Approx(1e3));

    // s = 1 sits one range cell out
    const PhysicalCoords cell = grid_to_physical({1, 40, 5}, grid);
    CHECK(cell.delay_s == doctest::Approx(100e-6 / 12000));
    CHECK(cell.delay_s * kSpeedOfLight / 2.0 == doctest::Approx(1.25));
}

TEST_CASE("grid origin and symmetry points") {
    const SceneGrid grid = SceneGrid::of(reference_params());
    const PhysicalCoords origin = grid_to_physical({0, 40, 5}, grid);
    CHECK(origin.delay_s == 0.0);
    CHECK(origin.sine_azimuth == doctest::Approx(0.0));
    CHECK(origin.doppler_hz == doctest::Approx(0.0));

    const PhysicalCoords top = grid_to_physical({0, 79, 0}, grid);
    CHECK(top.sine_azimuth == doctest::Approx(1.0 - 2.0 / 80));
    CHECK(top.doppler_hz == doctest::Approx(-5e3));

    CHECK_THROWS_AS(grid_to_physical({12000, 0, 0}, grid), std::out_of_range);
    CHECK_THROWS_AS(grid_to_physical({0, -1, 0}, grid), std::out_of_range);
}

TEST_CASE("grid maps are affine with the stated bin widths") {
    const SceneGrid grid = SceneGrid::of(reference_params());
    const auto a = grid_to_physical({5, 12, 3}, grid);
    const auto b = grid_to_physical({6, 13, 4}, grid);
    CHECK(b.delay_s - a.delay_s == doctest::Approx(100e-6 / 12000).epsilon(1e-12));
    CHECK(b.sine_azimuth - a.sine_azimuth == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(b.doppler_hz - a.doppler_hz == doctest::Approx(1e3).epsilon(1e-12));
}

TEST_CASE("round trip is the identity on every bin of a small grid") {
    const SceneGrid grid = small_grid();
    for (int s = 0; s < grid.range_bins; ++s)
        for (int r = 0; r < grid.azimuth_bins; ++r)
            for (int u = 0; u < grid.doppler_bins; ++u) {
                const GridIndex idx{s, r, u};
                const PhysicalCoords coords = grid_to_physical(idx, grid);
                Target target;
                target.delay_s = coords.delay_s;
                target.sine_azimuth = coords.sine_azimuth;
                target.doppler_hz = coords.doppler_hz;
                CHECK(physical_to_grid(target, grid) == idx);
            }
}

TEST_CASE("quantization rounds to the nearest bin, half up") {
    const SceneGrid grid = small_grid();
    const double cell = grid.range_bin_delay_s();

    Target target;
    target.delay_s = 4.5 * cell;  // exactly between bins 4 and 5
    CHECK(physical_to_grid(target, grid).range_bin == 5);

    target.delay_s = 4.49 * cell;
    CHECK(physical_to_grid(target, grid).range_bin == 4);

    // Random off-grid delays land within half a cell
    for (int i = 0; i < 500; ++i) {
        target.delay_s = (i + 0.37) / 500.0 * grid.pri_s * 0.999;
        const GridIndex idx = physical_to_grid(target, grid);
        const double snapped = grid_to_physical(idx, grid).delay_s;
        double dist = std::abs(target.delay_s - snapped);
        dist = std::min(dist, grid.pri_s - dist);  // delay wraps at the PRI
        CHECK(dist <= cell / 2.0 + 1e-15);
    }
}

TEST_CASE("random scenes") {
    const SceneGrid grid = SceneGrid::of(reference_params());
    SUBCASE("empty scene") {
        const TargetScene scene = random_scene(0, grid, {}, 1);
        CHECK(scene.size() == 0);
    }
    SUBCASE("ten targets honor the azimuth separation") {
        const TargetScene scene = random_scene(10, grid, {0.025}, 7);
        REQUIRE(scene.size() == 10);
        CHECK(scene.on_grid());
        for (int i = 0; i < 10; ++i)
            for (int j = i + 1; j < 10; ++j)
                CHECK(std::abs(scene.targets[i].sine_azimuth - scene.targets[j].sine_azimuth) >=
                      0.025 - 1e-12);
        for (const Target& t : scene.targets)
            CHECK(std::abs(t.reflectivity) == doctest::Approx(1.0));
    }
    SUBCASE("distinct triples even with no separation") {
        const TargetScene scene = random_scene(40, grid, {0.0}, 3);
        std::set<std::tuple<int, int, int>> seen;
        for (const GridIndex& idx : scene.grid)
            seen.insert({idx.range_bin, idx.azimuth_bin, idx.doppler_bin});
        CHECK(seen.size() == 40);
    }
    SUBCASE("same seed, same scene; different seed, different scene") {
        const TargetScene a = random_scene(5, grid, {0.025}, 11);
        const TargetScene b = random_scene(5, grid, {0.025}, 11);
        const TargetScene c = random_scene(5, grid, {0.025}, 12);
        REQUIRE(a.size() == b.size());
        bool same = true, differs = false;
        for (int i = 0; i < a.size(); ++i) {
            same = same && a.grid[i] == b.grid[i] && a.targets[i].reflectivity == b.targets[i].reflectivity;
            differs = differs || !(a.grid[i] == c.grid[i]);
        }
        CHECK(same);
        CHECK(differs);
    }
    SUBCASE("unsatisfiable separation is a generation error") {
        CHECK_THROWS_AS(random_scene(3, grid, {2.0}, 1), GenerationError);
    }
    SUBCASE("amplitude spread draws moduli in range") {
        const TargetScene scene = random_scene(20, grid, {}, 9, 30.0);
        for (const Target& t : scene.targets) {
            CHECK(std::abs(t.reflectivity) <= 1.0 + 1e-12);
            CHECK(std::abs(t.reflectivity) >= std::pow(10.0, -30.0 / 20.0) - 1e-12);
        }
    }
}

TEST_CASE("the shipped closely-spaced scene is valid at the reference parameters") {
    const RadarParams params = reference_params();
    std::ifstream in(std::string(SUBNYQ_REPO_DATA_DIR) + "/closely_spaced.csv");
    REQUIRE(in.good());
    const TargetScene scene = read_scene_csv(in, params);
    REQUIRE(scene.size() == 10);

    const double doppler_limit = 1.0 / (2.0 * params.pri_s);
    for (const Target& t : scene.targets) {
        CHECK(t.delay_s >= 0.0);
        CHECK(t.delay_s < params.pri_s);
        CHECK(std::abs(t.sine_azimuth) <= 1.0);
        CHECK(std::abs(t.doppler_hz) <= doppler_limit);
    }
    // Two pairs 0.02 apart in sine azimuth
    int pairs = 0;
    for (int i = 0; i < 10; ++i)
        for (int j = i + 1; j < 10; ++j)
            if (std::abs(scene.targets[i].sine_azimuth - scene.targets[j].sine_azimuth) <
                0.02 + 1e-9)
                ++pairs;
    CHECK(pairs == 2);
}

TEST_CASE("scene csv round trip") {
    const RadarParams params = reference_params();
    const SceneGrid grid = SceneGrid::of(params);
    const TargetScene scene = random_scene(6, grid, {0.025}, 21);

    std::ostringstream out;
    write_scene_csv(out, scene, params);
    std::istringstream in(out.str());
    const TargetScene parsed = read_scene_csv(in, params);

    REQUIRE(parsed.size() == scene.size());
    for (int i = 0; i < scene.size(); ++i) {
        CHECK(parsed.targets[i].delay_s ==
              doctest::Approx(scene.targets[i].delay_s).epsilon(1e-9));
        CHECK(parsed.targets[i].sine_azimuth ==
              doctest::Approx(scene.targets[i].sine_azimuth).epsilon(1e-9));
        CHECK(parsed.targets[i].doppler_hz ==
              doctest::Approx(scene.targets[i].doppler_hz).epsilon(1e-9));
    }
}
