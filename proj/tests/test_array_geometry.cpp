#include <fstream>
#include <sstream>

#include "doctest.h"
#include "subnyq/array_geometry.hpp"

using namespace subnyq;

namespace {

RadarParams reference_params() {
    // 8x10 reference array, 100 us PRI, 15 MHz slot, X band.
    return RadarParams::make(8, 10, 100e-6, 10, 15e6, 10e9);
}

}  // namespace

TEST_CASE("reference parameters derive the documented constants") {
    const RadarParams params = reference_params();
    CHECK(params.coeff_count == 1500);
    CHECK(params.wavelength_m == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(params.range_bins() == 12000);
    CHECK(params.unambiguous_range_m() == doctest::Approx(15e3));
    CHECK(params.max_unambiguous_speed_mps() == doctest::Approx(75.0));
}

TEST_CASE("parameter validation rejects inconsistent inputs") {
    CHECK_THROWS_AS(RadarParams::make(0, 10, 100e-6, 10, 15e6, 10e9), ConfigError);
    CHECK_THROWS_AS(RadarParams::make(8, 10, 100e-6, 0, 15e6, 10e9), ConfigError);
    // B_h * tau below one coefficient
    CHECK_THROWS_AS(RadarParams::make(8, 10, 1e-9, 10, 15e6, 10e9), ConfigError);
}

TEST_CASE("ULA mode reproduces the virtual-array spacings and aperture") {
    const RadarParams params = reference_params();
    const ArrayConfig array = build_array(params, ArrayMode::Ula, 0);
    CHECK(array.num_tx() == 8);
    CHECK(array.num_rx() == 10);
    CHECK(array.aperture == doctest::Approx(40.0));
    // Physical aperture 40 * 0.03 m = 1.2 m
    CHECK(array.aperture * params.wavelength_m == doctest::Approx(1.2));
    for (int q = 1; q < array.num_rx(); ++q)
        CHECK(array.rx_positions[q] - array.rx_positions[q - 1] == doctest::Approx(0.5));
    for (int m = 1; m < array.num_tx(); ++m)
        CHECK(array.tx_positions[m] - array.tx_positions[m - 1] == doctest::Approx(5.0));
    // Seed is ignored for the deterministic ULA
    const ArrayConfig again = build_array(params, ArrayMode::Ula, 999);
    CHECK(again.tx_positions == array.tx_positions);
    CHECK(again.rx_positions == array.rx_positions);
}

TEST_CASE("every mode keeps elements inside the aperture") {
    const RadarParams params = reference_params();
    for (ArrayMode mode : {ArrayMode::Ula, ArrayMode::Random, ArrayMode::Thinned, ArrayMode::Wide}) {
        const ArrayConfig array = build_array(params, mode, 42);
        for (double pos : array.tx_positions) {
            CHECK(pos >= 0.0);
            CHECK(pos <= array.aperture);
        }
        for (double pos : array.rx_positions) {
            CHECK(pos >= 0.0);
            CHECK(pos <= array.aperture);
        }
    }
}

TEST_CASE("thinned mode halves the element counts") {
    const RadarParams params = reference_params();
    const ArrayConfig array = build_array(params, ArrayMode::Thinned, 3);
    CHECK(array.num_tx() == 4);
    CHECK(array.num_rx() == 5);
    CHECK(array.aperture == doctest::Approx(40.0));
    CHECK(array.azimuth_bins() == 80);

    const RadarParams odd = RadarParams::make(7, 10, 100e-6, 10, 15e6, 10e9);
    CHECK_THROWS_AS(build_array(odd, ArrayMode::Thinned, 3), ConfigError);
}

TEST_CASE("wide mode spans the 20x20 reference aperture") {
    const RadarParams params = reference_params();
    const ArrayConfig array = build_array(params, ArrayMode::Wide, 11);
    CHECK(array.num_tx() == 8);
    CHECK(array.num_rx() == 10);
    CHECK(array.aperture == doctest::Approx(200.0));
    CHECK(array.aperture * params.wavelength_m == doctest::Approx(6.0));  // 6 m
    CHECK(array.azimuth_bins() == 400);
}

TEST_CASE("random draws are deterministic per seed and spaced apart") {
    const RadarParams params = reference_params();
    const ArrayConfig a = build_array(params, ArrayMode::Thinned, 42);
    const ArrayConfig b = build_array(params, ArrayMode::Thinned, 42);
    CHECK(a.tx_positions == b.tx_positions);
    CHECK(a.rx_positions == b.rx_positions);

    const ArrayConfig c = build_array(params, ArrayMode::Thinned, 43);
    CHECK(a.tx_positions != c.tx_positions);

    for (int i = 1; i < a.num_tx(); ++i)
        CHECK(a.tx_positions[i] - a.tx_positions[i - 1] >= 0.5);
    for (int i = 1; i < a.num_rx(); ++i)
        CHECK(a.rx_positions[i] - a.rx_positions[i - 1] >= 0.5);
}

TEST_CASE("mode ids map to modes; bad ids are configuration errors") {
    CHECK(array_mode_from_id(1) == ArrayMode::Ula);
    CHECK(array_mode_from_id(4) == ArrayMode::Wide);
    CHECK_THROWS_AS(array_mode_from_id(5), ConfigError);
    CHECK_THROWS_AS(array_mode_from_id(0), ConfigError);
}

TEST_CASE("beta formula") {
    const RadarParams params = reference_params();
    SUBCASE("zero positions give zero") {
        CHECK(compute_beta(0.0, 0.0, 5e6, params) == 0.0);
    }
    SUBCASE("baseband channel reduces to the position sum") {
        CHECK(compute_beta(1.5, 2.0, 0.0, params) == doctest::Approx(3.5).epsilon(1e-15));
    }
    SUBCASE("worked value") {
        CHECK(compute_beta(1.0, 2.5, 12e6, params) == doctest::Approx(3.5042).epsilon(1e-12));
    }
    SUBCASE("monotone in each position for f above -f_c") {
        double prev = compute_beta(0.0, 1.0, 7e6, params);
        for (double xi = 0.25; xi < 3.0; xi += 0.25) {
            const double cur = compute_beta(xi, 1.0, 7e6, params);
            CHECK(cur > prev);
            prev = cur;
        }
        prev = compute_beta(1.0, 0.0, 7e6, params);
        for (double zeta = 0.25; zeta < 3.0; zeta += 0.25) {
            const double cur = compute_beta(1.0, zeta, 7e6, params);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("recovery condition report") {
    SUBCASE("boundary equality passes") {
        const auto report = check_recovery_conditions(1, 2, 2, 2, 1);
        CHECK(report.channels_ok);
        CHECK(report.samples_ok);
        CHECK(report.pulses_ok);
        CHECK(report.all_ok);
    }
    SUBCASE("a 10-pulse CPI fails the pulse bound at L = 10") {
        const auto report = check_recovery_conditions(4, 5, 304, 10, 10);
        CHECK(report.virtual_channels == 20);
        CHECK(report.channels_ok);
        CHECK(report.samples_ok);
        CHECK_FALSE(report.pulses_ok);
        CHECK_FALSE(report.all_ok);
    }
    SUBCASE("empty scene passes vacuously") {
        const auto report = check_recovery_conditions(0, 0, 0, 0, 0);
        CHECK(report.all_ok);
    }
}

TEST_CASE("array table serialization is stable across runs (golden file)") {
    const RadarParams params = reference_params();
    const ArrayConfig array = build_array(params, ArrayMode::Thinned, 42);
    std::ostringstream current;
    write_array_table(current, array, params);

    const std::string golden_path = std::string(SUBNYQ_TEST_DATA_DIR) + "/mode3_seed42_array.csv";
    std::ifstream golden(golden_path);
    REQUIRE_MESSAGE(golden.good(), "missing golden file ", golden_path);
    std::stringstream expected;
    expected << golden.rdbuf();
    CHECK(current.str() == expected.str());
}
