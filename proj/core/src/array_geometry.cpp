#include "subnyq/array_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "subnyq/io_util.hpp"
#include "subnyq/rng.hpp"

namespace subnyq {

RadarParams RadarParams::make(int tx_count, int rx_count, double pri_s, int pulse_count,
                              double tx_bandwidth_hz, double carrier_hz) {
    RadarParams p;
    p.tx_count = tx_count;
    p.rx_count = rx_count;
    p.pri_s = pri_s;
    p.pulse_count = pulse_count;
    p.tx_bandwidth_hz = tx_bandwidth_hz;
    p.carrier_hz = carrier_hz;
    p.coeff_count = static_cast<int>(std::llround(tx_bandwidth_hz * pri_s));
    p.wavelength_m = kSpeedOfLight / carrier_hz;
    p.validate();
    return p;
}

void RadarParams::validate() const {
    if (tx_count < 1 || rx_count < 1) throw ConfigError("RadarParams: need at least one Tx and one Rx");
    if (pulse_count < 1) throw ConfigError("RadarParams: need at least one pulse per CPI");
    if (pri_s <= 0.0) throw ConfigError("RadarParams: PRI must be positive");
    if (carrier_hz <= 0.0) throw ConfigError("RadarParams: carrier must be positive");
    if (tx_bandwidth_hz * pri_s < 1.0)
        throw ConfigError("RadarParams: B_h * tau must be at least one coefficient");
    if (coeff_count < 1) throw ConfigError("RadarParams: coefficient count must be positive");
    const double c = wavelength_m * carrier_hz;
    if (std::abs(c - kSpeedOfLight) > 1e-12 * kSpeedOfLight)
        throw ConfigError("RadarParams: wavelength and carrier are inconsistent");
}

ArrayMode array_mode_from_id(int id) {
    switch (id) {
        case 1: return ArrayMode::Ula;
        case 2: return ArrayMode::Random;
        case 3: return ArrayMode::Thinned;
        case 4: return ArrayMode::Wide;
        default: break;
    }
    throw ConfigError("unsupported array mode id " + std::to_string(id));
}

int ArrayConfig::azimuth_bins() const { return static_cast<int>(std::llround(2.0 * aperture)); }

void ArrayConfig::validate() const {
    if (tx_positions.empty() || rx_positions.empty())
        throw ConfigError("ArrayConfig: empty element list");
    if (aperture <= 0.0) throw ConfigError("ArrayConfig: aperture must be positive");
    auto in_range = [this](double pos) { return pos >= 0.0 && pos <= aperture; };
    if (!std::all_of(tx_positions.begin(), tx_positions.end(), in_range) ||
        !std::all_of(rx_positions.begin(), rx_positions.end(), in_range))
        throw ConfigError("ArrayConfig: element position outside [0, Z]");
}

ArrayConfig ArrayConfig::from_positions(std::vector<double> tx, std::vector<double> rx,
                                        double aperture, ArrayMode mode) {
    ArrayConfig cfg;
    cfg.mode = mode;
    cfg.tx_positions = std::move(tx);
    cfg.rx_positions = std::move(rx);
    cfg.aperture = aperture;
    cfg.validate();
    return cfg;
}

namespace {

// Sorted random positions with a minimum same-type spacing of 1/2 normalized
// unit; redraws the whole set when the spacing rule fails.
std::vector<double> draw_positions(Rng& rng, int count, double aperture) {
    constexpr int kMaxAttempts = 1000;
    constexpr double kMinSpacing = 0.5;
    std::vector<double> positions(count);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        for (auto& pos : positions) pos = rng.uniform(0.0, aperture);
        std::sort(positions.begin(), positions.end());
        bool ok = true;
        for (int i = 1; i < count && ok; ++i)
            ok = positions[i] - positions[i - 1] >= kMinSpacing;
        if (ok) return positions;
    }
    throw ConfigError("build_array: could not satisfy the element spacing rule; aperture too crowded");
}

}  // namespace

ArrayConfig build_array(const RadarParams& params, ArrayMode mode, std::uint64_t seed) {
    params.validate();
    ArrayConfig cfg;
    cfg.mode = mode;
    const double nyquist_aperture = params.tx_count * params.rx_count / 2.0;

    switch (mode) {
        case ArrayMode::Ula: {
            cfg.aperture = nyquist_aperture;
            cfg.rx_positions.resize(params.rx_count);
            for (int q = 0; q < params.rx_count; ++q) cfg.rx_positions[q] = 0.5 * q;
            cfg.tx_positions.resize(params.tx_count);
            for (int m = 0; m < params.tx_count; ++m)
                cfg.tx_positions[m] = 0.5 * params.rx_count * m;
            break;
        }
        case ArrayMode::Random: {
            cfg.aperture = nyquist_aperture;
            Rng rng(seed);
            cfg.tx_positions = draw_positions(rng, params.tx_count, cfg.aperture);
            cfg.rx_positions = draw_positions(rng, params.rx_count, cfg.aperture);
            break;
        }
        case ArrayMode::Thinned: {
            if (params.tx_count % 2 != 0 || params.rx_count % 2 != 0)
                throw ConfigError("thinned mode needs even Nyquist-reference element counts");
            cfg.aperture = nyquist_aperture;
            Rng rng(seed);
            cfg.tx_positions = draw_positions(rng, params.tx_count / 2, cfg.aperture);
            cfg.rx_positions = draw_positions(rng, params.rx_count / 2, cfg.aperture);
            break;
        }
        case ArrayMode::Wide: {
            cfg.aperture = kWideModeAperture;
            Rng rng(seed);
            cfg.tx_positions = draw_positions(rng, params.tx_count, cfg.aperture);
            cfg.rx_positions = draw_positions(rng, params.rx_count, cfg.aperture);
            break;
        }
        default:
            throw ConfigError("unsupported array mode");
    }
    cfg.validate();
    return cfg;
}

double compute_beta(double tx_pos, double rx_pos, double carrier_offset_hz,
                    const RadarParams& params) {
    return (rx_pos + tx_pos) * (carrier_offset_hz / params.carrier_hz + 1.0);
}

RecoveryConditionReport check_recovery_conditions(long long num_tx, long long num_rx,
                                                  long long num_coeffs, long long num_pulses,
                                                  long long num_targets) {
    RecoveryConditionReport report;
    report.virtual_channels = num_tx * num_rx;
    report.samples = num_tx * num_coeffs;
    report.pulses = num_pulses;
    report.required = 2 * num_targets;
    report.channels_ok = report.virtual_channels >= report.required;
    report.samples_ok = report.samples >= report.required;
    report.pulses_ok = report.pulses >= report.required;
    report.all_ok = report.channels_ok && report.samples_ok && report.pulses_ok;
    return report;
}

void write_array_table(std::ostream& out, const ArrayConfig& array, const RadarParams& params) {
    out << "type,index,position_normalized,position_m\n";
    for (int m = 0; m < array.num_tx(); ++m)
        out << "Tx," << m << ',' << fmt_double(array.tx_positions[m]) << ','
            << fmt_double(array.tx_positions[m] * params.wavelength_m) << '\n';
    for (int q = 0; q < array.num_rx(); ++q)
        out << "Rx," << q << ',' << fmt_double(array.rx_positions[q]) << ','
            << fmt_double(array.rx_positions[q] * params.wavelength_m) << '\n';
}

}  // namespace subnyq
