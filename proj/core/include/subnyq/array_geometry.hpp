#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "subnyq/errors.hpp"

namespace subnyq {

/// Propagation speed used throughout, m/s. The usual radar convention of a
/// rounded 3e8 keeps range cells and ambiguity limits at their nominal values
/// (1.25 m cell, 15 km unambiguous range for the reference parameter set).
inline constexpr double kSpeedOfLight = 3.0e8;

/// Global waveform and grid constants shared by every stage of the pipeline.
///
/// tx_count / rx_count describe the Nyquist reference array the recovery grid
/// is built against; a thinned constellation keeps the reference counts while
/// using fewer physical elements.
struct RadarParams {
    int tx_count = 0;             // T
    int rx_count = 0;             // R
    double pri_s = 0.0;           // pulse repetition interval, seconds
    int pulse_count = 0;          // P, pulses per CPI
    double tx_bandwidth_hz = 0.0; // B_h, one-sided per-transmitter slot incl. guard
    double carrier_hz = 0.0;      // f_c
    int coeff_count = 0;          // N = round(B_h * pri), Fourier coefficients per channel
    double wavelength_m = 0.0;    // c / f_c

    static RadarParams make(int tx_count, int rx_count, double pri_s, int pulse_count,
                            double tx_bandwidth_hz, double carrier_hz);

    void validate() const;  // throws ConfigError

    int range_bins() const { return tx_count * coeff_count; }  // TN
    double unambiguous_range_m() const { return kSpeedOfLight * pri_s / 2.0; }
    double max_unambiguous_speed_mps() const { return wavelength_m / (4.0 * pri_s); }
};

/// The four supported constellations.
enum class ArrayMode : int {
    Ula = 1,      // uniform Nyquist virtual array, full aperture TR/2
    Random = 2,   // full element count, random placement, same aperture
    Thinned = 3,  // half the elements, random placement, same aperture
    Wide = 4,     // full element count spread over the 20x20 reference aperture
};

ArrayMode array_mode_from_id(int id);  // throws ConfigError for unknown ids

/// Element positions in normalized units (multiples of the wavelength).
struct ArrayConfig {
    ArrayMode mode = ArrayMode::Ula;
    std::vector<double> tx_positions;  // xi_m
    std::vector<double> rx_positions;  // zeta_q
    double aperture = 0.0;             // Z, normalized

    int num_tx() const { return static_cast<int>(tx_positions.size()); }
    int num_rx() const { return static_cast<int>(rx_positions.size()); }

    /// Size of the virtual ULA spanning this aperture; this is the azimuth
    /// grid the recovery dictionaries are built on (TR for modes 1-3, 400 for
    /// the wide mode).
    int azimuth_bins() const;

    void validate() const;  // positions within [0, Z]

    /// Direct construction for non-standard element counts (e.g. property
    /// tests with M, Q not tied to a mode). Positions are validated.
    static ArrayConfig from_positions(std::vector<double> tx, std::vector<double> rx,
                                      double aperture, ArrayMode mode = ArrayMode::Random);
};

/// Normalized aperture of the wide mode: the 20x20 virtual reference, Z = 200.
inline constexpr double kWideModeAperture = 200.0;

/// Builds one of the four constellations. Random draws are rejected and
/// redrawn while any two same-type elements sit closer than 1/2 normalized
/// unit. Deterministic for a fixed (mode, seed); the ULA ignores the seed.
ArrayConfig build_array(const RadarParams& params, ArrayMode mode, std::uint64_t seed);

/// Array-structure phase parameter beta = (zeta + xi)(f λ/c + 1) for one
/// Tx-Rx pair of a channel modulated at carrier offset f.
double compute_beta(double tx_pos, double rx_pos, double carrier_offset_hz,
                    const RadarParams& params);

/// Noiseless recovery bounds: MQ >= 2L, MK >= 2L, P >= 2L.
struct RecoveryConditionReport {
    long long virtual_channels = 0;  // M*Q
    long long samples = 0;           // M*K
    long long pulses = 0;            // P
    long long required = 0;          // 2L
    bool channels_ok = false;
    bool samples_ok = false;
    bool pulses_ok = false;
    bool all_ok = false;
};

RecoveryConditionReport check_recovery_conditions(long long num_tx, long long num_rx,
                                                  long long num_coeffs, long long num_pulses,
                                                  long long num_targets);

/// One element per line: type (Tx|Rx), index, normalized position, meters.
void write_array_table(std::ostream& out, const ArrayConfig& array, const RadarParams& params);

}  // namespace subnyq
