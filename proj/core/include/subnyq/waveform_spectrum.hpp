#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "subnyq/errors.hpp"

namespace subnyq {

/// One transmit subband, half-open [start_hz, stop_hz) within [0, B_h).
struct Band {
    double start_hz = 0.0;
    double stop_hz = 0.0;
    double width_hz() const { return stop_hz - start_hz; }
};

/// The subband structure of one transmitter plus the Fourier-coefficient set
/// it induces. A non-cognitive (full-band) spectrum is the single band
/// [0, B_h) with unit amplitude scale.
struct CognitiveSpectrum {
    double tx_bandwidth_hz = 0.0;  // B_h
    std::vector<Band> bands;       // sorted by start, pairwise disjoint
    double amplitude_scale = 1.0;  // gamma
    std::vector<int> kappa;        // sorted sampled coefficient indices

    int num_coeffs() const { return static_cast<int>(kappa.size()); }
    bool full_band() const { return bands.size() == 1 && bands[0].start_hz == 0.0 &&
                                    bands[0].stop_hz >= tx_bandwidth_hz; }
};

/// Validates the band set and fixes the amplitude scale so total transmit
/// power matches a flat full-band reference: gamma = sqrt(B_h / sum |B_i|).
CognitiveSpectrum build_cognitive_spectrum(double tx_bandwidth_hz, std::vector<Band> bands,
                                           double pri_s);

CognitiveSpectrum full_band_spectrum(double tx_bandwidth_hz, double pri_s);

/// Coefficient indices whose frequencies k/tau fall inside some band
/// (inclusive band edges, clipped to 0..N-1), sorted, duplicate-free.
std::vector<int> coefficient_set(const CognitiveSpectrum& spectrum, double pri_s);

/// Per-transmitter FDM carrier offsets f_m = m * B_h with the recorded
/// guard-band width (guard is the unused top part of each B_h slot).
struct TxPlan {
    std::vector<double> carrier_offsets_hz;
    double guard_hz = 0.0;

    int num_channels() const { return static_cast<int>(carrier_offsets_hz.size()); }
    void validate(double tx_bandwidth_hz) const;  // strictly increasing, spacing >= B_h
};

TxPlan make_fdm_plan(int num_channels, double tx_bandwidth_hz, double guard_hz);

/// Folding of the sampled coefficient set under sub-Nyquist sampling at f_s:
/// index k lands on k mod N_s with N_s = round(f_s * tau). Construction fails
/// with AliasCollisionError when two kappa entries fold together.
struct AliasMap {
    double q_factor = 1.0;  // reported real-IF convention, 2N / N_s
    int modulus = 0;        // N_s
    std::vector<std::pair<int, int>> mapping;  // (k, k mod N_s) in kappa order
    bool injective = false;
};

AliasMap alias_map(const std::vector<int>& kappa, int coeff_count, double sample_rate_hz,
                   double pri_s);

/// Colliding (k, k') pairs under mod-N_s folding; empty means injective.
std::vector<std::pair<int, int>> find_alias_collisions(const std::vector<int>& kappa,
                                                       int modulus);

/// Largest normalized correlation between two distinct dictionary columns.
/// Throws DictionaryError on fewer than two columns or a zero column.
double mutual_coherence(const Eigen::MatrixXcd& dictionary);

/// Coherence of the range dictionary restricted to kappa, computed through
/// the column-difference structure: columns differ only by a unit-modulus
/// diagonal scaling, so mu = max_d |sum_k e^{-j2pi kappa_k d / TN}| / K.
/// Equals mutual_coherence of the explicit K x TN matrix at any carrier
/// offset, at a fraction of the cost.
double range_dictionary_coherence(const std::vector<int>& kappa, int range_bins);

}  // namespace subnyq
