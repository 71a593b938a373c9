#include "subnyq/waveform_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

namespace subnyq {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Tolerance, in index units, for deciding whether a band edge includes the
// coefficient sitting exactly on it.
constexpr double kEdgeEps = 1e-6;

}  // namespace

CognitiveSpectrum build_cognitive_spectrum(double tx_bandwidth_hz, std::vector<Band> bands,
                                           double pri_s) {
    if (tx_bandwidth_hz <= 0.0) throw SpectrumError("spectrum: bandwidth must be positive");
    if (bands.empty()) throw SpectrumError("spectrum: need at least one band");
    std::sort(bands.begin(), bands.end(),
              [](const Band& a, const Band& b) { return a.start_hz < b.start_hz; });
    double occupied = 0.0;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const Band& b = bands[i];
        if (b.start_hz < 0.0 || b.stop_hz <= b.start_hz || b.start_hz >= tx_bandwidth_hz ||
            b.stop_hz > tx_bandwidth_hz)
            throw SpectrumError("spectrum: band outside [0, B_h)");
        if (i > 0 && b.start_hz < bands[i - 1].stop_hz)
            throw SpectrumError("spectrum: overlapping bands");
        occupied += b.width_hz();
    }

    CognitiveSpectrum spectrum;
    spectrum.tx_bandwidth_hz = tx_bandwidth_hz;
    spectrum.bands = std::move(bands);
    spectrum.amplitude_scale = std::sqrt(tx_bandwidth_hz / occupied);
    spectrum.kappa = coefficient_set(spectrum, pri_s);
    return spectrum;
}

CognitiveSpectrum full_band_spectrum(double tx_bandwidth_hz, double pri_s) {
    return build_cognitive_spectrum(tx_bandwidth_hz, {{0.0, tx_bandwidth_hz}}, pri_s);
}

std::vector<int> coefficient_set(const CognitiveSpectrum& spectrum, double pri_s) {
    if (pri_s <= 0.0) throw SpectrumError("coefficient_set: PRI must be positive");
    const int coeff_count =
        static_cast<int>(std::llround(spectrum.tx_bandwidth_hz * pri_s));
    std::vector<int> kappa;
    for (const Band& band : spectrum.bands) {
        int lo = static_cast<int>(std::ceil(band.start_hz * pri_s - kEdgeEps));
        int hi = static_cast<int>(std::floor(band.stop_hz * pri_s + kEdgeEps));
        lo = std::max(lo, 0);
        hi = std::min(hi, coeff_count - 1);
        for (int k = lo; k <= hi; ++k) kappa.push_back(k);
    }
    std::sort(kappa.begin(), kappa.end());
    kappa.erase(std::unique(kappa.begin(), kappa.end()), kappa.end());
    if (kappa.empty()) throw SpectrumError("coefficient_set: bands select no coefficients");
    return kappa;
}

void TxPlan::validate(double tx_bandwidth_hz) const {
    if (carrier_offsets_hz.empty()) throw ConfigError("TxPlan: need at least one channel");
    for (std::size_t m = 1; m < carrier_offsets_hz.size(); ++m) {
        const double spacing = carrier_offsets_hz[m] - carrier_offsets_hz[m - 1];
        if (spacing < tx_bandwidth_hz)
            throw ConfigError("TxPlan: carrier spacing below the per-transmitter bandwidth");
    }
    if (guard_hz < 0.0 || guard_hz >= tx_bandwidth_hz)
        throw ConfigError("TxPlan: guard band must lie within the transmitter slot");
}

TxPlan make_fdm_plan(int num_channels, double tx_bandwidth_hz, double guard_hz) {
    if (num_channels < 1) throw ConfigError("make_fdm_plan: need at least one channel");
    TxPlan plan;
    plan.guard_hz = guard_hz;
    plan.carrier_offsets_hz.resize(num_channels);
    for (int m = 0; m < num_channels; ++m)
        plan.carrier_offsets_hz[m] = m * tx_bandwidth_hz;
    plan.validate(tx_bandwidth_hz);
    return plan;
}

std::vector<std::pair<int, int>> find_alias_collisions(const std::vector<int>& kappa,
                                                       int modulus) {
    std::vector<std::pair<int, int>> collisions;
    std::vector<int> owner(modulus, -1);
    for (int k : kappa) {
        const int folded = k % modulus;
        if (owner[folded] >= 0)
            collisions.emplace_back(owner[folded], k);
        else
            owner[folded] = k;
    }
    return collisions;
}

AliasMap alias_map(const std::vector<int>& kappa, int coeff_count, double sample_rate_hz,
                   double pri_s) {
    if (sample_rate_hz * pri_s < 1.0)
        throw SpectrumError("alias_map: sampling rate below one coefficient per PRI");
    AliasMap map;
    map.modulus = static_cast<int>(std::llround(sample_rate_hz * pri_s));
    map.q_factor = 2.0 * coeff_count / static_cast<double>(map.modulus);

    const auto collisions = find_alias_collisions(kappa, map.modulus);
    if (!collisions.empty()) {
        std::string msg = "alias_map: " + std::to_string(collisions.size()) +
                          " coefficient pair(s) fold together under N_s = " +
                          std::to_string(map.modulus);
        throw AliasCollisionError(msg, collisions);
    }

    map.mapping.reserve(kappa.size());
    for (int k : kappa) map.mapping.emplace_back(k, k % map.modulus);
    map.injective = true;
    return map;
}

double mutual_coherence(const Eigen::MatrixXcd& dictionary) {
    const Eigen::Index cols = dictionary.cols();
    if (cols < 2) throw DictionaryError("mutual_coherence: need at least two columns");

    Eigen::VectorXd norms = dictionary.colwise().norm();
    if ((norms.array() <= 0.0).any())
        throw DictionaryError("mutual_coherence: dictionary has a zero column");

    // Blocked Gram computation keeps memory bounded for wide dictionaries.
    constexpr Eigen::Index kBlock = 512;
    double mu = 0.0;
    for (Eigen::Index i0 = 0; i0 < cols; i0 += kBlock) {
        const Eigen::Index iw = std::min(kBlock, cols - i0);
        const Eigen::MatrixXcd gram =
            dictionary.middleCols(i0, iw).adjoint() * dictionary.rightCols(cols - i0);
        for (Eigen::Index i = 0; i < iw; ++i) {
            for (Eigen::Index j = i + 1; j < gram.cols(); ++j) {
                const double corr =
                    std::abs(gram(i, j)) / (norms[i0 + i] * norms[i0 + j]);
                mu = std::max(mu, corr);
            }
        }
    }
    return mu;
}

double range_dictionary_coherence(const std::vector<int>& kappa, int range_bins) {
    if (kappa.empty()) throw DictionaryError("range_dictionary_coherence: empty coefficient set");
    if (range_bins < 2) throw DictionaryError("range_dictionary_coherence: need at least two bins");
    const double k_size = static_cast<double>(kappa.size());
    double mu = 0.0;
    for (int d = 1; d < range_bins; ++d) {
        std::complex<double> acc{0.0, 0.0};
        const double base = -2.0 * kPi * d / static_cast<double>(range_bins);
        for (int k : kappa) acc += std::polar(1.0, base * k);
        mu = std::max(mu, std::abs(acc) / k_size);
    }
    return mu;
}

}  // namespace subnyq
