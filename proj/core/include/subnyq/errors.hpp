#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace subnyq {

/// Inconsistent radar parameters, array/plan mismatch, or unsupported mode.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed cognitive spectrum: overlapping or out-of-band intervals, empty
/// coefficient set.
class SpectrumError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two sampled Fourier coefficients fold onto the same index after
/// subsampling. Carries the colliding coefficient pairs.
class AliasCollisionError : public SpectrumError {
public:
    AliasCollisionError(const std::string& msg, std::vector<std::pair<int, int>> pairs)
        : SpectrumError(msg), collisions_(std::move(pairs)) {}
    const std::vector<std::pair<int, int>>& collisions() const { return collisions_; }

private:
    std::vector<std::pair<int, int>> collisions_;
};

/// Dictionary unusable for coherence analysis (zero column, too few columns).
class DictionaryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Random scene constraints could not be satisfied within the redraw budget.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sparse recovery failed: ill-conditioned support system or unusable input.
class RecoveryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too many failed trials or inconsistent experiment configuration.
class ExperimentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace subnyq
