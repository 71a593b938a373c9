#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace subnyq {

/// Complex DFT, forward sign convention X[k] = sum_n x[n] e^{-j2pi nk/N}.
/// Power-of-two lengths run a radix-2 transform in place; every other length
/// goes through Bluestein's chirp algorithm on a padded power-of-two grid, so
/// arbitrary pulse counts (e.g. P = 10) are supported.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::complex<double>* data) const;
    void inverse(std::complex<double>* data) const;

private:
    std::size_t n_ = 0;
    // Bluestein state, empty when n_ is a power of two.
    std::size_t conv_n_ = 0;
    std::vector<std::complex<double>> chirp_;      // e^{-j pi k^2 / n}
    std::vector<std::complex<double>> chirp_fft_;  // FFT of the padded conjugate chirp
};

/// One-shot helpers for callers without a plan to reuse.
void fft_forward(std::vector<std::complex<double>>& x);
void fft_inverse(std::vector<std::complex<double>>& x);

}  // namespace subnyq
