#include "subnyq/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace subnyq {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place radix-2 transform; sign = -1 forward, +1 inverse (unscaled).
void transform_pow2(std::complex<double>* a, std::size_t n, int sign) {
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double base = sign * 2.0 * kPi / static_cast<double>(len);
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = std::polar(1.0, base * static_cast<double>(k));
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("FftPlan: length must be positive");
    if (is_pow2(n)) return;

    conv_n_ = next_pow2(2 * n - 1);
    chirp_.resize(n);
    chirp_fft_.assign(conv_n_, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        const double angle = kPi * static_cast<double>(k) * static_cast<double>(k) / static_cast<double>(n);
        chirp_[k] = std::polar(1.0, -angle);
        const std::complex<double> b = std::conj(chirp_[k]);
        chirp_fft_[k] = b;
        if (k != 0) chirp_fft_[conv_n_ - k] = b;
    }
    transform_pow2(chirp_fft_.data(), conv_n_, -1);
}

void FftPlan::forward(std::complex<double>* data) const {
    if (conv_n_ == 0) {
        transform_pow2(data, n_, -1);
        return;
    }
    std::vector<std::complex<double>> work(conv_n_, {0.0, 0.0});
    for (std::size_t k = 0; k < n_; ++k) work[k] = data[k] * chirp_[k];
    transform_pow2(work.data(), conv_n_, -1);
    for (std::size_t k = 0; k < conv_n_; ++k) work[k] *= chirp_fft_[k];
    transform_pow2(work.data(), conv_n_, +1);
    const double scale = 1.0 / static_cast<double>(conv_n_);
    for (std::size_t k = 0; k < n_; ++k) data[k] = work[k] * chirp_[k] * scale;
}

void FftPlan::inverse(std::complex<double>* data) const {
    if (conv_n_ == 0) {
        transform_pow2(data, n_, +1);
        const double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t k = 0; k < n_; ++k) data[k] *= scale;
        return;
    }
    for (std::size_t k = 0; k < n_; ++k) data[k] = std::conj(data[k]);
    forward(data);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t k = 0; k < n_; ++k) data[k] = std::conj(data[k]) * scale;
}

void fft_forward(std::vector<std::complex<double>>& x) { FftPlan(x.size()).forward(x.data()); }

void fft_inverse(std::vector<std::complex<double>>& x) { FftPlan(x.size()).inverse(x.data()); }

}  // namespace subnyq
