#include "fracbridge/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace fracbridge {

namespace {

bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n) || n < 2) {
        throw std::invalid_argument("Fft: size must be a power of two >= 2");
    }
    log2n_ = 0;
    while ((std::size_t{1} << log2n_) < n) {
        ++log2n_;
    }

    twiddles_.resize(n / 2);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double angle = step * static_cast<double>(k);
        twiddles_[k] = {std::cos(angle), std::sin(angle)};
    }

    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t rev = 0;
        std::size_t x = i;
        for (unsigned b = 0; b < log2n_; ++b) {
            rev = (rev << 1) | static_cast<std::uint32_t>(x & 1);
            x >>= 1;
        }
        bitrev_[i] = rev;
    }
}

void Fft::forward(std::complex<double>* data) const {
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }

    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t stride = n_ / len;
        for (std::size_t block = 0; block < n_; block += len) {
            std::size_t tw = 0;
            for (std::size_t j = 0; j < half; ++j, tw += stride) {
                const std::complex<double> w = twiddles_[tw];
                std::complex<double>& a = data[block + j];
                std::complex<double>& b = data[block + j + half];
                const std::complex<double> u = a;
                const std::complex<double> v = b * w;
                a = u + v;
                b = u - v;
            }
        }
    }
}

}  // namespace fracbridge
