#ifndef FRACBRIDGE_FFT_HPP
#define FRACBRIDGE_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace fracbridge {

// Iterative radix-2 DFT (convention X_k = sum_j x_j e^{-2 pi i jk/n}) with
// precomputed twiddles and bit-reversal table, reused across calls of the
// same size. The circulant-embedding sampler only ever needs power-of-two
// sizes, so a general-length transform would be dead weight here.
class Fft {
  public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }

    // In-place transform of n() complex values.
    void forward(std::complex<double>* data) const;

  private:
    std::size_t n_;
    unsigned log2n_;
    std::vector<std::complex<double>> twiddles_;  // e^{-2 pi i k/n}, k < n/2
    std::vector<std::uint32_t> bitrev_;
};

}  // namespace fracbridge

#endif
