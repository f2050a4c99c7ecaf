#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace multifrac {

/// FFT-based circular convolution of a fixed signal against many kernels.
/// convolve() is safe to call concurrently on one instance.
class CircularConvolver
{
public:
    explicit CircularConvolver(std::span<const double> signal);
    ~CircularConvolver();

    CircularConvolver(const CircularConvolver &) = delete;
    CircularConvolver &operator=(const CircularConvolver &) = delete;

    std::size_t size() const { return n_; }

    /// out[i] = sum_j kernel[(i - j) mod n] * signal[j].
    std::vector<double> convolve(std::span<const double> kernel) const;

private:
    std::size_t n_;
    void *forward_ = nullptr;
    void *backward_ = nullptr;
    std::vector<std::complex<double>> signal_hat_;
};

} // namespace multifrac
