#include "multifrac/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <stdexcept>

namespace multifrac {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex &planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwBuffers
{
    double *real = nullptr;
    fftw_complex *spec = nullptr;

    explicit FftwBuffers(std::size_t n)
    {
        real = fftw_alloc_real(n);
        spec = fftw_alloc_complex(n / 2 + 1);
        if (!real || !spec) throw std::bad_alloc();
    }
    ~FftwBuffers()
    {
        fftw_free(real);
        fftw_free(spec);
    }
    FftwBuffers(const FftwBuffers &) = delete;
    FftwBuffers &operator=(const FftwBuffers &) = delete;
};

} // namespace

CircularConvolver::CircularConvolver(std::span<const double> signal) : n_(signal.size())
{
    if (n_ < 2) throw std::invalid_argument("CircularConvolver: signal needs at least two samples");
    FftwBuffers buf(n_);
    {
        std::lock_guard lock(planner_mutex());
        const int n = static_cast<int>(n_);
        forward_ = fftw_plan_dft_r2c_1d(n, buf.real, buf.spec, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_c2r_1d(n, buf.spec, buf.real, FFTW_ESTIMATE);
    }
    std::copy(signal.begin(), signal.end(), buf.real);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), buf.real, buf.spec);
    signal_hat_.resize(n_ / 2 + 1);
    for (std::size_t k = 0; k < signal_hat_.size(); ++k) signal_hat_[k] = {buf.spec[k][0], buf.spec[k][1]};
}

CircularConvolver::~CircularConvolver()
{
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

std::vector<double> CircularConvolver::convolve(std::span<const double> kernel) const
{
    if (kernel.size() != n_) throw std::invalid_argument("CircularConvolver: kernel length mismatch");
    FftwBuffers buf(n_);
    std::copy(kernel.begin(), kernel.end(), buf.real);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), buf.real, buf.spec);
    for (std::size_t k = 0; k < signal_hat_.size(); ++k) {
        const std::complex<double> prod = std::complex<double>(buf.spec[k][0], buf.spec[k][1]) * signal_hat_[k];
        buf.spec[k][0] = prod.real();
        buf.spec[k][1] = prod.imag();
    }
    fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_), buf.spec, buf.real);
    std::vector<double> out(buf.real, buf.real + n_);
    const double inv = 1.0 / static_cast<double>(n_);
    for (double &v : out) v *= inv;
    return out;
}

} // namespace multifrac
