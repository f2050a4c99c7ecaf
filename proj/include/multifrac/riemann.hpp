#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "multifrac/comb_measure.hpp"

namespace multifrac {

// Riemann's function is riemann_phi; the wavelet antiderivative is Wavelet::phi.

/// Partial sum of sum_{n >= 1} e^{i pi n^2 t} / (i pi n^2). Error <= 1/(pi n_terms).
std::complex<double> riemann_phi(double t, std::int64_t n_terms);

/// R(t) = (phi(-4 pi t) - 2 pi t + i pi / 6) / (2 pi i), the inverse of
/// phi(t) = 2 pi i R(-t / (4 pi)) - t/2 - i pi/6.
std::complex<double> riemann_R(double t, std::int64_t n_terms);

/// 1 / (pi n_terms).
double riemann_tail_bound(std::int64_t n_terms);

/// riemann_phi at t_j = 2 j / length, j < length, via exact integer phase indices.
std::vector<std::complex<double>> riemann_phi_grid(std::int64_t length, std::int64_t n_terms);

enum class SignalSource { H_delta, Riemann_real, Riemann_imag };

/// "hdelta", "riemann" (real part) or "riemann_imag".
SignalSource parse_signal_source(const std::string &name);

struct SignalOptions
{
    double delta = 0.5;
    std::int64_t n_terms = 100'000;
    std::int64_t qmax = 0;  // 0: default_signal_qmax(J)
};

/// min(16 * 2^{J/2}, 8192): atoms well below the sample spacing, capped for memory.
std::int64_t default_signal_qmax(int J);

/// Length of one period in t: 1 for H_delta, 2 for Riemann's function.
double signal_period(SignalSource source);

/// 2^J samples on one period. H_delta: H(j / L) on the window (0, 1], with the
/// mass beyond qmax added as the linear drift (T - truncated mass) t. Riemann:
/// Re or Im of riemann_phi at t_j = 2 j / L. Throws unless 8 <= J <= 20.
std::vector<double> sample_signal(SignalSource source, int J, const SignalOptions &options = {});

/// Increment of the signal over one period (T for H_delta, 0 for the periodic sources).
double signal_period_increment(SignalSource source, const SignalOptions &options);

/// Columns t,value with t_j = period * j / size.
void write_signal_csv(std::ostream &out, std::span<const double> values, double period);

} // namespace multifrac
