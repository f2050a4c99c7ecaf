#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "multifrac/comb_measure.hpp"

namespace multifrac {

enum class WaveletKind { gaussian_d1, gaussian_d2, compact_bump_d1, custom };

/// Parses "gaussian_d1", "gaussian_d2" or "compact_bump_d1".
WaveletKind parse_wavelet_kind(const std::string &name);
std::string to_string(WaveletKind kind);

/// A wavelet psi together with its antiderivative phi (phi' = psi, phi -> 0 at infinity).
///
/// Naming: `phi` here is the wavelet antiderivative; the Riemann series lives in
/// riemann.hpp as riemann_phi.
class Wavelet
{
public:
    using Fn = std::function<double(double)>;

    static Wavelet make(WaveletKind kind);

    /// A user-supplied pair; `beta` is the declared decay exponent of psi
    /// (infinity for super-polynomial decay), `moments` the vanishing-moment count.
    static Wavelet custom(std::string name, Fn psi, Fn phi, double c1, double beta, int moments, bool compact);

    double psi(double x) const
    {
        switch (kind_) {
        case WaveletKind::gaussian_d1: return -x * std::exp(-0.5 * x * x);
        case WaveletKind::gaussian_d2: return (x * x - 1.0) * std::exp(-0.5 * x * x);
        case WaveletKind::compact_bump_d1: return bump_derivative(x);
        case WaveletKind::custom: break;
        }
        return psi_fn_(x);
    }

    double phi(double x) const
    {
        switch (kind_) {
        case WaveletKind::gaussian_d1: return std::exp(-0.5 * x * x);
        case WaveletKind::gaussian_d2: return -x * std::exp(-0.5 * x * x);
        case WaveletKind::compact_bump_d1: return bump(x);
        case WaveletKind::custom: break;
        }
        return phi_fn_(x);
    }

    WaveletKind kind() const { return kind_; }
    const std::string &name() const { return name_; }
    /// Effective half-width.
    double c1() const { return c1_; }
    double beta() const { return beta_; }
    int moments() const { return moments_; }
    bool compact() const { return compact_; }
    /// |phi(x)| < 1e-15 for |x| beyond this radius (c1 for compact wavelets).
    double phi_cutoff() const { return cutoff_; }
    /// Integral of phi over the line; the mean level a uniform density of atoms produces.
    double phi_integral() const { return phi_integral_; }
    /// Default c0 = 0.5 (2 c1)^{-1/2}.
    double default_c0() const { return 0.5 / std::sqrt(2.0 * c1_); }

private:
    Wavelet() = default;

    double bump(double x) const
    {
        const double u = x / c1_;
        if (std::abs(u) >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - u * u));
    }

    double bump_derivative(double x) const
    {
        const double u = x / c1_;
        if (std::abs(u) >= 1.0) return 0.0;
        const double v = 1.0 - u * u;
        return bump(x) * (-2.0 * u / (c1_ * v * v));
    }

    void compute_cutoff();

    WaveletKind kind_ = WaveletKind::custom;
    std::string name_;
    Fn psi_fn_;
    Fn phi_fn_;
    double c1_ = 1.0;
    double beta_ = INFINITY;
    int moments_ = 1;
    bool compact_ = false;
    double cutoff_ = 1.0;
    double phi_integral_ = 0.0;
};

struct ValidationCheck
{
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
};

struct ValidationReport
{
    std::vector<ValidationCheck> checks;
    /// Fitted constant C in |psi(x)| <= C |x|^{-beta} beyond c1 (0 when beta is infinite).
    double decay_constant = 0.0;

    bool passed() const;
    const ValidationCheck *find(const std::string &name) const;
};

/// Numerical admissibility checks for a given s: vanishing mean, tail decay
/// beta > 1 + s, phi' = psi, and concentration of |phi|^p inside [-c1, c1] for each p.
/// Never throws for inadmissible wavelets; the report says which check failed.
ValidationReport validate_wavelet(const Wavelet &w, double s, std::span<const double> p_values = {});

/// Values of a transform on the midpoint grid x_i = (i + 1/2) / size of [0, 1)
/// (or on the sample grid of the input signal for transform_signal).
struct SampledTransform
{
    std::int64_t scale = 0;
    std::vector<double> grid;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

inline constexpr int kDefaultOversample = 16;
inline constexpr int kMinOversample = 4;

/// Grid size scale * ceil(oversample / (2 c1)): at least `oversample` points per
/// interval of length 2 c1 / scale, and proportional to the scale so grids nest.
std::int64_t transform_grid_size(std::int64_t scale, int oversample, double c1);

/// sum over atoms and their integer translates of weight * phi(N (x - location)),
/// translates dropped once |phi| < 1e-15. The measure must tile one period.
/// Throws for scale < 4, an empty measure, or oversample below kMinOversample.
SampledTransform transform_measure(const RationalMeasure &measure, const Wavelet &w, std::int64_t scale,
                                   int oversample = kDefaultOversample);

/// Periodic discrete convolution (psi_N * f)(x_i) = (1/L) sum_j N psi(N (x_i - x_j)) f_j for
/// samples f_j at x_j = j / L. Requires L >= 8 N.
SampledTransform transform_signal(std::span<const double> samples, const Wavelet &w, std::int64_t scale);

/// Sup over a grid of I = [x0 - c1/N, x0 + c1/N], x0 = p0/q0, of the sum over atoms outside
/// 2I of weight * phi(N (x - p/q)). Requires q0 <= c0 sqrt(N).
double tail_error(const RationalMeasure &measure, const Wavelet &w, const Fraction &base, std::int64_t scale,
                  double c0, int grid_points = 65);

/// The measure restricted to the neighbourhood of `base` that can reach I within the
/// phi cutoff, with denominators up to qmax.
RationalMeasure tail_window_measure(const CombParams &params, const Wavelet &w, const Fraction &base,
                                    std::int64_t scale, std::int64_t qmax);

void write_transform_csv(std::ostream &out, const SampledTransform &t);
void write_transform_binary(std::ostream &out, const SampledTransform &t);

} // namespace multifrac
