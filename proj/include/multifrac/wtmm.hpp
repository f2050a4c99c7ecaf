#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "multifrac/scaling.hpp"
#include "multifrac/wavelet.hpp"

namespace multifrac {

/// count scales a_k = a_min (a_max / a_min)^{k / (count - 1)}, in samples.
std::vector<double> geometric_scales(double a_min, double a_max, int count);

struct CwtResult
{
    std::vector<double> scales;
    std::vector<std::vector<double>> coeffs;  // coeffs[k][b], scale k, position b
};

/// W(a, b) = sum_j x_j (1/a) psi((b - j) / a), periodic in b. Scales must lie in
/// [2, length / 8] and increase.
CwtResult cwt(std::span<const double> signal, const Wavelet &w, std::span<const double> scales);

struct MaximaPoint
{
    int scale = 0;
    std::int64_t position = 0;
    double modulus = 0.0;
};

struct MaximaLine
{
    std::vector<MaximaPoint> points;  // consecutive scales, fine to coarse

    int first_scale() const { return points.front().scale; }
    int last_scale() const { return points.back().scale; }
    std::int64_t root() const { return points.front().position; }
};

struct ChainOptions
{
    /// Keep lines reaching at least this fraction of the scale range (2/3: the coarsest third).
    double min_reach = 2.0 / 3.0;
    /// Maxima below this fraction of max |signal| are numerical noise.
    double noise_floor = 1e-10;
};

/// Local maxima of |W| in position at each scale, chained fine to coarse. A maximum at
/// scale k + 1 continues the nearest line within one coarse sample, ceil(a_{k+1}) + 1; when two
/// lines claim it the stronger continues. Unclaimed maxima start new lines.
std::vector<MaximaLine> find_maxima_lines(const CwtResult &cwt, double signal_scale, const ChainOptions &options = {});

/// Z(p, a_k) = sum over lines present at scale k of (sup of the modulus along the line
/// up to scale k)^p. Lines whose sup is below 1e-12 are skipped for p < 0.
std::vector<std::vector<double>> partition_function(std::span<const MaximaLine> lines, std::span<const double> p_grid,
                                                    std::size_t n_scales);

/// tau(p) = slope of log Z against log a over the middle two-thirds of the scales.
std::vector<double> regress_tau(const std::vector<std::vector<double>> &Z, std::span<const double> scales);

/// Slope of log modulus against log scale along one line over the middle two-thirds of the scales.
double line_exponent(const MaximaLine &line, std::span<const double> scales);

struct WtmmConfig
{
    int J = 13;
    int n_scales = 32;
    double a_min = 2.0;
    double a_max = 0.0;  // 0: length / 8
    std::vector<double> p_grid;  // empty: -5, -4.75, ..., 5
    double h_min = 0.0;
    double h_max = 2.0;
    int h_points = 201;
    WaveletKind wavelet = WaveletKind::gaussian_d1;
    /// Removed as a linear trend so the periodic extension has no jump.
    double period_increment = 0.0;
    /// Every line enters the partition function; the reach filter is for isolating singularities.
    ChainOptions chain{.min_reach = 0.0};

    /// Throws std::invalid_argument for p outside [-5, 5], h outside [0, 2] and similar.
    void validate() const;
    std::vector<double> effective_p_grid() const;
};

struct WtmmResult
{
    std::vector<double> scales;
    std::vector<double> p_grid;
    std::vector<double> tau;
    std::vector<double> h_of_p;  // d tau / d p
    std::vector<double> D_of_p;  // p h - tau
    SpectrumCurve curve;         // min over p of p h - tau(p) on the h grid
    std::size_t line_count = 0;
    double support_min = 0.0;    // h at the largest p
    double support_max = 0.0;    // h at the smallest p
    double peak_D = 0.0;
    double peak_h = 0.0;
};

/// cwt, chaining, partition function, regression and Legendre transform.
/// Throws std::runtime_error when no maxima line survives.
WtmmResult wtmm_spectrum(std::span<const double> signal, const WtmmConfig &config);

/// Mean |D(h) - theory(h)| over the grid points where theory is finite; NaN if none.
double mean_abs_deviation(const SpectrumCurve &curve, const std::function<double(double)> &theory);

/// Periodic cusp |sin(pi (x - x0))|^h0 at x = j / 2^J.
std::vector<double> cusp_signal(int J, double h0, double x0 = 0.5);
/// sum_{k < J} 2^{-k h0} cos(2 pi 2^k x): uniform Hoelder exponent h0.
std::vector<double> weierstrass_signal(int J, double h0);

/// Columns p,tau,h,D.
void write_tau_csv(std::ostream &out, const WtmmResult &result);

} // namespace multifrac
