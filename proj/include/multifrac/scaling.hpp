#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "multifrac/comb_measure.hpp"
#include "multifrac/wavelet.hpp"

namespace multifrac {

/// (mean of |v|^p)^{1/p} over the samples, i.e. the composite midpoint rule on a
/// uniform grid of [0, 1]. p = infinity gives the sup norm. Throws for p <= 0.
double lp_norm(std::span<const double> values, double p, double offset = 0.0);
double lp_norm(const SampledTransform &t, double p, double offset = 0.0);

/// Level that the atoms beyond the truncation would add at scale N if spread
/// uniformly: (total mass - truncated mass) * integral(phi) / N. Zero unless the
/// measure tiles the period.
double truncation_offset(const RationalMeasure &measure, const Wavelet &w, std::int64_t scale);

/// qmax = ceil(4 c0 sqrt(nmax)).
std::int64_t sweep_qmax(double c0, std::int64_t nmax);

struct EtaFit
{
    double eta = 0.0;
    /// RMS deviation of log(norm^p) from the fitted line.
    double residual = 0.0;
};

/// eta = -slope of log(norm^p) against log N, least squares over the last `octaves` points.
EtaFit fit_eta(std::span<const std::int64_t> scales, std::span<const double> norms, double p, int octaves);

struct SweepOptions
{
    int oversample = kDefaultOversample;
    int fit_octaves = 5;
    double residual_threshold = 0.02;
    bool compensate_truncation = true;
};

struct ScalingReport
{
    CombParams params{0.5};
    std::vector<double> p_grid;
    std::vector<std::int64_t> n_grid;
    std::vector<std::vector<double>> norms;  // norms[i][j] for p_grid[i], n_grid[j]
    std::vector<double> eta_fit;
    std::vector<double> residual;
    std::vector<double> eta_theory;
    std::vector<bool> flagged;  // fit residual above the threshold
};

/// Norms of P_N h over the (p, N) grid and per-p slope fits. Requires
/// qmax >= c0 sqrt(max N), at least two scales and fit_octaves >= 2.
ScalingReport norm_sweep(const RationalMeasure &measure, const Wavelet &w, std::span<const double> p_grid,
                         std::span<const std::int64_t> n_grid, double c0, const SweepOptions &options = {});

struct MainError
{
    SampledTransform main;   // atoms with q <= c0 sqrt(N)
    SampledTransform error;  // atoms with q > c0 sqrt(N)
};

MainError split_main_error(const RationalMeasure &measure, const Wavelet &w, std::int64_t scale, double c0,
                           int oversample = kDefaultOversample);

double theoretical_eta(double p, const CombParams &params);

enum class SpectrumKind { H_delta, Riemann };

/// alpha h on [0, 1/alpha] for H_delta, 4h - 2 on [1/2, 3/4] for Riemann; -infinity outside.
double theoretical_spectrum(double h, const CombParams &params, SpectrumKind which);

struct SpectrumCurve
{
    std::vector<double> h;
    std::vector<double> D;
};

/// D(h) = min over the grid of p h - eta(p) + 1, unclipped.
SpectrumCurve legendre_transform(std::span<const double> p_grid, std::span<const double> eta,
                                 std::span<const double> h_grid);

/// Columns p,N,norm,eta_fit,eta_theory,residual.
void write_scaling_csv(std::ostream &out, const ScalingReport &report);
/// Columns h,D.
void write_spectrum_csv(std::ostream &out, const SpectrumCurve &curve);

} // namespace multifrac
