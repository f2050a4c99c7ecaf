#include "multifrac/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "multifrac/io.hpp"

namespace multifrac {

double lp_norm(std::span<const double> values, double p, double offset)
{
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm: p must be positive");
    if (values.empty()) throw std::invalid_argument("lp_norm: no samples");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v + offset));
        return m;
    }
    double sum = 0.0;
    if (p == 1.0)
        for (double v : values) sum += std::abs(v + offset);
    else if (p == 2.0)
        for (double v : values) sum += (v + offset) * (v + offset);
    else
        for (double v : values) sum += std::pow(std::abs(v + offset), p);
    return std::pow(sum / static_cast<double>(values.size()), 1.0 / p);
}

double lp_norm(const SampledTransform &t, double p, double offset)
{
    return lp_norm(t.values, p, offset);
}

double truncation_offset(const RationalMeasure &measure, const Wavelet &w, std::int64_t scale)
{
    const Window &win = measure.window();
    if (win.length() != 1.0 || !(win.lo_closed != win.hi_closed)) return 0.0;
    return (total_mass(measure.params()) - measure.mass()) * w.phi_integral() / static_cast<double>(scale);
}

std::int64_t sweep_qmax(double c0, std::int64_t nmax)
{
    return static_cast<std::int64_t>(std::ceil(4.0 * c0 * std::sqrt(static_cast<double>(nmax))));
}

EtaFit fit_eta(std::span<const std::int64_t> scales, std::span<const double> norms, double p, int octaves)
{
    if (scales.size() != norms.size()) throw std::invalid_argument("fit_eta: length mismatch");
    if (octaves < 2 || scales.size() < 2) throw std::invalid_argument("fit_eta: need at least two scales");
    const std::size_t n = scales.size();
    const std::size_t first = n > static_cast<std::size_t>(octaves) ? n - static_cast<std::size_t>(octaves) : 0;
    const double count = static_cast<double>(n - first);

    const auto y_of = [&](std::size_t i) { return std::isinf(p) ? std::log(norms[i]) : p * std::log(norms[i]); };
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = first; i < n; ++i) {
        const double x = std::log(static_cast<double>(scales[i]));
        const double y = y_of(i);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / count;
    double ss = 0.0;
    for (std::size_t i = first; i < n; ++i) {
        const double r = y_of(i) - (intercept + slope * std::log(static_cast<double>(scales[i])));
        ss += r * r;
    }
    return {-slope, std::sqrt(ss / count)};
}

ScalingReport norm_sweep(const RationalMeasure &measure, const Wavelet &w, std::span<const double> p_grid,
                         std::span<const std::int64_t> n_grid, double c0, const SweepOptions &options)
{
    if (n_grid.size() < 2) throw std::invalid_argument("norm_sweep: need at least two scales to fit a slope");
    if (p_grid.empty()) throw std::invalid_argument("norm_sweep: empty p grid");
    for (double p : p_grid)
        if (!(p > 0.0)) throw std::invalid_argument("norm_sweep: p must be positive");
    const std::int64_t nmax = *std::max_element(n_grid.begin(), n_grid.end());
    if (static_cast<double>(measure.qmax()) < c0 * std::sqrt(static_cast<double>(nmax)))
        throw std::invalid_argument("norm_sweep: qmax below c0 sqrt(max N) truncates the main term");

    ScalingReport report;
    report.params = measure.params();
    report.p_grid.assign(p_grid.begin(), p_grid.end());
    report.n_grid.assign(n_grid.begin(), n_grid.end());
    report.norms.assign(p_grid.size(), std::vector<double>(n_grid.size(), 0.0));

    for (std::size_t j = 0; j < n_grid.size(); ++j) {
        const SampledTransform t = transform_measure(measure, w, n_grid[j], options.oversample);
        const double offset = options.compensate_truncation ? truncation_offset(measure, w, n_grid[j]) : 0.0;
#pragma omp parallel for schedule(static)
        for (std::size_t i = 0; i < p_grid.size(); ++i) report.norms[i][j] = lp_norm(t, p_grid[i], offset);
    }

    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        const EtaFit fit = fit_eta(n_grid, report.norms[i], p_grid[i], options.fit_octaves);
        report.eta_fit.push_back(fit.eta);
        report.residual.push_back(fit.residual);
        report.eta_theory.push_back(theoretical_eta(p_grid[i], report.params));
        report.flagged.push_back(fit.residual > options.residual_threshold);
    }
    return report;
}

MainError split_main_error(const RationalMeasure &measure, const Wavelet &w, std::int64_t scale, double c0,
                           int oversample)
{
    const double cut = c0 * std::sqrt(static_cast<double>(scale));
    const auto is_main = [cut](const Atom &a) { return static_cast<double>(a.location.q) <= cut; };
    const RationalMeasure main_part = measure.filter(is_main);
    const RationalMeasure error_part = measure.filter([&](const Atom &a) { return !is_main(a); });

    // An empty part still needs the grid, so fall back to zeros of the right shape.
    const auto transform_or_zero = [&](const RationalMeasure &m, const RationalMeasure &other) {
        if (!m.empty()) return transform_measure(m, w, scale, oversample);
        SampledTransform z = transform_measure(other, w, scale, oversample);
        std::fill(z.values.begin(), z.values.end(), 0.0);
        return z;
    };
    if (main_part.empty() && error_part.empty()) throw std::invalid_argument("split_main_error: empty measure");
    return {transform_or_zero(main_part, error_part), transform_or_zero(error_part, main_part)};
}

double theoretical_eta(double p, const CombParams &params)
{
    if (!(p > 0.0)) throw std::invalid_argument("theoretical_eta: p must be positive");
    return std::min(params.s() * p / 2.0, 1.0);
}

double theoretical_spectrum(double h, const CombParams &params, SpectrumKind which)
{
    constexpr double minus_inf = -std::numeric_limits<double>::infinity();
    switch (which) {
    case SpectrumKind::H_delta:
        return (h >= 0.0 && h <= 1.0 / params.alpha()) ? params.alpha() * h : minus_inf;
    case SpectrumKind::Riemann: return (h >= 0.5 && h <= 0.75) ? 4.0 * h - 2.0 : minus_inf;
    }
    return minus_inf;
}

SpectrumCurve legendre_transform(std::span<const double> p_grid, std::span<const double> eta,
                                 std::span<const double> h_grid)
{
    if (p_grid.size() != eta.size()) throw std::invalid_argument("legendre_transform: p and eta lengths differ");
    if (p_grid.empty()) throw std::invalid_argument("legendre_transform: empty p grid");
    SpectrumCurve curve;
    curve.h.assign(h_grid.begin(), h_grid.end());
    curve.D.reserve(h_grid.size());
    for (double h : h_grid) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < p_grid.size(); ++k) best = std::min(best, p_grid[k] * h - eta[k] + 1.0);
        curve.D.push_back(best);
    }
    return curve;
}

void write_scaling_csv(std::ostream &out, const ScalingReport &report)
{
    out << "p,N,norm,eta_fit,eta_theory,residual\n";
    for (std::size_t i = 0; i < report.p_grid.size(); ++i)
        for (std::size_t j = 0; j < report.n_grid.size(); ++j)
            out << format_double(report.p_grid[i]) << ',' << report.n_grid[j] << ','
                << format_double(report.norms[i][j]) << ',' << format_double(report.eta_fit[i]) << ','
                << format_double(report.eta_theory[i]) << ',' << format_double(report.residual[i]) << '\n';
}

void write_spectrum_csv(std::ostream &out, const SpectrumCurve &curve)
{
    write_xy_csv(out, "h", "D", curve.h, curve.D);
}

} // namespace multifrac
