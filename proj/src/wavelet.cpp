#include "multifrac/wavelet.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "multifrac/convolution.hpp"
#include "multifrac/io.hpp"

namespace multifrac {

namespace {

constexpr double kPhiCutoffLevel = 1e-15;

double integrate(const std::function<double(double)> &f, double a, double b)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

} // namespace

WaveletKind parse_wavelet_kind(const std::string &name)
{
    if (name == "gaussian_d1") return WaveletKind::gaussian_d1;
    if (name == "gaussian_d2") return WaveletKind::gaussian_d2;
    if (name == "compact_bump_d1") return WaveletKind::compact_bump_d1;
    throw std::invalid_argument("unknown wavelet kind '" + name + "'");
}

std::string to_string(WaveletKind kind)
{
    switch (kind) {
    case WaveletKind::gaussian_d1: return "gaussian_d1";
    case WaveletKind::gaussian_d2: return "gaussian_d2";
    case WaveletKind::compact_bump_d1: return "compact_bump_d1";
    case WaveletKind::custom: return "custom";
    }
    return "custom";
}

Wavelet Wavelet::make(WaveletKind kind)
{
    Wavelet w;
    w.kind_ = kind;
    w.name_ = to_string(kind);
    w.beta_ = std::numeric_limits<double>::infinity();
    switch (kind) {
    case WaveletKind::gaussian_d1:
        // 99.9% of the mass of exp(-x^2/2): erf(c1 / sqrt 2) = 0.999
        w.c1_ = 3.2905267314918945;
        w.moments_ = 1;
        break;
    case WaveletKind::gaussian_d2:
        // 99.9% of the mass of |x| exp(-x^2/2): exp(-c1^2/2) = 1e-3
        w.c1_ = std::sqrt(2.0 * std::log(1000.0));
        w.moments_ = 2;
        break;
    case WaveletKind::compact_bump_d1:
        w.c1_ = 1.0;
        w.moments_ = 1;
        w.compact_ = true;
        break;
    case WaveletKind::custom: throw std::invalid_argument("Wavelet::make: use Wavelet::custom");
    }
    w.compute_cutoff();
    return w;
}

Wavelet Wavelet::custom(std::string name, Fn psi, Fn phi, double c1, double beta, int moments, bool compact)
{
    if (!psi || !phi) throw std::invalid_argument("Wavelet::custom: psi and phi are required");
    if (!(c1 > 0.0)) throw std::invalid_argument("Wavelet::custom: c1 must be positive");
    Wavelet w;
    w.kind_ = WaveletKind::custom;
    w.name_ = std::move(name);
    w.psi_fn_ = std::move(psi);
    w.phi_fn_ = std::move(phi);
    w.c1_ = c1;
    w.beta_ = beta;
    w.moments_ = moments;
    w.compact_ = compact;
    w.compute_cutoff();
    return w;
}

void Wavelet::compute_cutoff()
{
    if (compact_) {
        cutoff_ = c1_;
        phi_integral_ = integrate([this](double x) { return phi(x); }, -c1_, c1_);
        return;
    }
    // Walk outward until |phi| stays below the level on both sides; capped for slowly decaying tails.
    constexpr double kMaxRadius = 1e4;
    double r = c1_;
    const double step = c1_ / 64.0;
    while (r < kMaxRadius && (std::abs(phi(r)) >= kPhiCutoffLevel || std::abs(phi(-r)) >= kPhiCutoffLevel))
        r += step;
    cutoff_ = r;
    const double inf = std::numeric_limits<double>::infinity();
    phi_integral_ = integrate([this](double x) { return phi(x); }, -inf, inf);
}

bool ValidationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck &c) { return c.passed; });
}

const ValidationCheck *ValidationReport::find(const std::string &name) const
{
    for (const ValidationCheck &c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

ValidationReport validate_wavelet(const Wavelet &w, double s, std::span<const double> p_values)
{
    ValidationReport report;
    const double inf = std::numeric_limits<double>::infinity();
    const double lo = w.compact() ? -w.c1() : -inf;
    const double hi = w.compact() ? w.c1() : inf;

    const double mean = integrate([&](double x) { return w.psi(x); }, lo, hi);
    report.checks.push_back({"vanishing_mean", std::isfinite(mean) && std::abs(mean) <= 1e-8, std::abs(mean), 1e-8});

    // Tail exponent from a log-log fit of |psi| on x = c1 2^k; an underflowing tail is super-polynomial.
    double beta = inf;
    if (!w.compact()) {
        std::vector<double> lx, ly;
        bool underflow = false;
        for (int k = 2; k <= 8; ++k) {
            const double x = w.c1() * std::ldexp(1.0, k);
            const double v = std::max(std::abs(w.psi(x)), std::abs(w.psi(-x)));
            if (!(v > 1e-300)) {
                underflow = true;
                break;
            }
            lx.push_back(std::log(x));
            ly.push_back(std::log(v));
        }
        if (!underflow) {
            const double n = static_cast<double>(lx.size());
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t i = 0; i < lx.size(); ++i) {
                sx += lx[i];
                sy += ly[i];
                sxx += lx[i] * lx[i];
                sxy += lx[i] * ly[i];
            }
            beta = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
            for (std::size_t i = 0; i < lx.size(); ++i)
                report.decay_constant = std::max(report.decay_constant, std::exp(ly[i] + beta * lx[i]));
        }
    }
    report.checks.push_back({"decay", beta > 1.0 + s, beta, 1.0 + s});

    constexpr double h = 1e-5;
    double residual = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = -4.0 * w.c1() + 8.0 * w.c1() * i / 400.0;
        const double fd = (w.phi(x + h) - w.phi(x - h)) / (2.0 * h);
        residual = std::max(residual, std::abs(fd - w.psi(x)));
    }
    report.checks.push_back({"antiderivative", residual <= 1e-6, residual, 1e-6});

    const std::vector<double> default_p{1.0};
    const auto ps = p_values.empty() ? std::span<const double>(default_p) : p_values;
    for (double p : ps) {
        const auto absp = [&](double x) { return std::pow(std::abs(w.phi(x)), p); };
        const double inner = integrate(absp, -w.c1(), w.c1());
        const double total = integrate(absp, lo, hi);
        const double ratio = (std::isfinite(total) && total > 0.0) ? inner / total : 0.0;
        report.checks.push_back({"concentration_p=" + format_double(p), ratio >= 0.5, ratio, 0.5});
    }
    return report;
}

std::int64_t transform_grid_size(std::int64_t scale, int oversample, double c1)
{
    const auto per_unit = static_cast<std::int64_t>(std::ceil(static_cast<double>(oversample) / (2.0 * c1)));
    return scale * std::max<std::int64_t>(per_unit, 1);
}

SampledTransform transform_measure(const RationalMeasure &measure, const Wavelet &w, std::int64_t scale,
                                   int oversample)
{
    if (scale < 4) throw std::invalid_argument("transform_measure: scale must be >= 4");
    if (measure.empty()) throw std::invalid_argument("transform_measure: empty measure");
    if (oversample < kMinOversample)
        throw std::invalid_argument("transform_measure: oversample below " + std::to_string(kMinOversample) +
                                    " does not resolve the atom scale");

    const std::int64_t size = transform_grid_size(scale, oversample, w.c1());
    const double g = static_cast<double>(size);
    const double n = static_cast<double>(scale);
    const double reach = w.phi_cutoff() / n;

    SampledTransform out;
    out.scale = scale;
    out.grid.resize(static_cast<std::size_t>(size));
    out.values.assign(static_cast<std::size_t>(size), 0.0);
    for (std::int64_t i = 0; i < size; ++i) out.grid[static_cast<std::size_t>(i)] = (static_cast<double>(i) + 0.5) / g;

    const auto atoms = measure.atoms();
    std::vector<double> loc(atoms.size());
    for (std::size_t j = 0; j < atoms.size(); ++j) loc[j] = atoms[j].location.value();
    const double loc_min = loc.front();
    const double loc_max = loc.back();

    constexpr std::int64_t kChunk = 4096;
    const std::int64_t chunks = (size + kChunk - 1) / kChunk;

    // Each grid point sums its contributions in (translate, atom) order whatever the chunking.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < chunks; ++c) {
        const std::int64_t i0 = c * kChunk;
        const std::int64_t i1 = std::min(size, i0 + kChunk);
        const double x_lo = out.grid[static_cast<std::size_t>(i0)] - reach;
        const double x_hi = out.grid[static_cast<std::size_t>(i1 - 1)] + reach;
        const auto k_min = static_cast<std::int64_t>(std::floor(x_lo - loc_max));
        const auto k_max = static_cast<std::int64_t>(std::ceil(x_hi - loc_min));
        for (std::int64_t k = k_min; k <= k_max; ++k) {
            const double shift = static_cast<double>(k);
            const auto first = std::lower_bound(loc.begin(), loc.end(), x_lo - shift);
            const auto last = std::upper_bound(loc.begin(), loc.end(), x_hi - shift);
            for (auto it = first; it < last; ++it) {
                const double y = *it + shift;
                const double weight = atoms[static_cast<std::size_t>(it - loc.begin())].weight;
                const auto j0 = std::max(i0, static_cast<std::int64_t>(std::ceil((y - reach) * g - 0.5)));
                const auto j1 = std::min(i1 - 1, static_cast<std::int64_t>(std::floor((y + reach) * g - 0.5)));
                for (std::int64_t i = j0; i <= j1; ++i) {
                    const auto ui = static_cast<std::size_t>(i);
                    out.values[ui] += weight * w.phi(n * (out.grid[ui] - y));
                }
            }
        }
    }
    return out;
}

SampledTransform transform_signal(std::span<const double> samples, const Wavelet &w, std::int64_t scale)
{
    if (scale < 1) throw std::invalid_argument("transform_signal: scale must be >= 1");
    const auto length = static_cast<std::int64_t>(samples.size());
    if (length < 8 * scale)
        throw std::invalid_argument("transform_signal: need at least 8 samples per 1/N, got " +
                                    std::to_string(length) + " for N = " + std::to_string(scale));

    const double l = static_cast<double>(length);
    const double n = static_cast<double>(scale);
    const double reach = 1.25 * w.phi_cutoff() / n;
    std::vector<double> kernel(samples.size(), 0.0);
    for (std::int64_t m = 0; m < length; ++m) {
        const double d = static_cast<double>(m) / l;
        double v = 0.0;
        const auto k0 = static_cast<std::int64_t>(std::ceil(d - reach));
        const auto k1 = static_cast<std::int64_t>(std::floor(d + reach));
        for (std::int64_t k = k0; k <= k1; ++k) v += w.psi(n * (d - static_cast<double>(k)));
        kernel[static_cast<std::size_t>(m)] = v * n / l;
    }

    SampledTransform out;
    out.scale = scale;
    out.grid.resize(samples.size());
    for (std::int64_t j = 0; j < length; ++j) out.grid[static_cast<std::size_t>(j)] = static_cast<double>(j) / l;
    CircularConvolver conv(samples);
    out.values = conv.convolve(kernel);
    return out;
}

double tail_error(const RationalMeasure &measure, const Wavelet &w, const Fraction &base, std::int64_t scale,
                  double c0, int grid_points)
{
    const double n = static_cast<double>(scale);
    if (static_cast<double>(base.q) > c0 * std::sqrt(n))
        throw std::invalid_argument("tail_error: base denominator exceeds c0 sqrt(N)");
    if (grid_points < 2) throw std::invalid_argument("tail_error: need at least two grid points");
    if (w.compact()) return 0.0;

    const double x0 = base.value();
    const double half = w.c1() / n;
    const double excluded = 2.0 * w.c1() / n;
    const double reach = w.phi_cutoff() / n;
    const bool periodic = measure.window().length() >= 1.0;

    // atoms outside 2I that can reach I, as offsets from x0
    std::vector<std::pair<double, double>> near;
    for (const Atom &a : measure.atoms()) {
        double d = a.location.value() - x0;
        if (periodic) d -= std::round(d);
        if (std::abs(d) <= excluded) continue;
        if (std::abs(d) > half + reach) continue;
        near.emplace_back(d, a.weight);
    }

    double sup = 0.0;
    for (int g = 0; g < grid_points; ++g) {
        const double dx = -half + 2.0 * half * g / (grid_points - 1);
        double sum = 0.0;
        for (const auto &[d, weight] : near) sum += weight * w.phi(n * (dx - d));
        sup = std::max(sup, std::abs(sum));
    }
    return sup;
}

RationalMeasure tail_window_measure(const CombParams &params, const Wavelet &w, const Fraction &base,
                                    std::int64_t scale, std::int64_t qmax)
{
    const double radius = (w.c1() + w.phi_cutoff()) / static_cast<double>(scale);
    const double x0 = base.value();
    return build_measure(params, qmax, Window::closed(x0 - radius, x0 + radius));
}

void write_transform_csv(std::ostream &out, const SampledTransform &t)
{
    write_xy_csv(out, "x", "value", t.grid, t.values);
}

void write_transform_binary(std::ostream &out, const SampledTransform &t)
{
    write_binary_dump(out, static_cast<std::uint32_t>(t.scale), t.values);
}

} // namespace multifrac
