#include "multifrac/wtmm.hpp"

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

constexpr double kNegativePowerFloor = 1e-12;

struct Range
{
    std::size_t first;
    std::size_t last;  // inclusive
};

// middle two-thirds of n scales
Range middle_scales(std::size_t n)
{
    const std::size_t cut = n / 6;
    return {cut, n - 1 - cut};
}

double slope(std::span<const double> x, std::span<const double> y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::int64_t periodic_distance(std::int64_t a, std::int64_t b, std::int64_t length)
{
    const std::int64_t d = std::abs(a - b) % length;
    return std::min(d, length - d);
}

} // namespace

std::vector<double> geometric_scales(double a_min, double a_max, int count)
{
    if (count < 2) throw std::invalid_argument("geometric_scales: need at least two scales");
    if (!(a_min > 0.0) || !(a_max > a_min)) throw std::invalid_argument("geometric_scales: need 0 < a_min < a_max");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        out[static_cast<std::size_t>(k)] = a_min * std::pow(a_max / a_min, static_cast<double>(k) / (count - 1));
    return out;
}

CwtResult cwt(std::span<const double> signal, const Wavelet &w, std::span<const double> scales)
{
    const auto length = static_cast<std::int64_t>(signal.size());
    if (length < 16) throw std::invalid_argument("cwt: signal too short");
    if (scales.empty()) throw std::invalid_argument("cwt: no scales");
    for (std::size_t k = 0; k < scales.size(); ++k) {
        if (scales[k] < 2.0 || scales[k] > static_cast<double>(length) / 8.0)
            throw std::invalid_argument("cwt: scales must lie in [2, length / 8]");
        if (k > 0 && !(scales[k] > scales[k - 1])) throw std::invalid_argument("cwt: scales must increase");
    }

    CwtResult out;
    out.scales.assign(scales.begin(), scales.end());
    out.coeffs.resize(scales.size());
    const CircularConvolver conv(signal);
    const double l = static_cast<double>(length);
    const double radius = 1.25 * w.phi_cutoff();

#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t k = 0; k < scales.size(); ++k) {
        const double a = scales[k];
        std::vector<double> kernel(signal.size(), 0.0);
        for (std::int64_t m = 0; m < length; ++m) {
            const double md = static_cast<double>(m);
            const auto i0 = static_cast<std::int64_t>(std::ceil((md - radius * a) / l));
            const auto i1 = static_cast<std::int64_t>(std::floor((md + radius * a) / l));
            double v = 0.0;
            for (std::int64_t i = i0; i <= i1; ++i) v += w.psi((md - static_cast<double>(i) * l) / a);
            kernel[static_cast<std::size_t>(m)] = v / a;
        }
        out.coeffs[k] = conv.convolve(kernel);
    }
    return out;
}

std::vector<MaximaLine> find_maxima_lines(const CwtResult &cwt, double signal_scale, const ChainOptions &options)
{
    const std::size_t n_scales = cwt.coeffs.size();
    if (n_scales == 0) return {};
    const auto length = static_cast<std::int64_t>(cwt.coeffs.front().size());
    const double floor = options.noise_floor * signal_scale;

    const auto maxima_at = [&](std::size_t k) {
        const std::vector<double> &c = cwt.coeffs[k];
        std::vector<MaximaPoint> found;
        for (std::int64_t b = 0; b < length; ++b) {
            const double m = std::abs(c[static_cast<std::size_t>(b)]);
            const double left = std::abs(c[static_cast<std::size_t>((b + length - 1) % length)]);
            const double right = std::abs(c[static_cast<std::size_t>((b + 1) % length)]);
            if (m > floor && m > left && m >= right) found.push_back({static_cast<int>(k), b, m});
        }
        return found;
    };

    std::vector<MaximaLine> lines;
    std::vector<std::size_t> active;
    for (const MaximaPoint &pt : maxima_at(0)) {
        lines.push_back({{pt}});
        active.push_back(lines.size() - 1);
    }

    for (std::size_t k = 1; k < n_scales; ++k) {
        const std::vector<MaximaPoint> maxima = maxima_at(k);
        const auto window = static_cast<std::int64_t>(std::ceil(cwt.scales[k])) + 1;

        // each active line proposes its nearest maximum within the window
        constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
        std::vector<std::size_t> claim_by(maxima.size(), none);
        for (std::size_t li : active) {
            const MaximaPoint &last = lines[li].points.back();
            auto it = std::lower_bound(maxima.begin(), maxima.end(), last.position,
                                       [](const MaximaPoint &m, std::int64_t pos) { return m.position < pos; });
            std::size_t best = none;
            std::int64_t best_d = window + 1;
            for (int off = -1; off <= 0; ++off) {
                if (maxima.empty()) break;
                const auto base = static_cast<std::int64_t>(it - maxima.begin());
                const auto n = static_cast<std::int64_t>(maxima.size());
                const auto idx = static_cast<std::size_t>(((base + off) % n + n) % n);
                const std::int64_t d = periodic_distance(maxima[idx].position, last.position, length);
                if (d <= window && (d < best_d || (d == best_d && maxima[idx].modulus > maxima[best].modulus))) {
                    best = idx;
                    best_d = d;
                }
            }
            if (best == none) continue;
            const std::size_t rival = claim_by[best];
            if (rival == none || lines[li].points.back().modulus > lines[rival].points.back().modulus)
                claim_by[best] = li;
        }

        std::vector<std::size_t> next;
        for (std::size_t mi = 0; mi < maxima.size(); ++mi) {
            if (claim_by[mi] != none) {
                lines[claim_by[mi]].points.push_back(maxima[mi]);
                next.push_back(claim_by[mi]);
            } else {
                lines.push_back({{maxima[mi]}});
                next.push_back(lines.size() - 1);
            }
        }
        std::sort(next.begin(), next.end());
        active = std::move(next);
    }

    const auto reach = static_cast<int>(std::ceil(options.min_reach * static_cast<double>(n_scales - 1)));
    std::erase_if(lines, [reach](const MaximaLine &l) { return l.last_scale() < reach; });
    return lines;
}

std::vector<std::vector<double>> partition_function(std::span<const MaximaLine> lines, std::span<const double> p_grid,
                                                    std::size_t n_scales)
{
    if (lines.empty()) throw std::invalid_argument("partition_function: no maxima lines");
    std::vector<std::vector<double>> Z(p_grid.size(), std::vector<double>(n_scales, 0.0));
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        const double p = p_grid[i];
        for (const MaximaLine &line : lines) {
            double sup = 0.0;
            for (const MaximaPoint &pt : line.points) {
                sup = std::max(sup, pt.modulus);
                if (p < 0.0 && sup < kNegativePowerFloor) continue;
                Z[i][static_cast<std::size_t>(pt.scale)] += p == 0.0 ? 1.0 : std::pow(sup, p);
            }
        }
    }
    return Z;
}

std::vector<double> regress_tau(const std::vector<std::vector<double>> &Z, std::span<const double> scales)
{
    const Range r = middle_scales(scales.size());
    std::vector<double> tau;
    tau.reserve(Z.size());
    for (const std::vector<double> &row : Z) {
        std::vector<double> x, y;
        for (std::size_t k = r.first; k <= r.last; ++k) {
            if (!(row[k] > 0.0)) continue;
            x.push_back(std::log(scales[k]));
            y.push_back(std::log(row[k]));
        }
        tau.push_back(x.size() >= 2 ? slope(x, y) : std::numeric_limits<double>::quiet_NaN());
    }
    return tau;
}

double line_exponent(const MaximaLine &line, std::span<const double> scales)
{
    const Range r = middle_scales(scales.size());
    std::vector<double> x, y;
    for (const MaximaPoint &pt : line.points) {
        const auto k = static_cast<std::size_t>(pt.scale);
        if (k < r.first || k > r.last) continue;
        x.push_back(std::log(scales[k]));
        y.push_back(std::log(pt.modulus));
    }
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    return slope(x, y);
}

void WtmmConfig::validate() const
{
    if (J < 8 || J > 20) throw std::invalid_argument("wtmm: J must be in [8, 20]");
    if (n_scales < 6) throw std::invalid_argument("wtmm: need at least 6 scales");
    for (double p : effective_p_grid())
        if (p < -5.0 || p > 5.0) throw std::invalid_argument("wtmm: p grid must lie in [-5, 5]");
    if (!(h_min >= 0.0 && h_max <= 2.0 && h_min < h_max)) throw std::invalid_argument("wtmm: h range must lie in [0, 2]");
    if (h_points < 2) throw std::invalid_argument("wtmm: need at least two h points");
}

std::vector<double> WtmmConfig::effective_p_grid() const
{
    if (!p_grid.empty()) return p_grid;
    std::vector<double> grid;
    for (int i = -20; i <= 20; ++i) grid.push_back(0.25 * i);
    return grid;
}

WtmmResult wtmm_spectrum(std::span<const double> signal, const WtmmConfig &config)
{
    config.validate();
    const std::int64_t length = std::int64_t{1} << config.J;
    if (static_cast<std::int64_t>(signal.size()) != length)
        throw std::invalid_argument("wtmm: signal length must be 2^J");

    std::vector<double> x(signal.begin(), signal.end());
    double scale = 0.0;
    for (std::int64_t j = 0; j < length; ++j) {
        x[static_cast<std::size_t>(j)] -= config.period_increment * static_cast<double>(j) / static_cast<double>(length);
        scale = std::max(scale, std::abs(x[static_cast<std::size_t>(j)]));
    }

    WtmmResult res;
    const double a_max = config.a_max > 0.0 ? config.a_max : static_cast<double>(length) / 8.0;
    res.scales = geometric_scales(config.a_min, a_max, config.n_scales);
    res.p_grid = config.effective_p_grid();

    const CwtResult c = cwt(x, Wavelet::make(config.wavelet), res.scales);
    const std::vector<MaximaLine> lines = find_maxima_lines(c, scale, config.chain);
    if (lines.empty()) throw std::runtime_error("wtmm: no maxima lines survive (constant signal?)");
    res.line_count = lines.size();

    res.tau = regress_tau(partition_function(lines, res.p_grid, res.scales.size()), res.scales);

    const std::size_t np = res.p_grid.size();
    for (std::size_t i = 0; i < np; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == np ? i : i + 1;
        const double h = np < 2 ? 0.0 : (res.tau[hi] - res.tau[lo]) / (res.p_grid[hi] - res.p_grid[lo]);
        res.h_of_p.push_back(h);
        res.D_of_p.push_back(res.p_grid[i] * h - res.tau[i]);
    }

    std::vector<double> eta(np), h_grid(static_cast<std::size_t>(config.h_points));
    for (std::size_t i = 0; i < np; ++i) eta[i] = res.tau[i] + 1.0;
    for (int k = 0; k < config.h_points; ++k)
        h_grid[static_cast<std::size_t>(k)] =
            config.h_min + (config.h_max - config.h_min) * k / (config.h_points - 1);
    res.curve = legendre_transform(res.p_grid, eta, h_grid);

    const auto p_lo = std::min_element(res.p_grid.begin(), res.p_grid.end()) - res.p_grid.begin();
    const auto p_hi = std::max_element(res.p_grid.begin(), res.p_grid.end()) - res.p_grid.begin();
    res.support_max = res.h_of_p[static_cast<std::size_t>(p_lo)];
    res.support_min = res.h_of_p[static_cast<std::size_t>(p_hi)];
    const auto peak = std::max_element(res.D_of_p.begin(), res.D_of_p.end()) - res.D_of_p.begin();
    res.peak_D = res.D_of_p[static_cast<std::size_t>(peak)];
    res.peak_h = res.h_of_p[static_cast<std::size_t>(peak)];
    return res;
}

double mean_abs_deviation(const SpectrumCurve &curve, const std::function<double(double)> &theory)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < curve.h.size(); ++i) {
        const double t = theory(curve.h[i]);
        if (!std::isfinite(t)) continue;
        sum += std::abs(curve.D[i] - t);
        ++n;
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

std::vector<double> cusp_signal(int J, double h0, double x0)
{
    const std::int64_t length = std::int64_t{1} << J;
    std::vector<double> out(static_cast<std::size_t>(length));
    for (std::int64_t j = 0; j < length; ++j) {
        const double x = static_cast<double>(j) / static_cast<double>(length);
        out[static_cast<std::size_t>(j)] = std::pow(std::abs(std::sin(std::numbers::pi * (x - x0))), h0);
    }
    return out;
}

std::vector<double> weierstrass_signal(int J, double h0)
{
    const std::int64_t length = std::int64_t{1} << J;
    std::vector<double> out(static_cast<std::size_t>(length), 0.0);
    for (int k = 0; k < J; ++k) {
        const double amp = std::pow(2.0, -k * h0);
        const std::int64_t freq = std::int64_t{1} << k;
        for (std::int64_t j = 0; j < length; ++j) {
            // exact phase index keeps the sum periodic to the last bit
            const std::int64_t idx = (freq * j) % length;
            out[static_cast<std::size_t>(j)] +=
                amp * std::cos(2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(length));
        }
    }
    return out;
}

void write_tau_csv(std::ostream &out, const WtmmResult &result)
{
    out << "p,tau,h,D\n";
    for (std::size_t i = 0; i < result.p_grid.size(); ++i)
        out << format_double(result.p_grid[i]) << ',' << format_double(result.tau[i]) << ','
            << format_double(result.h_of_p[i]) << ',' << format_double(result.D_of_p[i]) << '\n';
}

} // namespace multifrac
