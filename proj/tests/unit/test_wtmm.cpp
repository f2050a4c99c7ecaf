#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "multifrac/riemann.hpp"
#include "multifrac/wtmm.hpp"

using namespace multifrac;

namespace {

constexpr int J = 13;
constexpr std::int64_t L = std::int64_t{1} << J;

double peak_abs(const std::vector<double> &x)
{
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

} // namespace

TEST_CASE("geometric scales")
{
    const auto s = geometric_scales(2.0, 1024.0, 10);
    REQUIRE(s.size() == 10);
    CHECK(s.front() == doctest::Approx(2.0));
    CHECK(s.back() == doctest::Approx(1024.0));
    for (std::size_t k = 1; k < s.size(); ++k) CHECK(s[k] / s[k - 1] == doctest::Approx(s[1] / s[0]));
    CHECK_THROWS_AS(geometric_scales(2.0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("cwt: constants vanish, linearity, scale bounds")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d1);
    const auto scales = geometric_scales(2.0, 128.0, 8);
    std::vector<double> c(1024, 2.5);
    for (const auto &row : cwt(c, w, scales).coeffs)
        for (double v : row) CHECK(std::abs(v) < 1e-10);

    std::vector<double> a(1024), b(1024), ab(1024);
    for (int j = 0; j < 1024; ++j) {
        a[j] = std::sin(2 * std::numbers::pi * 5 * j / 1024.0);
        b[j] = std::abs(j - 300) < 40 ? 1.0 : 0.0;
        ab[j] = a[j] - 3.0 * b[j];
    }
    const auto ca = cwt(a, w, scales), cb = cwt(b, w, scales), cab = cwt(ab, w, scales);
    for (std::size_t k = 0; k < scales.size(); ++k)
        for (int j = 0; j < 1024; j += 11)
            CHECK(std::abs(cab.coeffs[k][j] - (ca.coeffs[k][j] - 3.0 * cb.coeffs[k][j])) < 1e-12);

    const std::vector<double> too_small{1.0, 4.0}, too_large{2.0, 256.0}, decreasing{8.0, 4.0};
    CHECK_THROWS_AS(cwt(a, w, too_small), std::invalid_argument);
    CHECK_THROWS_AS(cwt(a, w, too_large), std::invalid_argument);
    CHECK_THROWS_AS(cwt(a, w, decreasing), std::invalid_argument);
}

TEST_CASE("cusp exponents are recovered along the lines rooted at the cusp")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d1);
    const auto scales = geometric_scales(2.0, L / 8.0, 32);
    for (double h0 : {0.2, 0.3, 0.5, 0.7}) {
        const auto x = cusp_signal(J, h0);
        const auto lines = find_maxima_lines(cwt(x, w, scales), peak_abs(x));
        REQUIRE_FALSE(lines.empty());
        // every line reaching the coarse third starts at the cusp
        for (const MaximaLine &line : lines) {
            CHECK(std::abs(line.root() - L / 2) <= 8);
            CHECK(std::abs(line_exponent(line, scales) - h0) <= 0.05);
        }
    }
}

TEST_CASE("two separated cusps give lines rooted at both")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d1);
    const auto scales = geometric_scales(2.0, 256.0, 24);
    const auto a = cusp_signal(J, 0.4, 0.25), b = cusp_signal(J, 0.4, 0.75);
    std::vector<double> x(a.size());
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = a[j] + b[j];
    const auto lines = find_maxima_lines(cwt(x, w, scales), peak_abs(x));
    bool near_a = false, near_b = false;
    for (const MaximaLine &line : lines) {
        near_a = near_a || std::abs(line.root() - L / 4) <= 8;
        near_b = near_b || std::abs(line.root() - 3 * L / 4) <= 8;
    }
    CHECK(near_a);
    CHECK(near_b);
}

TEST_CASE("a constant signal has no maxima lines")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d1);
    std::vector<double> c(4096, 1.0);
    const auto scales = geometric_scales(2.0, 256.0, 16);
    CHECK(find_maxima_lines(cwt(c, w, scales), 1.0).empty());
    WtmmConfig cfg;
    cfg.J = 12;
    CHECK_THROWS_AS(wtmm_spectrum(c, cfg), std::runtime_error);
}

TEST_CASE("partition function and regression on a planted line")
{
    const int n = 16;
    const auto scales = geometric_scales(2.0, 512.0, n);
    MaximaLine line;
    for (int k = 0; k < n; ++k) line.points.push_back({k, 100, std::sqrt(scales[k])});
    const std::vector<MaximaLine> lines{line, line};
    const std::vector<double> p{-2.0, 0.0, 1.0, 3.0};
    const auto Z = partition_function(lines, p, n);
    for (int k = 0; k < n; ++k) CHECK(Z[1][k] == 2.0);
    const auto tau = regress_tau(Z, scales);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(tau[i] == doctest::Approx(0.5 * p[i]).epsilon(1e-10));
    CHECK(line_exponent(line, scales) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Weierstrass function: affine tau with slope h0")
{
    const auto x = weierstrass_signal(J, 0.5);
    WtmmConfig cfg;
    cfg.J = J;
    const WtmmResult r = wtmm_spectrum(x, cfg);
    for (std::size_t i = 0; i < r.p_grid.size(); ++i)
        if (r.p_grid[i] >= 1.0 && r.p_grid[i] <= 5.0) CHECK(r.h_of_p[i] == doctest::Approx(0.5).epsilon(0.1));
    // monofractal: spectrum concentrated near (0.5, 1)
    CHECK(r.peak_h == doctest::Approx(0.5).epsilon(0.1));
    CHECK(r.peak_D == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.support_max - r.support_min < 0.2);
}

TEST_CASE("pipeline invariants: dimension cap, concavity, determinism")
{
    SignalOptions so;
    so.delta = 1.0 / 0.7 - 1.0;
    const auto x = sample_signal(SignalSource::H_delta, 12, so);
    WtmmConfig cfg;
    cfg.J = 12;
    cfg.wavelet = WaveletKind::gaussian_d2;
    cfg.period_increment = signal_period_increment(SignalSource::H_delta, so);
    const WtmmResult a = wtmm_spectrum(x, cfg);
    const WtmmResult b = wtmm_spectrum(x, cfg);
    CHECK(a.tau == b.tau);
    CHECK(a.curve.D == b.curve.D);

    for (double d : a.curve.D) CHECK(d <= 1.05);
    for (std::size_t i = 1; i + 1 < a.curve.D.size(); ++i) {
        if (!std::isfinite(a.curve.D[i - 1]) || !std::isfinite(a.curve.D[i + 1])) continue;
        CHECK(a.curve.D[i] >= 0.5 * (a.curve.D[i - 1] + a.curve.D[i + 1]) - 1e-9);
    }
}

TEST_CASE("config validation and error metric")
{
    WtmmConfig cfg;
    cfg.p_grid = {-6.0, 0.0};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.p_grid.clear();
    cfg.h_max = 3.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK(WtmmConfig{}.effective_p_grid().size() == 41);

    const SpectrumCurve c{{0.0, 0.5, 1.0}, {0.1, 0.5, 0.7}};
    CHECK(mean_abs_deviation(c, [](double h) { return h <= 0.5 ? h : -INFINITY; }) == doctest::Approx(0.05));
    CHECK(std::isnan(mean_abs_deviation(c, [](double) { return -INFINITY; })));
}

TEST_CASE("tau csv")
{
    WtmmResult r;
    r.p_grid = {0.0, 1.0};
    r.tau = {-1.0, -0.5};
    r.h_of_p = {0.5, 0.5};
    r.D_of_p = {1.0, 1.0};
    std::ostringstream out;
    write_tau_csv(out, r);
    CHECK(out.str() == "p,tau,h,D\n0,-1,0.5,1\n1,-0.5,0.5,1\n");
}
