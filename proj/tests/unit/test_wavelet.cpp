#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <omp.h>

#include "doctest.h"
#include "multifrac/io.hpp"
#include "multifrac/wavelet.hpp"

using namespace multifrac;

namespace {

constexpr double pi = std::numbers::pi;

double integrate(const std::function<double(double)> &f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

// direct double loop over grid points, atoms and nearby integer translates
std::vector<double> brute_transform(const RationalMeasure &m, const Wavelet &w, std::int64_t n,
                                    const std::vector<double> &grid)
{
    std::vector<double> out;
    for (double x : grid) {
        double sum = 0.0;
        for (const Atom &a : m.atoms())
            for (int k = -2; k <= 2; ++k) sum += a.weight * w.phi(static_cast<double>(n) * (x - a.location.value() - k));
        out.push_back(sum);
    }
    return out;
}

} // namespace

TEST_CASE("built-in wavelets are admissible")
{
    for (WaveletKind kind : {WaveletKind::gaussian_d1, WaveletKind::gaussian_d2, WaveletKind::compact_bump_d1}) {
        const Wavelet w = Wavelet::make(kind);
        CHECK(parse_wavelet_kind(to_string(kind)) == kind);
        for (double s : {2.5, 3.0, 3.5}) {
            const double ps[] = {0.5, 1.0, 2.0};
            const ValidationReport r = validate_wavelet(w, s, ps);
            CHECK(r.passed());
        }
    }
    CHECK_THROWS_AS(parse_wavelet_kind("morlet"), std::invalid_argument);
}

TEST_CASE("inadmissible wavelets are reported, not thrown")
{
    // a Gaussian has nonzero mean
    const Wavelet gauss = Wavelet::custom(
        "gauss", [](double x) { return std::exp(-0.5 * x * x); },
        [](double x) { return std::sqrt(pi / 2.0) * std::erfc(-x / std::sqrt(2.0)); }, 3.0, INFINITY, 0, false);
    const ValidationReport r = validate_wavelet(gauss, 3.0);
    CHECK_FALSE(r.passed());
    REQUIRE(r.find("vanishing_mean") != nullptr);
    CHECK_FALSE(r.find("vanishing_mean")->passed);

    // psi = d/dx (1 + x^2)^{-1}: decays like |x|^{-3}, too slow for s = 3
    const Wavelet slow = Wavelet::custom(
        "slow", [](double x) { return -2.0 * x / ((1.0 + x * x) * (1.0 + x * x)); },
        [](double x) { return 1.0 / (1.0 + x * x); }, 2.0, 3.0, 1, false);
    const ValidationReport rs = validate_wavelet(slow, 3.0);
    REQUIRE(rs.find("decay") != nullptr);
    CHECK_FALSE(rs.find("decay")->passed);
}

TEST_CASE("moments, antiderivative and support")
{
    const Wavelet d1 = Wavelet::make(WaveletKind::gaussian_d1);
    const Wavelet d2 = Wavelet::make(WaveletKind::gaussian_d2);
    CHECK(std::abs(integrate([&](double x) { return d1.psi(x); }, -40, 40)) < 1e-12);
    CHECK(std::abs(integrate([&](double x) { return d2.psi(x); }, -40, 40)) < 1e-12);
    CHECK(std::abs(integrate([&](double x) { return x * d2.psi(x); }, -40, 40)) < 1e-12);
    CHECK(d1.phi_integral() == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-12));
    CHECK(std::abs(d2.phi_integral()) < 1e-12);
    for (double x = -5.0; x <= 5.0; x += 0.25) {
        const double h = 1e-5;
        CHECK(std::abs((d2.phi(x + h) - d2.phi(x - h)) / (2 * h) - d2.psi(x)) < 1e-8);
    }
    CHECK(std::abs(d1.phi(d1.phi_cutoff())) < 1e-15);

    const Wavelet bump = Wavelet::make(WaveletKind::compact_bump_d1);
    CHECK(bump.compact());
    CHECK(bump.phi(0.0) == 1.0);
    CHECK(bump.phi(bump.c1()) == 0.0);
    CHECK(bump.phi(-bump.c1()) == 0.0);
    CHECK(bump.psi(1.5 * bump.c1()) == 0.0);
    CHECK(d1.default_c0() < 1.0 / std::sqrt(2.0 * d1.c1()));
}

TEST_CASE("transform_measure matches the brute-force double loop")
{
    for (double delta : {0.25, 0.5, 0.75}) {
        const RationalMeasure m = build_measure(CombParams(delta), 20, Window::closed_open(0.0, 1.0));
        REQUIRE(m.size() <= 200);
        for (WaveletKind kind : {WaveletKind::gaussian_d1, WaveletKind::gaussian_d2, WaveletKind::compact_bump_d1}) {
            const Wavelet w = Wavelet::make(kind);
            for (std::int64_t n : {16, 64, 256}) {
                const SampledTransform t = transform_measure(m, w, n);
                REQUIRE(t.size() <= 4096);
                CHECK(static_cast<std::int64_t>(t.size()) == transform_grid_size(n, kDefaultOversample, w.c1()));
                const auto want = brute_transform(m, w, n, t.grid);
                double worst = 0.0;
                for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(want[i] - t.values[i]));
                CHECK(worst <= 1e-10);
            }
        }
    }
}

TEST_CASE("transform: single atoms, linearity, scale covariance")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d1);
    const RationalMeasure m = build_measure(CombParams(0.5), 1, Window::closed_open(0.0, 1.0));  // atom at 0
    const double weight = m.atoms()[0].weight;
    const SampledTransform t = transform_measure(m, w, 64);
    for (std::size_t i = 0; i < t.size(); i += 7) {
        const double x = t.grid[i];
        const double d = std::min(x, 1.0 - x);
        CHECK(t.values[i] == doctest::Approx(weight * std::exp(-0.5 * 64.0 * 64.0 * d * d)).epsilon(1e-12));
    }

    // T_{2N}(x) = T_N(2x) for an atom at 0, on nested grids, away from x = 1/2 where
    // T_N(2x) also sees the translate at 1
    const SampledTransform fine = transform_measure(m, w, 128);
    REQUIRE(fine.size() == 2 * t.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
        if (std::abs(fine.grid[i] - 0.5) < 0.25) continue;
        std::size_t k = i;
        if (k >= t.size()) k -= t.size();
        CHECK(std::abs(fine.values[i] - t.values[k]) < 1e-15);
    }

    // disjoint compact supports do not interact
    const Wavelet bump = Wavelet::make(WaveletKind::compact_bump_d1);
    const RationalMeasure two = build_measure(CombParams(0.5), 2, Window::closed_open(0.0, 1.0));
    const SampledTransform both = transform_measure(two, bump, 64);
    const SampledTransform only0 = transform_measure(m, bump, 64);
    const RationalMeasure half = two.filter([](const Atom &a) { return a.location.q == 2; });
    const SampledTransform only_half = transform_measure(half, bump, 64);
    for (std::size_t i = 0; i < both.size(); ++i)
        CHECK(both.values[i] == doctest::Approx(only0.values[i] + only_half.values[i]).epsilon(1e-14));
}

TEST_CASE("transform preconditions and quadrature stability")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d1);
    const RationalMeasure m = build_measure(CombParams(0.5), 64, Window::closed_open(0.0, 1.0));
    CHECK_THROWS_AS(transform_measure(m, w, 2), std::invalid_argument);
    CHECK_THROWS_AS(transform_measure(m, w, 64, 2), std::invalid_argument);
    CHECK_THROWS_AS(transform_measure(m.filter([](const Atom &) { return false; }), w, 64), std::invalid_argument);

    // doubling the oversample moves the norms by well under half a percent
    const SampledTransform a = transform_measure(m, w, 1024, 16);
    const SampledTransform b = transform_measure(m, w, 1024, 32);
    for (double p : {0.5, 1.0, 2.0}) {
        double sa = 0.0, sb = 0.0;
        for (double v : a.values) sa += std::pow(std::abs(v), p);
        for (double v : b.values) sb += std::pow(std::abs(v), p);
        const double na = std::pow(sa / a.size(), 1.0 / p), nb = std::pow(sb / b.size(), 1.0 / p);
        CHECK(std::abs(na - nb) / nb < 0.005);
    }
}

TEST_CASE("transform is identical for any thread count")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d2);
    const RationalMeasure m = build_measure(CombParams(0.5), 300, Window::closed_open(0.0, 1.0));
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const SampledTransform one = transform_measure(m, w, 4096);
    omp_set_num_threads(4);
    const SampledTransform four = transform_measure(m, w, 4096);
    omp_set_num_threads(saved);
    CHECK(one.values == four.values);
}

TEST_CASE("transform_signal")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d1);
    const std::int64_t L = 4096, n = 64;

    std::vector<double> constant(L, 3.5);
    for (double v : transform_signal(constant, w, n).values) CHECK(std::abs(v) < 1e-10);

    // f(x) = x: psi_N * f = (1/N) integral(phi) away from the wrap at 0
    std::vector<double> ramp(L);
    for (std::int64_t j = 0; j < L; ++j) ramp[j] = static_cast<double>(j) / L;
    const SampledTransform r = transform_signal(ramp, w, n);
    for (std::int64_t j = L / 4; j < 3 * L / 4; j += 17)
        CHECK(r.values[j] == doctest::Approx(std::sqrt(2.0 * pi) / n).epsilon(1e-6));

    // against the O(L^2) periodic sum
    const std::int64_t small = 512;
    std::vector<double> f(small);
    for (std::int64_t j = 0; j < small; ++j) f[j] = std::sin(2 * pi * 3 * j / small) + 0.3 * std::cos(2 * pi * 17 * j / small);
    const SampledTransform fast = transform_signal(f, w, 32);
    for (std::int64_t i = 0; i < small; i += 5) {
        double sum = 0.0;
        for (std::int64_t j = 0; j < small; ++j)
            for (int k = -1; k <= 1; ++k)
                sum += 32.0 * w.psi(32.0 * (static_cast<double>(i - j) / small - k)) * f[j] / small;
        CHECK(std::abs(fast.values[i] - sum) < 1e-10);
    }

    // linearity
    std::vector<double> g(small), fg(small);
    for (std::int64_t j = 0; j < small; ++j) {
        g[j] = static_cast<double>((j * 7919) % 101) / 101.0;
        fg[j] = 2.0 * f[j] - g[j];
    }
    const SampledTransform tg = transform_signal(g, w, 32), tfg = transform_signal(fg, w, 32);
    for (std::int64_t i = 0; i < small; ++i)
        CHECK(std::abs(tfg.values[i] - (2.0 * fast.values[i] - tg.values[i])) < 1e-12);

    CHECK_THROWS_AS(transform_signal(f, w, 128), std::invalid_argument);
}

TEST_CASE("tail error")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d1);
    const double c0 = w.default_c0();
    const CombParams params(0.5);
    const Fraction zero{0, 1};
    double prev = INFINITY;
    for (std::int64_t n : {1024, 4096, 16384}) {
        const RationalMeasure m = tail_window_measure(params, w, zero, n, 2 * n);
        const double e = tail_error(m, w, zero, n, c0);
        CHECK(e > 0.0);
        CHECK(e < prev);
        prev = e;
    }
    const RationalMeasure m = tail_window_measure(params, w, Fraction{1, 3}, 1024, 2048);
    CHECK_THROWS_AS(tail_error(m, w, Fraction{1, 9}, 1024, c0), std::invalid_argument);

    const Wavelet bump = Wavelet::make(WaveletKind::compact_bump_d1);
    const RationalMeasure mb = tail_window_measure(params, bump, zero, 1024, 2048);
    CHECK(tail_error(mb, bump, zero, 1024, bump.default_c0()) == 0.0);
}

TEST_CASE("transform writers")
{
    const Wavelet w = Wavelet::make(WaveletKind::gaussian_d1);
    const SampledTransform t = transform_measure(build_measure(CombParams(0.5), 5, Window::closed_open(0.0, 1.0)), w, 8);
    std::stringstream bin;
    write_transform_binary(bin, t);
    const BinaryDump back = read_binary_dump(bin);
    CHECK(back.scale == 8);
    CHECK(back.values == t.values);

    std::ostringstream csv;
    write_transform_csv(csv, t);
    const std::string text = csv.str();
    CHECK(text.rfind("x,value\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(t.size() + 1));
}
