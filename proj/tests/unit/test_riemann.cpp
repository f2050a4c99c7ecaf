#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "multifrac/riemann.hpp"

using namespace multifrac;
using namespace std::complex_literals;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("phi at rational points")
{
    CHECK(std::abs(riemann_phi(0.0, 100'000) - (-1i * pi / 6.0)) < 1e-5);
    // sum (-1)^n / n^2 = -pi^2/12
    CHECK(std::abs(riemann_phi(1.0, 100'000) - (1i * pi / 12.0)) < 1e-5);
    CHECK(std::abs(riemann_phi(0.0, 1) - (-1i / pi)) < 1e-15);
    CHECK_THROWS_AS(riemann_phi(0.0, 0), std::invalid_argument);
}

TEST_CASE("phi symmetries at matched truncation")
{
    for (int k = 0; k < 40; ++k) {
        const double t = -1.0 + k / 20.0 + 1.0 / 512.0;
        const auto v = riemann_phi(t, 20'000);
        CHECK(std::abs(riemann_phi(t + 2.0, 20'000) - v) < 1e-10);
        CHECK(std::abs(riemann_phi(-t, 20'000) + std::conj(v)) < 1e-10);
    }
}

TEST_CASE("truncation error bound")
{
    for (double t : {0.0, 0.1, 0.5, 1.0 / 3.0, 0.777}) {
        for (std::int64_t n : {100, 1000, 10'000}) {
            const double diff = std::abs(riemann_phi(t, 2 * n) - riemann_phi(t, n));
            CHECK(diff <= riemann_tail_bound(n));
        }
    }
    CHECK(riemann_tail_bound(1000) == doctest::Approx(1.0 / (1000.0 * pi)));
}

TEST_CASE("R and phi round trip, and the quasi-period of R")
{
    for (int k = 0; k < 50; ++k) {
        const double t = 2.0 * k / 50.0;
        const auto back = 2.0i * pi * riemann_R(-t / (4.0 * pi), 20'000) - t / 2.0 - 1i * pi / 6.0;
        CHECK(std::abs(back - riemann_phi(t, 20'000)) < 1e-10);
    }
    CHECK(std::abs(riemann_R(0.0, 100'000)) < 1e-6);
    // phi is 2-periodic, so R shifts by i/(2 pi) over 1/(2 pi)
    for (double u : {0.01, 0.05, 0.123}) {
        const auto shift = riemann_R(u + 1.0 / (2.0 * pi), 20'000) - riemann_R(u, 20'000);
        CHECK(std::abs(shift - 1i / (2.0 * pi)) < 1e-9);
    }
}

TEST_CASE("grid evaluation matches pointwise evaluation")
{
    const std::int64_t L = 1024, terms = 3000;
    const auto grid = riemann_phi_grid(L, terms);
    REQUIRE(grid.size() == static_cast<std::size_t>(L));
    for (std::int64_t j = 0; j < L; j += 37)
        CHECK(std::abs(grid[j] - riemann_phi(2.0 * j / L, terms)) < 1e-12);
    CHECK_THROWS_AS(riemann_phi_grid(0, 10), std::invalid_argument);
}

TEST_CASE("signal sampling")
{
    SignalOptions so;
    so.n_terms = 2000;
    const auto re = sample_signal(SignalSource::Riemann_real, 10, so);
    const auto im = sample_signal(SignalSource::Riemann_imag, 10, so);
    REQUIRE(re.size() == 1024);
    CHECK(re[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(im[0] - riemann_phi(0.0, 2000).imag()) < 1e-12);
    CHECK(signal_period(SignalSource::Riemann_real) == 2.0);
    CHECK(signal_period_increment(SignalSource::Riemann_real, so) == 0.0);

    // H_delta: jumps of the atom weights plus the drift that restores the full mass
    SignalOptions ho;
    ho.delta = 0.5;
    ho.qmax = 64;
    const auto h = sample_signal(SignalSource::H_delta, 8, ho);
    const RationalMeasure m = build_measure(CombParams(0.5), 64, Window::open_closed(0.0, 1.0));
    const double drift = total_mass(CombParams(0.5)) - m.mass();
    for (std::size_t j = 0; j < h.size(); j += 9) {
        const double t = static_cast<double>(j) / 256.0;
        CHECK(h[j] == doctest::Approx(eval_H(m, t).value + drift * t).epsilon(1e-12));
    }
    CHECK(signal_period_increment(SignalSource::H_delta, ho) == doctest::Approx(total_mass(CombParams(0.5))));

    CHECK_THROWS_AS(sample_signal(SignalSource::Riemann_real, 7), std::invalid_argument);
    CHECK_THROWS_AS(sample_signal(SignalSource::Riemann_real, 21), std::invalid_argument);
    CHECK(parse_signal_source("riemann_imag") == SignalSource::Riemann_imag);
    CHECK_THROWS_AS(parse_signal_source("weierstrass"), std::invalid_argument);
    CHECK(default_signal_qmax(13) == static_cast<std::int64_t>(std::ceil(16.0 * std::sqrt(8192.0))));
    CHECK(default_signal_qmax(20) == 8192);
}

TEST_CASE("signal csv")
{
    std::ostringstream out;
    write_signal_csv(out, std::vector<double>{1.0, 2.0}, 2.0);
    CHECK(out.str() == "t,value\n0,1\n1,2\n");
}
