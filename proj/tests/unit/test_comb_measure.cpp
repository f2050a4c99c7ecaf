#include <cmath>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "doctest.h"
#include "multifrac/comb_measure.hpp"
#include "multifrac/special_functions.hpp"

using namespace multifrac;

namespace {

constexpr double pi = std::numbers::pi;

double b1_oracle(double d)
{
    using boost::math::tgamma;
    return std::pow(2.0 * pi, -2.0 * d) * tgamma(2.0 * d) / (std::abs(tgamma(-d)) * tgamma(d));
}

} // namespace

TEST_CASE("gamma and zeta against Boost")
{
    for (double x = -4.75; x < 30.0; x += 0.37) {
        if (std::abs(x - std::round(x)) < 1e-9 && x <= 0.0) continue;
        CHECK(gamma_fn(x) == doctest::Approx(boost::math::tgamma(x)).epsilon(1e-13));
    }
    for (double x : {0.5, 1.5, 2.5}) CHECK(gamma_fn(-x + 1.0) == doctest::Approx(boost::math::tgamma(-x + 1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-3.0), std::domain_error);
    for (double s = 1.05; s < 12.0; s += 0.13) CHECK(zeta_fn(s) == doctest::Approx(boost::math::zeta(s)).epsilon(1e-13));
    CHECK(zeta_fn(2.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-15));
}

TEST_CASE("parameter triple")
{
    const CombParams p(0.5);
    CHECK(p.s() == 3.0);
    CHECK(p.alpha() == doctest::Approx(2.0 / 3.0));
    const CombParams q = CombParams::from_alpha(0.7);
    CHECK(q.delta() == doctest::Approx(1.0 / 0.7 - 1.0));
    CHECK(q.alpha() == doctest::Approx(0.7));
    CHECK_THROWS_AS(CombParams(0.0), std::invalid_argument);
    CHECK_THROWS_AS(CombParams(1.0), std::invalid_argument);
    CHECK_THROWS_AS(CombParams(-0.2), std::invalid_argument);
    CHECK_THROWS_AS(CombParams(std::nan("")), std::invalid_argument);
}

TEST_CASE("b1 examples, oracle and continuity")
{
    CHECK(b1(0.5) == doctest::Approx(1.0 / (4.0 * pi * pi)).epsilon(1e-14));
    for (double d = 0.05; d < 1.0; d += 0.05) CHECK(b1(d) == doctest::Approx(b1_oracle(d)).epsilon(1e-12));
    for (double d = 0.1; d < 0.95; d += 0.1) CHECK(std::abs(b1(d + 1e-7) - b1(d)) < 1e-5);
    CHECK_THROWS_AS(b1(1.0), std::domain_error);
}

TEST_CASE("coefficients: case factors and oracle")
{
    for (double d : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const double base = -2.0 * b1_oracle(d) * boost::math::zeta(2.0 * (1.0 + d));
        CHECK(coefficient_a(1, d) == doctest::Approx(base).epsilon(1e-12));
        CHECK(coefficient_a(7, d) == coefficient_a(1, d));
        CHECK(coefficient_a(6, d) / coefficient_a(1, d) ==
              doctest::Approx(-2.0 * (std::pow(2.0, 1.0 + 2.0 * d) - 1.0)).epsilon(1e-14));
        CHECK(coefficient_a(8, d) / coefficient_a(3, d) == doctest::Approx(std::pow(2.0, 2.0 * (1.0 + d))).epsilon(1e-14));
        const CoefficientTable t = CoefficientTable::compute(d);
        for (std::int64_t q = 1; q <= 40; ++q) CHECK(t(q) == coefficient_a(q, d));
    }
    CHECK_THROWS_AS(coefficient_a(0, 0.5), std::invalid_argument);
}

TEST_CASE("build_measure examples")
{
    const RationalMeasure m = build_measure(CombParams(0.5), 3, Window::closed_open(0.0, 1.0));
    REQUIRE(m.size() == 4);
    CHECK(m.atoms()[0].location == Fraction{0, 1});
    CHECK(m.atoms()[3].location == Fraction{2, 3});
    CHECK(m.atoms()[1].weight == m.atoms()[3].weight);
    CHECK(m.atoms()[2].weight == doctest::Approx(coefficient_a(2, 0.5) / 8.0).epsilon(1e-15));
    CHECK(build_measure(CombParams(0.5), 1, Window::closed_open(0.0, 1.0)).size() == 1);
    CHECK(build_measure(CombParams(0.5), 1, Window::closed(0.0, 1.0)).size() == 2);
    CHECK_THROWS_AS(build_measure(CombParams(0.5), 0, Window::closed_open(0.0, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(build_measure(CombParams(0.5), 100'000, Window::closed_open(0.0, 1.0), 1000), std::length_error);
}

TEST_CASE("measure invariants")
{
    const CombParams params(0.25);
    const RationalMeasure m = build_measure(params, 200, Window::closed_open(0.0, 1.0));
    const auto atoms = m.atoms();
    std::set<double> distinct;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto q = atoms[i].location.q;
        CHECK(atoms[i].weight == doctest::Approx(coefficient_a(q, 0.25) * std::pow(q, -params.s())).epsilon(1e-14));
        distinct.insert(coefficient_a(q, 0.25));
        if (i > 0) CHECK(fraction_less(atoms[i - 1].location, atoms[i].location));
    }
    CHECK(distinct.size() == 3);

    // total variation through the totient sum
    const SieveTables t = totient_sieve(200);
    double tv = 0.0;
    for (std::int64_t q = 1; q <= 200; ++q)
        tv += static_cast<double>(t.phi(q)) * std::abs(coefficient_a(q, 0.25)) * std::pow(q, -params.s());
    CHECK(m.total_variation() == doctest::Approx(tv).epsilon(1e-12));
}

TEST_CASE("total mass: closed form against the truncated sum with a stable tail constant")
{
    for (double d : {0.25, 0.5, 0.75}) {
        const CombParams params(d);
        const SieveTables t = totient_sieve(1 << 14);
        std::vector<double> constants;
        double partial = 0.0;
        std::int64_t next = 1 << 8;
        for (std::int64_t q = 1; q <= (1 << 14); ++q) {
            partial += static_cast<double>(t.phi(q)) * coefficient_a(q, d) * std::pow(q, -params.s());
            if (q == next) {
                constants.push_back(std::abs(total_mass(params) - partial) * std::pow(q, params.s() - 2.0));
                next *= 2;
            }
        }
        const auto [mn, mx] = std::minmax_element(constants.begin(), constants.end());
        CHECK(*mx / *mn < 1.5);
        CHECK(total_mass(params) != 0.0);
    }
}

TEST_CASE("primitive H")
{
    const RationalMeasure m = build_measure(CombParams(0.5), 30, Window::open_closed(0.0, 1.0));
    CHECK(eval_H(m, 0.0).value == 0.0);
    CHECK_FALSE(eval_H(m, 0.0).clamped);
    CHECK(eval_H(m, 1.0).value == doctest::Approx(m.mass()).epsilon(1e-13));
    CHECK(eval_H(m, -0.5).clamped);
    CHECK(eval_H(m, -0.5).value == 0.0);
    CHECK(eval_H(m, 1.5).clamped);
    CHECK(eval_H(m, 1.5).value == doctest::Approx(m.mass()).epsilon(1e-13));

    // right-continuous jump of the atom weight at 1/2, flat between neighbouring atoms
    const double w = coefficient_a(2, 0.5) / 8.0;
    CHECK(eval_H(m, 0.5).value - eval_H(m, std::nextafter(0.5, 0.0)).value == doctest::Approx(w).epsilon(1e-12));
    CHECK(eval_H(m, 0.5).value == eval_H(m, std::nextafter(0.5, 1.0)).value);
    const double a = 15.0 / 29.0, b = 14.0 / 27.0;  // no atom with q <= 30 strictly between
    CHECK(eval_H(m, a + 1e-9).value == eval_H(m, b - 1e-9).value);

    // brute force on a grid
    for (double t = 0.0; t <= 1.0; t += 0.0137) {
        double sum = 0.0;
        for (const Atom &atom : m.atoms())
            if (atom.location.value() <= t) sum += atom.weight;
        CHECK(eval_H(m, t).value == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("measure csv")
{
    std::ostringstream out;
    write_measure_csv(out, build_measure(CombParams(0.5), 2, Window::closed_open(0.0, 1.0)));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "p,q,location,weight");
    std::getline(in, line);
    CHECK(line.rfind("0,1,0,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("1,2,0.5,", 0) == 0);
    CHECK_FALSE(std::getline(in, line));
}
