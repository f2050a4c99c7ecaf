#include "multifrac/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace multifrac {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2k} / (2k)! for k = 1..7
constexpr std::array<double, 7> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0};

} // namespace

double gamma_fn(double x)
{
    if (x <= 0.0 && x == std::floor(x)) throw std::domain_error("gamma_fn: pole at non-positive integer");
    if (x < 0.5) {
        const double pi = std::numbers::pi;
        return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double a = kLanczos[0];
    const double t = z + kLanczosG + 0.5;
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double zeta_fn(double s)
{
    if (!(s > 1.0)) throw std::domain_error("zeta_fn: requires s > 1");
    constexpr int kTerms = 16;
    const double n = kTerms;
    double sum = 0.0;
    for (int k = kTerms - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    sum += std::pow(n, 1.0 - s) / (s - 1.0);
    sum += 0.5 * std::pow(n, -s);

    // rising factorial s (s+1) ... (s+2k-2) times n^{-s-2k+1}
    double rising = s;
    double npow = std::pow(n, -s - 1.0);
    for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
        sum += kBernoulliOverFactorial[k] * rising * npow;
        const double j = 2.0 * static_cast<double>(k + 1);
        rising *= (s + j - 1.0) * (s + j);
        npow /= n * n;
    }
    return sum;
}

} // namespace multifrac
