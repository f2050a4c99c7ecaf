#include "multifrac/number_theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace multifrac {

bool Window::empty() const
{
    if (hi > lo) return false;
    return !(hi == lo && lo_closed && hi_closed);
}

bool Window::contains(double x) const
{
    if (x < lo || x > hi) return false;
    if (x == lo && !lo_closed) return false;
    if (x == hi && !hi_closed) return false;
    return true;
}

SieveTables::SieveTables(std::int64_t limit) : limit_(limit)
{
    if (limit < 1) throw std::invalid_argument("totient_sieve: limit must be >= 1");
    const auto n = static_cast<std::size_t>(limit);
    phi_.assign(n + 1, 0);
    mu_.assign(n + 1, 0);
    phi_[1] = 1;
    mu_[1] = 1;

    std::vector<std::int64_t> primes;
    std::vector<char> composite(n + 1, 0);
    for (std::size_t i = 2; i <= n; ++i) {
        if (!composite[i]) {
            primes.push_back(static_cast<std::int64_t>(i));
            phi_[i] = static_cast<std::int64_t>(i) - 1;
            mu_[i] = -1;
        }
        for (std::int64_t pr : primes) {
            const std::size_t m = i * static_cast<std::size_t>(pr);
            if (m > n) break;
            composite[m] = 1;
            if (i % static_cast<std::size_t>(pr) == 0) {
                phi_[m] = phi_[i] * pr;
                mu_[m] = 0;
                break;
            }
            phi_[m] = phi_[i] * (pr - 1);
            mu_[m] = static_cast<std::int8_t>(-mu_[i]);
        }
    }
}

SieveTables totient_sieve(std::int64_t limit) { return SieveTables(limit); }

std::vector<Fraction> enumerate_farey(std::int64_t qmax, const Window &window)
{
    if (qmax < 1) throw std::invalid_argument("enumerate_farey: qmax must be >= 1");
    if (!std::isfinite(window.lo) || !std::isfinite(window.hi))
        throw std::invalid_argument("enumerate_farey: window must be bounded");
    std::vector<Fraction> out;
    if (window.empty()) return out;

    for (std::int64_t q = 1; q <= qmax; ++q) {
        const auto qd = static_cast<double>(q);
        // one extra numerator on each side absorbs rounding in lo*q, hi*q
        const auto p_lo = static_cast<std::int64_t>(std::floor(window.lo * qd)) - 1;
        const auto p_hi = static_cast<std::int64_t>(std::ceil(window.hi * qd)) + 1;
        for (std::int64_t p = p_lo; p <= p_hi; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const Fraction f{p, q};
            if (window.contains(f.value())) out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end(), fraction_less);
    return out;
}

double totient_power_sum(const SieveTables &tables, std::int64_t limit, double exponent)
{
    if (limit < 1) throw std::invalid_argument("totient_power_sum: limit must be >= 1");
    if (limit > tables.limit()) throw std::out_of_range("totient_power_sum: limit exceeds sieve");
    double sum = 0.0;
    for (std::int64_t q = 1; q <= limit; ++q)
        sum += static_cast<double>(tables.phi(q)) * std::pow(static_cast<double>(q), -exponent);
    return sum;
}

double totient_power_sum(std::int64_t limit, double exponent)
{
    return totient_power_sum(totient_sieve(limit), limit, exponent);
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t d = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
    return d;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

} // namespace

std::int64_t count_close_pairs(double scale, double c1, const DenominatorBlock &lambda_block,
                               const DenominatorBlock &mu_block)
{
    if (!(scale > 0.0) || !(c1 > 0.0))
        throw std::invalid_argument("count_close_pairs: scale and c1 must be positive");
    if (lambda_block.lo < 1 || lambda_block.hi <= lambda_block.lo || mu_block.lo < 1 ||
        mu_block.hi <= mu_block.lo)
        throw std::invalid_argument("count_close_pairs: blocks must be nonempty with lo >= 1");
    const std::int64_t lambda = lambda_block.lo;
    const std::int64_t mu = mu_block.lo;
    if (lambda * mu > kMaxPairBlockProduct)
        throw std::invalid_argument("count_close_pairs: lambda*mu exceeds the cap of " +
                                    std::to_string(kMaxPairBlockProduct));

    // |q'p - qp'| is an integer, so the admissible band is [1, floor(bound)].
    const double bound = 2.0 * c1 * static_cast<double>(lambda) * static_cast<double>(mu) / scale;
    if (bound < 1.0) return 0;
    const auto band = static_cast<std::int64_t>(std::floor(bound));

    std::int64_t count = 0;
    for (std::int64_t q = lambda_block.lo; q < lambda_block.hi; ++q) {
        for (std::int64_t qp = mu_block.lo; qp < mu_block.hi; ++qp) {
            for (std::int64_t p = 0; p < q; ++p) {
                if (std::gcd(p, q) != 1) continue;
                const std::int64_t centre = qp * p;
                // p' with |centre - q p'| <= band
                const std::int64_t lo = std::max<std::int64_t>(0, ceil_div(centre - band, q));
                const std::int64_t hi = std::min<std::int64_t>(qp - 1, floor_div(centre + band, q));
                for (std::int64_t pp = lo; pp <= hi; ++pp) {
                    if (centre == q * pp) continue;
                    if (std::gcd(pp, qp) == 1) ++count;
                }
            }
        }
    }
    return count;
}

} // namespace multifrac
