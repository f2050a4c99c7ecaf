#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace multifrac {

/// A reduced fraction p/q with q >= 1.
struct Fraction
{
    std::int64_t p = 0;
    std::int64_t q = 1;

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }

    friend bool operator==(const Fraction &, const Fraction &) = default;
};

/// Exact ordering by cross multiplication (denominators are positive).
inline bool fraction_less(const Fraction &a, const Fraction &b)
{
    return a.p * b.q < b.p * a.q;
}

/// Interval on the real line with independently open or closed ends.
struct Window
{
    double lo = 0.0;
    double hi = 1.0;
    bool lo_closed = true;
    bool hi_closed = false;

    static Window closed_open(double lo, double hi) { return {lo, hi, true, false}; }
    static Window open_closed(double lo, double hi) { return {lo, hi, false, true}; }
    static Window closed(double lo, double hi) { return {lo, hi, true, true}; }

    bool empty() const;
    bool contains(double x) const;
    double length() const { return hi > lo ? hi - lo : 0.0; }
};

/// Euler totient and Moebius tables for 1..limit, built by a linear sieve.
/// Index 0 is unused. Immutable once built.
class SieveTables
{
public:
    explicit SieveTables(std::int64_t limit);

    std::int64_t limit() const { return limit_; }
    std::int64_t phi(std::int64_t q) const { return phi_[static_cast<std::size_t>(q)]; }
    int mu(std::int64_t q) const { return mu_[static_cast<std::size_t>(q)]; }

    std::span<const std::int64_t> phi_table() const { return phi_; }
    std::span<const std::int8_t> mu_table() const { return mu_; }

private:
    std::int64_t limit_;
    std::vector<std::int64_t> phi_;
    std::vector<std::int8_t> mu_;
};

/// Throws std::invalid_argument for limit < 1.
SieveTables totient_sieve(std::int64_t limit);

/// Every reduced fraction with denominator <= qmax inside the window, ascending,
/// each value once (0/1 stands for zero, 1/1 for one).
std::vector<Fraction> enumerate_farey(std::int64_t qmax, const Window &window);

/// Sum over 1 <= q <= M of phi(q) / q^a.
double totient_power_sum(std::int64_t limit, double exponent);
double totient_power_sum(const SieveTables &tables, std::int64_t limit, double exponent);

/// Half-open dyadic-style block [lo, hi) of denominators.
struct DenominatorBlock
{
    std::int64_t lo = 1;
    std::int64_t hi = 2;

    static DenominatorBlock dyadic(std::int64_t lambda) { return {lambda, 2 * lambda}; }
};

/// Upper bound on lambda*mu accepted by count_close_pairs.
inline constexpr std::int64_t kMaxPairBlockProduct = std::int64_t{1} << 16;

/// Exact count of pairs of reduced fractions (p/q, p'/q'), 0 <= p < q, 0 <= p' < q',
/// q in `lambda_block`, q' in `mu_block`, with 0 < |q'p - qp'| <= 2 c1 lambda mu / N,
/// where lambda and mu are the lower ends of the blocks.
/// Throws when lambda*mu exceeds kMaxPairBlockProduct.
std::int64_t count_close_pairs(double scale, double c1, const DenominatorBlock &lambda_block,
                               const DenominatorBlock &mu_block);

} // namespace multifrac
