#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "multifrac/number_theory.hpp"

namespace multifrac {

/// The triple (delta, s = 2(1 + delta), alpha = 2/s) that every formula depends on.
class CombParams
{
public:
    /// Throws std::invalid_argument unless 0 < delta < 1.
    explicit CombParams(double delta);

    /// Parameters with alpha = 1/(1 + delta) given.
    static CombParams from_alpha(double alpha);

    double delta() const { return delta_; }
    double s() const { return s_; }
    double alpha() const { return alpha_; }

private:
    double delta_;
    double s_;
    double alpha_;
};

/// (2 pi)^{-2 delta} Gamma(2 delta) / (|Gamma(-delta)| Gamma(delta)).
double b1(double delta);

/// -2 b1(delta) zeta(2(1+delta)) times the residue-class factor of q mod 4.
double coefficient_a(std::int64_t q, double delta);

/// The three values of coefficient_a, indexed by residue class.
struct CoefficientTable
{
    double odd = 0.0;
    double two_mod_four = 0.0;
    double zero_mod_four = 0.0;

    static CoefficientTable compute(double delta);
    double operator()(std::int64_t q) const
    {
        if (q % 2 != 0) return odd;
        return q % 4 == 2 ? two_mod_four : zero_mod_four;
    }
};

/// Total mass of the untruncated measure over one period:
/// sum over q of phi(q) a_q / q^s = -2^{3-s} b1 zeta(s - 1).
double total_mass(const CombParams &params);

struct HValue;

struct Atom
{
    Fraction location;
    double weight = 0.0;
};

/// Atoms accepted by build_measure before it refuses to allocate.
inline constexpr std::int64_t kDefaultAtomCap = 100'000'000;

/// Truncation of the rational-atom measure: one atom a_q / q^s at each reduced
/// p/q with q <= qmax in the window, sorted by location. Immutable.
class RationalMeasure
{
public:
    RationalMeasure(CombParams params, std::int64_t qmax, Window window, std::vector<Atom> atoms);

    const CombParams &params() const { return params_; }
    std::int64_t qmax() const { return qmax_; }
    const Window &window() const { return window_; }
    std::span<const Atom> atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    /// Atoms whose denominator satisfies the predicate, same params and window.
    template <typename Pred>
    RationalMeasure filter(Pred &&keep) const
    {
        std::vector<Atom> kept;
        for (const Atom &a : atoms_)
            if (keep(a)) kept.push_back(a);
        return RationalMeasure(params_, qmax_, window_, std::move(kept));
    }

    /// Sum of |weight|.
    double total_variation() const;
    /// Sum of weight.
    double mass() const;

private:
    CombParams params_;
    std::int64_t qmax_;
    Window window_;
    std::vector<Atom> atoms_;
    std::vector<double> prefix_;  // prefix_[i] = sum of the first i weights

    friend HValue eval_H(const RationalMeasure &, double);
};

/// Throws std::invalid_argument for qmax < 1 and std::length_error when the
/// expected atom count exceeds `atom_cap`.
RationalMeasure build_measure(const CombParams &params, std::int64_t qmax, const Window &window,
                              std::int64_t atom_cap = kDefaultAtomCap);
/// Same, with the coefficient table supplied by the caller.
RationalMeasure build_measure(const CombParams &params, std::int64_t qmax, const Window &window,
                              const CoefficientTable &coeff, std::int64_t atom_cap = kDefaultAtomCap);

/// Result of evaluating the primitive H; `clamped` is set when t was outside the window.
struct HValue
{
    double value = 0.0;
    bool clamped = false;
};

/// H(t) = sum of weights of atoms x with window.lo < x <= t. Right-continuous,
/// H(window.lo) = 0. Arguments outside the window closure are clamped.
HValue eval_H(const RationalMeasure &measure, double t);

/// CSV with header "p,q,location,weight".
void write_measure_csv(std::ostream &out, const RationalMeasure &measure);

} // namespace multifrac
