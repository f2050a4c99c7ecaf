#include "multifrac/comb_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "multifrac/io.hpp"
#include "multifrac/special_functions.hpp"

namespace multifrac {

CombParams::CombParams(double delta) : delta_(delta), s_(2.0 * (1.0 + delta)), alpha_(0.0)
{
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("CombParams: delta must lie in (0, 1)");
    alpha_ = 2.0 / s_;
}

CombParams CombParams::from_alpha(double alpha)
{
    if (!(alpha > 0.5 && alpha < 1.0)) throw std::invalid_argument("CombParams: alpha must lie in (1/2, 1)");
    return CombParams(1.0 / alpha - 1.0);
}

double b1(double delta)
{
    if (!(delta > 0.0 && delta < 1.0)) throw std::domain_error("b1: delta must lie in (0, 1)");
    const double two_pi = 2.0 * std::numbers::pi;
    return std::pow(two_pi, -2.0 * delta) * gamma_fn(2.0 * delta) /
           (std::abs(gamma_fn(-delta)) * gamma_fn(delta));
}

CoefficientTable CoefficientTable::compute(double delta)
{
    const double base = -2.0 * b1(delta) * zeta_fn(2.0 * (1.0 + delta));
    CoefficientTable t;
    t.odd = base;
    t.two_mod_four = base * (-2.0 * (std::pow(2.0, 1.0 + 2.0 * delta) - 1.0));
    t.zero_mod_four = base * std::pow(2.0, 2.0 * (1.0 + delta));
    return t;
}

double coefficient_a(std::int64_t q, double delta)
{
    if (q < 1) throw std::invalid_argument("coefficient_a: q must be >= 1");
    return CoefficientTable::compute(delta)(q);
}

double total_mass(const CombParams &params)
{
    const double s = params.s();
    return -std::pow(2.0, 3.0 - s) * b1(params.delta()) * zeta_fn(s - 1.0);
}

RationalMeasure::RationalMeasure(CombParams params, std::int64_t qmax, Window window, std::vector<Atom> atoms)
    : params_(params), qmax_(qmax), window_(window), atoms_(std::move(atoms))
{
    prefix_.resize(atoms_.size() + 1, 0.0);
    for (std::size_t i = 0; i < atoms_.size(); ++i) prefix_[i + 1] = prefix_[i] + atoms_[i].weight;
}

double RationalMeasure::total_variation() const
{
    double sum = 0.0;
    for (const Atom &a : atoms_) sum += std::abs(a.weight);
    return sum;
}

double RationalMeasure::mass() const
{
    double sum = 0.0;
    for (const Atom &a : atoms_) sum += a.weight;
    return sum;
}

RationalMeasure build_measure(const CombParams &params, std::int64_t qmax, const Window &window,
                              std::int64_t atom_cap)
{
    return build_measure(params, qmax, window, CoefficientTable::compute(params.delta()), atom_cap);
}

RationalMeasure build_measure(const CombParams &params, std::int64_t qmax, const Window &window,
                              const CoefficientTable &coeff, std::int64_t atom_cap)
{
    if (qmax < 1) throw std::invalid_argument("build_measure: qmax must be >= 1");
    // Farey points of order qmax number about 3 qmax^2 / pi^2 per unit length.
    const double expected = 0.31 * static_cast<double>(qmax) * static_cast<double>(qmax) *
                                (window.length() + 1.0 / static_cast<double>(qmax)) +
                            static_cast<double>(qmax);
    if (expected > static_cast<double>(atom_cap))
        throw std::length_error("build_measure: qmax " + std::to_string(qmax) + " exceeds the atom cap");

    const auto fractions = enumerate_farey(qmax, window);
    std::vector<Atom> atoms;
    atoms.reserve(fractions.size());
    for (const Fraction &f : fractions) {
        const double q = static_cast<double>(f.q);
        atoms.push_back({f, coeff(f.q) * std::pow(q, -params.s())});
    }
    return RationalMeasure(params, qmax, window, std::move(atoms));
}

HValue eval_H(const RationalMeasure &measure, double t)
{
    const Window &w = measure.window();
    HValue out;
    if (t < w.lo) {
        t = w.lo;
        out.clamped = true;
    } else if (t > w.hi) {
        t = w.hi;
        out.clamped = true;
    }
    const auto atoms = measure.atoms();
    const auto first = std::upper_bound(atoms.begin(), atoms.end(), w.lo,
                                        [](double x, const Atom &a) { return x < a.location.value(); });
    const auto last = std::upper_bound(atoms.begin(), atoms.end(), t,
                                       [](double x, const Atom &a) { return x < a.location.value(); });
    if (last > first) {
        const auto i0 = static_cast<std::size_t>(first - atoms.begin());
        const auto i1 = static_cast<std::size_t>(last - atoms.begin());
        out.value = measure.prefix_[i1] - measure.prefix_[i0];
    }
    return out;
}

void write_measure_csv(std::ostream &out, const RationalMeasure &measure)
{
    out << "p,q,location,weight\n";
    for (const Atom &a : measure.atoms()) {
        out << a.location.p << ',' << a.location.q << ',' << format_double(a.location.value()) << ','
            << format_double(a.weight) << '\n';
    }
}

} // namespace multifrac
