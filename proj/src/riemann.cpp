#include "multifrac/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "multifrac/io.hpp"

namespace multifrac {

namespace {

constexpr double pi = std::numbers::pi;

// n^2 t mod 2 in [-1, 1) without losing the low bits of n^2 t: n^2 is exact
// for n < 2^26 and fma recovers the rounding error of the product.
double reduced_phase(double n2, double t)
{
    const double prod = n2 * t;
    const double err = std::fma(n2, t, -prod);
    double r = std::fmod(prod, 2.0) + err;
    r = std::fmod(r, 2.0);
    if (r >= 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    return r;
}

} // namespace

std::complex<double> riemann_phi(double t, std::int64_t n_terms)
{
    if (n_terms < 1) throw std::invalid_argument("riemann_phi: n_terms must be >= 1");
    if (n_terms >= (std::int64_t{1} << 26)) throw std::invalid_argument("riemann_phi: n_terms too large");
    double re = 0.0, im = 0.0;
    // smallest terms first
    for (std::int64_t n = n_terms; n >= 1; --n) {
        const double n2 = static_cast<double>(n * n);
        const double theta = pi * reduced_phase(n2, t);
        const double scale = 1.0 / (pi * n2);
        // e^{i theta} / i = sin(theta) - i cos(theta)
        re += std::sin(theta) * scale;
        im -= std::cos(theta) * scale;
    }
    return {re, im};
}

std::complex<double> riemann_R(double t, std::int64_t n_terms)
{
    using namespace std::complex_literals;
    const std::complex<double> phi = riemann_phi(-4.0 * pi * t, n_terms);
    return (phi - 2.0 * pi * t + 1i * pi / 6.0) / (2.0i * pi);
}

double riemann_tail_bound(std::int64_t n_terms)
{
    return 1.0 / (pi * static_cast<double>(n_terms));
}

std::vector<std::complex<double>> riemann_phi_grid(std::int64_t length, std::int64_t n_terms)
{
    if (length < 1) throw std::invalid_argument("riemann_phi_grid: length must be >= 1");
    if (n_terms < 1) throw std::invalid_argument("riemann_phi_grid: n_terms must be >= 1");
    if (length > (std::int64_t{1} << 30)) throw std::invalid_argument("riemann_phi_grid: length too large");
    const auto ul = static_cast<std::size_t>(length);

    // pi n^2 t_j = 2 pi (n^2 j mod L) / L
    std::vector<double> sin_table(ul), cos_table(ul);
    for (std::size_t k = 0; k < ul; ++k) {
        const double a = 2.0 * pi * static_cast<double>(k) / static_cast<double>(length);
        sin_table[k] = std::sin(a);
        cos_table[k] = std::cos(a);
    }

    std::vector<double> re(ul, 0.0), im(ul, 0.0);
    constexpr std::int64_t kChunk = 1024;
    const std::int64_t chunks = (length + kChunk - 1) / kChunk;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < chunks; ++c) {
        const std::int64_t j0 = c * kChunk;
        const std::int64_t j1 = std::min(length, j0 + kChunk);
        for (std::int64_t n = n_terms; n >= 1; --n) {
            const std::int64_t step = (n % length) * (n % length) % length;
            const double scale = 1.0 / (pi * static_cast<double>(n) * static_cast<double>(n));
            std::int64_t k = step * j0 % length;
            for (std::int64_t j = j0; j < j1; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                const auto uk = static_cast<std::size_t>(k);
                re[uj] += sin_table[uk] * scale;
                im[uj] -= cos_table[uk] * scale;
                k += step;
                if (k >= length) k -= length;
            }
        }
    }

    std::vector<std::complex<double>> out(ul);
    for (std::size_t j = 0; j < ul; ++j) out[j] = {re[j], im[j]};
    return out;
}

SignalSource parse_signal_source(const std::string &name)
{
    if (name == "hdelta") return SignalSource::H_delta;
    if (name == "riemann") return SignalSource::Riemann_real;
    if (name == "riemann_imag") return SignalSource::Riemann_imag;
    throw std::invalid_argument("unknown signal '" + name + "'");
}

std::int64_t default_signal_qmax(int J)
{
    const auto q = static_cast<std::int64_t>(std::ceil(16.0 * std::sqrt(std::ldexp(1.0, J))));
    return std::min<std::int64_t>(q, 8192);
}

double signal_period(SignalSource source)
{
    return source == SignalSource::H_delta ? 1.0 : 2.0;
}

namespace {

RationalMeasure signal_measure(int J, const SignalOptions &options)
{
    const std::int64_t qmax = options.qmax > 0 ? options.qmax : default_signal_qmax(J);
    return build_measure(CombParams(options.delta), qmax, Window::open_closed(0.0, 1.0));
}

} // namespace

double signal_period_increment(SignalSource source, const SignalOptions &options)
{
    return source == SignalSource::H_delta ? total_mass(CombParams(options.delta)) : 0.0;
}

std::vector<double> sample_signal(SignalSource source, int J, const SignalOptions &options)
{
    if (J < 8 || J > 20) throw std::invalid_argument("sample_signal: J must be in [8, 20]");
    const std::int64_t length = std::int64_t{1} << J;
    std::vector<double> out(static_cast<std::size_t>(length));

    if (source == SignalSource::H_delta) {
        const RationalMeasure m = signal_measure(J, options);
        const double drift = total_mass(m.params()) - m.mass();
        for (std::int64_t j = 0; j < length; ++j) {
            const double t = static_cast<double>(j) / static_cast<double>(length);
            out[static_cast<std::size_t>(j)] = eval_H(m, t).value + drift * t;
        }
        return out;
    }

    const auto phi = riemann_phi_grid(length, options.n_terms);
    for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = source == SignalSource::Riemann_real ? phi[j].real() : phi[j].imag();
    return out;
}

void write_signal_csv(std::ostream &out, std::span<const double> values, double period)
{
    out << "t,value\n";
    const double n = static_cast<double>(values.size());
    for (std::size_t j = 0; j < values.size(); ++j)
        out << format_double(period * static_cast<double>(j) / n) << ',' << format_double(values[j]) << '\n';
}

} // namespace multifrac
