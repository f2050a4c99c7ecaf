#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>

#include "multifrac/acceptance.hpp"
#include "multifrac/comb_measure.hpp"
#include "multifrac/io.hpp"
#include "multifrac/number_theory.hpp"
#include "multifrac/riemann.hpp"
#include "multifrac/scaling.hpp"
#include "multifrac/wavelet.hpp"
#include "multifrac/wtmm.hpp"

namespace multifrac::cli {

namespace {

std::ofstream open_output(RunContext &ctx, const std::string &name, bool binary = false)
{
    const auto path = ctx.output(name);
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::vector<std::int64_t> dyadic(int lo, int hi)
{
    std::vector<std::int64_t> out;
    for (int j = lo; j <= hi; ++j) out.push_back(std::int64_t{1} << j);
    return out;
}

const char *verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

} // namespace

std::filesystem::path RunContext::output(const std::string &name)
{
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / name;
    if (std::find(outputs.begin(), outputs.end(), path.string()) == outputs.end()) outputs.push_back(path.string());
    return path;
}

int run_build_measure(const BuildMeasureOptions &opt, RunContext &ctx)
{
    const RationalMeasure m =
        build_measure(CombParams(opt.delta), opt.qmax, Window::closed_open(opt.window_lo, opt.window_hi));
    auto out = open_output(ctx, "measure.csv");
    write_measure_csv(out, m);
    std::printf("%zu atoms, total mass %s, total variation %s\n", m.size(), format_double(m.mass()).c_str(),
                format_double(m.total_variation()).c_str());
    return 0;
}

int run_scaling(const ScalingOptions &opt, RunContext &ctx)
{
    if (opt.nmax <= opt.nmin) throw std::invalid_argument("scaling needs nmax > nmin: one scale cannot fit a slope");
    if (opt.nmin < 2 || opt.nmax > 24) throw std::invalid_argument("scaling: N exponents must lie in [2, 24]");
    const CombParams params(opt.delta);
    const Wavelet w = Wavelet::make(parse_wavelet_kind(opt.wavelet));
    const double c0 = opt.c0 > 0.0 ? opt.c0 : w.default_c0();
    const auto n_grid = dyadic(opt.nmin, opt.nmax);
    const double crit = 2.0 / params.s();
    std::vector<double> p_grid = opt.p;
    if (p_grid.empty()) p_grid = {0.25, 0.5, crit - 0.15, crit + 0.15, 1.0, 2.0, 4.0};
    for (double p : p_grid)
        if (!(p > 0.0)) throw std::invalid_argument("scaling: every p must be positive");

    const std::int64_t qmax = opt.qmax > 0 ? opt.qmax : sweep_qmax(c0, n_grid.back());
    const RationalMeasure m = build_measure(params, qmax, Window::closed_open(0.0, 1.0));
    SweepOptions so;
    so.oversample = opt.oversample;
    so.fit_octaves = std::min<int>(opt.fit_octaves, static_cast<int>(n_grid.size()));
    so.compensate_truncation = !opt.no_compensation;
    const ScalingReport rep = norm_sweep(m, w, p_grid, n_grid, c0, so);

    {
        auto out = open_output(ctx, "scaling.csv");
        write_scaling_csv(out, rep);
    }

    std::printf("delta=%s s=%s qmax=%lld N=2^%d..2^%d, fit over the last %d scales\n",
                format_double(opt.delta).c_str(), format_double(params.s()).c_str(), static_cast<long long>(qmax),
                opt.nmin, opt.nmax, so.fit_octaves);
    std::printf("%8s %10s %10s %10s  %s\n", "p", "eta_fit", "eta_theory", "residual", "check");
    bool all_ok = true;
    const double half_s = params.s() / 2.0;
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        bool ok = true;
        std::string check;
        if (std::abs(p_grid[i] - crit) <= 0.05) {
            // critical regime: the slope is log-corrected, check the normalised norms instead
            std::vector<double> r;
            for (std::size_t j = 0; j < n_grid.size(); ++j) {
                const double n = static_cast<double>(n_grid[j]);
                r.push_back(rep.norms[i][j] * std::pow(n, half_s) / std::pow(std::log(n), half_s));
            }
            const auto [mn, mx] = std::minmax_element(r.begin(), r.end());
            ok = *mx / *mn <= 3.0;
            char buf[128];
            std::snprintf(buf, sizeof buf, "critical: norm N^{s/2}/(log N)^{s/2} max/min %.3f (<= 3)", *mx / *mn);
            check = buf;
        } else {
            const double dev = rep.eta_fit[i] - rep.eta_theory[i];
            ok = std::abs(dev) <= 0.05;
            char buf[64];
            std::snprintf(buf, sizeof buf, "|dev| %.4f (<= 0.05)", std::abs(dev));
            check = buf;
        }
        if (rep.flagged[i]) check += ", residual above threshold";
        all_ok = all_ok && ok;
        std::printf("%8.4f %10.5f %10.5f %10.5f  %s %s\n", p_grid[i], rep.eta_fit[i], rep.eta_theory[i],
                    rep.residual[i], verdict(ok), check.c_str());
    }

    std::vector<double> h_grid;
    for (int k = 0; k <= 200; ++k) h_grid.push_back(0.01 * k);
    std::vector<double> p_sorted = p_grid, eta_sorted;
    std::sort(p_sorted.begin(), p_sorted.end());
    for (double p : p_sorted)
        eta_sorted.push_back(rep.eta_fit[static_cast<std::size_t>(std::find(p_grid.begin(), p_grid.end(), p) -
                                                                  p_grid.begin())]);
    {
        auto out = open_output(ctx, "spectrum.csv");
        write_spectrum_csv(out, legendre_transform(p_sorted, eta_sorted, h_grid));
    }

    SvgPlot plot("Scaling exponents, delta=" + format_double(opt.delta), "p", "eta(p)");
    std::vector<double> pt, et;
    for (int k = 0; k <= 200; ++k) {
        pt.push_back(p_sorted.back() * (k + 1) / 201.0);
        et.push_back(theoretical_eta(pt.back(), params));
    }
    plot.add_line("min(sp/2, 1)", pt, et, "#444444");
    plot.add_markers("fitted", p_sorted, eta_sorted, "#d62728");
    auto svg = open_output(ctx, "eta.svg");
    plot.write(svg);

    std::printf("regime assertions: %s\n", verdict(all_ok));
    return all_ok ? 0 : kExitFailure;
}

int run_wtmm(const WtmmOptions &opt, RunContext &ctx)
{
    std::vector<double> x;
    WtmmConfig cfg;
    cfg.J = opt.J;
    cfg.n_scales = opt.n_scales;
    std::optional<CombParams> theory_params;
    SpectrumKind theory_kind = SpectrumKind::H_delta;
    double h_lo = 0.0, h_hi = 2.0;
    WaveletKind wavelet = WaveletKind::gaussian_d1;

    if (opt.signal == "hdelta") {
        const CombParams params = CombParams::from_alpha(opt.alpha);
        SignalOptions so;
        so.delta = params.delta();
        x = sample_signal(SignalSource::H_delta, opt.J, so);
        cfg.period_increment = signal_period_increment(SignalSource::H_delta, so);
        theory_params = params;
        h_hi = std::min(2.0, 1.0 / opt.alpha);
        wavelet = WaveletKind::gaussian_d2;
    } else if (opt.signal == "riemann" || opt.signal == "riemann_imag") {
        SignalOptions so;
        so.n_terms = opt.n_terms;
        x = sample_signal(parse_signal_source(opt.signal), opt.J, so);
        theory_params = CombParams(0.5);
        theory_kind = SpectrumKind::Riemann;
        h_lo = 0.4;
        h_hi = 0.8;
    } else if (opt.signal == "cusp") {
        if (opt.J < 8 || opt.J > 20) throw std::invalid_argument("wtmm: J must lie in [8, 20]");
        x = cusp_signal(opt.J, opt.h0);
    } else if (opt.signal == "weierstrass") {
        if (opt.J < 8 || opt.J > 20) throw std::invalid_argument("wtmm: J must lie in [8, 20]");
        x = weierstrass_signal(opt.J, opt.h0);
    } else {
        throw std::invalid_argument("unknown signal '" + opt.signal + "'");
    }
    cfg.wavelet = opt.wavelet == "auto" ? wavelet : parse_wavelet_kind(opt.wavelet);
    cfg.h_min = std::isnan(opt.h_min) ? h_lo : opt.h_min;
    cfg.h_max = std::isnan(opt.h_max) ? h_hi : opt.h_max;
    if (!(opt.p_step > 0.0) || opt.p_max < opt.p_min) throw std::invalid_argument("wtmm: bad p range");
    cfg.p_grid.clear();
    for (int k = 0;; ++k) {
        const double p = opt.p_min + k * opt.p_step;
        if (p > opt.p_max + 1e-12) break;
        cfg.p_grid.push_back(p);
    }

    const WtmmResult res = wtmm_spectrum(x, cfg);
    {
        auto out = open_output(ctx, "spectrum.csv");
        write_spectrum_csv(out, res.curve);
    }
    {
        auto out = open_output(ctx, "tau.csv");
        write_tau_csv(out, res);
    }

    SvgPlot plot("WTMM spectrum: " + opt.signal, "h", "D(h)");
    plot.add_line("estimated", res.curve.h, res.curve.D, "#d62728");
    double mad = std::nan("");
    if (theory_params) {
        const auto theory = [&](double h) { return theoretical_spectrum(h, *theory_params, theory_kind); };
        mad = mean_abs_deviation(res.curve, theory);
        std::vector<double> th;
        for (double h : res.curve.h) th.push_back(theory(h));
        plot.add_line("theory", res.curve.h, th, "#444444");
    }
    auto svg = open_output(ctx, "spectrum.svg");
    plot.write(svg);

    std::printf("signal %s, J=%d, wavelet %s, %zu maxima lines\n", opt.signal.c_str(), opt.J,
                to_string(cfg.wavelet).c_str(), res.line_count);
    std::printf("peak D %.4f at h %.4f; Legendre support [%.4f, %.4f]\n", res.peak_D, res.peak_h, res.support_min,
                res.support_max);
    if (theory_params) std::printf("mean |D - theory| over the theoretical support: %.4f\n", mad);
    return 0;
}

int run_riemann_sample(const RiemannSampleOptions &opt, RunContext &ctx)
{
    const SignalSource source = parse_signal_source(opt.signal);
    SignalOptions so;
    so.delta = opt.delta;
    so.n_terms = opt.n_terms;
    const auto values = sample_signal(source, opt.J, so);
    if (opt.format == "binary") {
        auto out = open_output(ctx, "signal.bin", true);
        write_binary_dump(out, 0, values);
    } else if (opt.format == "csv") {
        auto out = open_output(ctx, "signal.csv");
        write_signal_csv(out, values, signal_period(source));
    } else {
        throw std::invalid_argument("format must be csv or binary");
    }
    std::printf("%zu samples of %s over one period\n", values.size(), opt.signal.c_str());
    return 0;
}

int run_tails(const TailsOptions &opt, RunContext &ctx)
{
    if (opt.nmax < opt.nmin) throw std::invalid_argument("tails: nmax must be >= nmin");
    if (opt.nmin < 4 || opt.nmax > 20) throw std::invalid_argument("tails: N exponents must lie in [4, 20]");
    if (opt.qmax_factor < 1) throw std::invalid_argument("tails: qmax-factor must be >= 1");
    const CombParams params(opt.delta);
    const double s = params.s();
    const Wavelet w = Wavelet::make(parse_wavelet_kind(opt.wavelet));
    const double c0 = opt.c0 > 0.0 ? opt.c0 : w.default_c0();

    auto out = open_output(ctx, "tails.csv");
    out << "q0,N,tail,normalized\n";
    std::vector<double> all, sup_per_n;
    for (std::int64_t n : dyadic(opt.nmin, opt.nmax)) {
        double sup = 0.0;
        for (std::int64_t q0 : opt.q0) {
            if (q0 < 1) throw std::invalid_argument("tails: q0 must be >= 1");
            if (static_cast<double>(q0) > c0 * std::sqrt(static_cast<double>(n))) {
                std::printf("q0=%lld N=%lld skipped: q0 > c0 sqrt(N)\n", static_cast<long long>(q0),
                            static_cast<long long>(n));
                continue;
            }
            const Fraction base = q0 == 1 ? Fraction{0, 1} : Fraction{1, q0};
            const RationalMeasure m = tail_window_measure(params, w, base, n, opt.qmax_factor * n);
            const double e = tail_error(m, w, base, n, c0);
            const double v = e * std::pow(static_cast<double>(n), s - 1.0) / std::pow(static_cast<double>(q0), s - 2.0);
            out << q0 << ',' << n << ',' << format_double(e) << ',' << format_double(v) << '\n';
            std::printf("q0=%lld N=%lld tail %.4e normalised %.5f\n", static_cast<long long>(q0),
                        static_cast<long long>(n), e, v);
            all.push_back(v);
            sup = std::max(sup, v);
        }
        if (sup > 0.0) sup_per_n.push_back(sup);
    }
    if (!all.empty()) {
        const auto [amn, amx] = std::minmax_element(all.begin(), all.end());
        const auto [smn, smx] = std::minmax_element(sup_per_n.begin(), sup_per_n.end());
        std::printf("sup over q0 per N: max/min %.3f; all cells: max/min %.3f, constant %.4g\n", *smx / *smn,
                    *amx / *amn, *amx);
    }
    return 0;
}

int run_count_pairs(const CountPairsOptions &opt, RunContext &ctx)
{
    const double c1 = opt.c1 > 0.0 ? opt.c1 : Wavelet::make(WaveletKind::gaussian_d1).c1();
    const std::int64_t count = count_close_pairs(static_cast<double>(opt.scale), c1,
                                                 DenominatorBlock::dyadic(opt.lambda), DenominatorBlock::dyadic(opt.mu));
    const double lm = static_cast<double>(opt.lambda) * static_cast<double>(opt.mu);
    const double normalised = static_cast<double>(count) * static_cast<double>(opt.scale) / (lm * lm);
    const bool empty_regime = 2.0 * c1 * 4.0 * lm < static_cast<double>(opt.scale);
    auto out = open_output(ctx, "pairs.csv");
    out << "N,c1,lambda,mu,count,normalized\n"
        << opt.scale << ',' << format_double(c1) << ',' << opt.lambda << ',' << opt.mu << ',' << count << ','
        << format_double(normalised) << '\n';
    std::printf("count %lld, count N/(lambda mu)^2 = %.4f%s\n", static_cast<long long>(count), normalised,
                empty_regime ? " (emptiness regime: 2 c1 lambda_hi mu_hi < N)" : "");
    return empty_regime && count != 0 ? kExitFailure : 0;
}

int run_verify(const VerifyOptions &opt, RunContext &ctx)
{
    if (!opt.inject_fault.empty() && opt.inject_fault != "coefficients")
        throw std::invalid_argument("unknown fault '" + opt.inject_fault + "'");
    AcceptanceOptions ao;
    ao.quick = opt.quick;
    ao.inject_coefficient_fault = opt.inject_fault == "coefficients";

    auto log = open_output(ctx, "verify.jsonl");
    int failed = 0, total = 0;
    run_acceptance(ao, [&](const CriterionResult &r) {
        nlohmann::ordered_json j;
        j["criterion"] = r.id;
        j["title"] = r.title;
        j["passed"] = r.passed;
        j["seconds"] = r.seconds;
        j["detail"] = r.detail;
        nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
        for (const auto &[k, v] : r.metrics) metrics[k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr;
        j["metrics"] = metrics;
        const std::string line = j.dump();
        std::cout << line << std::endl;
        log << line << '\n';
        ++total;
        if (!r.passed) ++failed;
    });
    nlohmann::ordered_json summary{{"summary", true}, {"quick", opt.quick}, {"total", total}, {"failed", failed}};
    std::cout << summary.dump() << std::endl;
    log << summary.dump() << '\n';
    return failed == 0 ? 0 : kExitFailure;
}

void write_manifest(const RunContext &ctx, const std::vector<std::string> &argv, int threads, double seconds,
                    int exit_code)
{
    std::filesystem::create_directories(ctx.out_dir);
    nlohmann::ordered_json m;
    m["command"] = ctx.command;
    m["argv"] = argv;
    m["config"] = ctx.config;
    // the config block re-read as a key=value file reproduces the run
    std::string config_text;
    for (const auto &[k, v] : ctx.config.items())
        if (!(v.is_string() && v.get<std::string>().empty()))
            config_text += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    m["config_file"] = config_text;
    m["threads"] = threads;
    m["versions"] = {{"multifrac", MULTIFRAC_VERSION},
                     {"compiler", __VERSION__},
                     {"cplusplus", __cplusplus},
#ifdef _OPENMP
                     {"openmp", _OPENMP},
#endif
    };
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m["finished_utc"] = stamp;
    m["wall_seconds"] = seconds;
    m["exit_code"] = exit_code;
    m["outputs"] = ctx.outputs;
    std::ofstream out(ctx.out_dir / (ctx.command + ".manifest.json"));
    out << m.dump(2) << '\n';
}

} // namespace multifrac::cli
