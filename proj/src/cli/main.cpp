#include <chrono>
#include <iostream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <omp.h>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using namespace multifrac::cli;

std::string joined(const std::vector<std::string> &items)
{
    std::string out;
    for (const auto &s : items) out += (out.empty() ? "" : ",") + s;
    return out;
}

// Flat key=value lines in the config file are defaults for the selected command (and the
// global options); "[command]" sections are honoured too. Options already given on the
// command line or through the environment keep their values.
std::set<std::string> apply_config_file(CLI::App &app, CLI::App &sub, const std::string &path)
{
    std::set<std::string> applied;
    for (const CLI::ConfigItem &item : CLI::ConfigINI().from_file(path)) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        const bool flat = item.parents.empty() || item.parents.front() == "default";
        if (!flat && item.parents.front() != sub.get_name()) continue;
        CLI::Option *opt = sub.get_option_no_throw("--" + item.name);
        if (opt == nullptr && flat) opt = app.get_option_no_throw("--" + item.name);
        if (opt == nullptr || item.name == "config")
            throw CLI::ConfigError("unknown key '" + item.name + "' in " + path + " for command " + sub.get_name());
        if (opt->count() > 0) continue;
        opt->default_val(joined(item.inputs));
        applied.insert(item.name);
    }
    return applied;
}

nlohmann::ordered_json effective_config(const CLI::App &app, const CLI::App &sub)
{
    nlohmann::ordered_json cfg;
    for (const CLI::App *a : {&app, &sub}) {
        for (const CLI::Option *opt : a->get_options()) {
            const std::string name = opt->get_single_name();
            if (name.empty() || name == "help" || name == "config") continue;
            std::string value = opt->count() > 0 ? joined(opt->results()) : opt->get_default_str();
            if (value == "{}") value.clear();  // empty list
            cfg[name] = value;
        }
    }
    return cfg;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"multifrac: rational-atom measures, wavelet scaling exponents and WTMM spectra"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1, 1);
    app.fallthrough();

    int threads = 0;
    std::string out_dir = "multifrac_out";
    std::string config_path;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "worker threads, 0 = all available")
        ->envname("MULTIFRAC_THREADS")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--out-dir", out_dir, "directory for outputs and the run manifest");
    app.add_option("--config", config_path, "key=value file; command-line flags take precedence")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "seed recorded in the manifest (all built-in signals are deterministic)");

    BuildMeasureOptions bm;
    auto *build = app.add_subcommand("build-measure", "atoms a_q/q^s at reduced p/q, q <= qmax, as CSV");
    auto *bm_delta = build->add_option("--delta", bm.delta, "delta in (0, 1); required");
    build->add_option("--qmax", bm.qmax, "largest denominator")->check(CLI::Range(std::int64_t{1}, std::int64_t{1} << 40));
    build->add_option("--window-lo", bm.window_lo, "window [lo, hi)");
    build->add_option("--window-hi", bm.window_hi);

    ScalingOptions sc;
    auto *scaling = app.add_subcommand("scaling", "L^p norm sweep of P_N h and scaling-exponent fits");
    scaling->add_option("--delta", sc.delta);
    scaling->add_option("--p", sc.p, "comma-separated p values (default 0.25,0.5,2/s+-0.15,1,2,4)")->delimiter(',');
    scaling->add_option("--nmin", sc.nmin, "log2 of the smallest N");
    scaling->add_option("--nmax", sc.nmax, "log2 of the largest N");
    scaling->add_option("--wavelet", sc.wavelet)
        ->check(CLI::IsMember({"gaussian_d1", "gaussian_d2", "compact_bump_d1"}));
    scaling->add_option("--oversample", sc.oversample)->check(CLI::Range(4, 256));
    scaling->add_option("--c0", sc.c0, "0 = 0.5 (2 c1)^{-1/2}")->check(CLI::NonNegativeNumber);
    scaling->add_option("--qmax", sc.qmax, "0 = ceil(4 c0 sqrt(N_max))")->check(CLI::NonNegativeNumber);
    scaling->add_option("--fit-octaves", sc.fit_octaves, "scales used by the slope fit")->check(CLI::Range(2, 30));
    scaling->add_flag("--no-compensation", sc.no_compensation, "do not add the mass beyond qmax as a uniform level");

    WtmmOptions wt;
    auto *wtmm = app.add_subcommand("wtmm", "singularity spectrum by wavelet-transform modulus maxima");
    wtmm->add_option("--signal", wt.signal)
        ->check(CLI::IsMember({"hdelta", "riemann", "riemann_imag", "cusp", "weierstrass"}));
    wtmm->add_option("--alpha", wt.alpha, "hdelta: alpha = 1/(1 + delta)");
    wtmm->add_option("--h0", wt.h0, "cusp / weierstrass exponent");
    wtmm->add_option("--J", wt.J, "2^J samples")->check(CLI::Range(8, 20));
    wtmm->add_option("--wavelet", wt.wavelet, "auto = gaussian_d2 for hdelta, gaussian_d1 otherwise")
        ->check(CLI::IsMember({"auto", "gaussian_d1", "gaussian_d2"}));
    wtmm->add_option("--n-scales", wt.n_scales)->check(CLI::Range(4, 256));
    wtmm->add_option("--p-min", wt.p_min);
    wtmm->add_option("--p-max", wt.p_max);
    wtmm->add_option("--p-step", wt.p_step);
    wtmm->add_option("--h-min", wt.h_min, "nan = chosen from the signal");
    wtmm->add_option("--h-max", wt.h_max);
    wtmm->add_option("--n-terms", wt.n_terms, "riemann: series terms")->check(CLI::Range(1, 1 << 25));

    RiemannSampleOptions rs;
    auto *sample = app.add_subcommand("riemann-sample", "sample riemann_phi or H_delta on one period");
    sample->add_option("--signal", rs.signal)->check(CLI::IsMember({"riemann", "riemann_imag", "hdelta"}));
    sample->add_option("--J", rs.J)->check(CLI::Range(8, 20));
    sample->add_option("--n-terms", rs.n_terms)->check(CLI::Range(1, 1 << 25));
    sample->add_option("--delta", rs.delta, "hdelta only");
    sample->add_option("--format", rs.format)->check(CLI::IsMember({"csv", "binary"}));

    TailsOptions tl;
    auto *tails = app.add_subcommand("tails", "far-atom contribution on I = x0 +- c1/N, normalised");
    tails->add_option("--delta", tl.delta);
    tails->add_option("--wavelet", tl.wavelet)->check(CLI::IsMember({"gaussian_d1", "gaussian_d2", "compact_bump_d1"}));
    tails->add_option("--q0", tl.q0, "comma-separated base denominators")->delimiter(',');
    tails->add_option("--nmin", tl.nmin);
    tails->add_option("--nmax", tl.nmax);
    tails->add_option("--c0", tl.c0, "0 = wavelet default")->check(CLI::NonNegativeNumber);
    tails->add_option("--qmax-factor", tl.qmax_factor, "atoms up to factor * N");

    CountPairsOptions cp;
    auto *pairs = app.add_subcommand("count-pairs", "exhaustive count of close rational pairs in dyadic blocks");
    pairs->add_option("--N", cp.scale)->check(CLI::PositiveNumber);
    pairs->add_option("--lambda", cp.lambda)->check(CLI::PositiveNumber);
    pairs->add_option("--mu", cp.mu)->check(CLI::PositiveNumber);
    pairs->add_option("--c1", cp.c1, "0 = half-width of the first Gaussian derivative")
        ->check(CLI::NonNegativeNumber);

    VerifyOptions vf;
    auto *verify = app.add_subcommand("verify", "acceptance suite, one JSON line per criterion");
    verify->add_flag("--quick", vf.quick, "reduced scale, under a minute");
    verify->add_option("--inject-fault", vf.inject_fault, "corrupt a component on purpose")
        ->check(CLI::IsMember({"coefficients"}));

    auto usage_error = [&](const std::string &what) {
        std::cerr << "error: " << what << "\n\n";
        CLI::App *shown = &app;
        for (CLI::App *sub : app.get_subcommands({}))
            for (int i = 1; i < argc; ++i)
                if (sub->get_name() == argv[i]) shown = sub;
        std::cerr << shown->help();
        return kExitConfig;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return usage_error(e.what());
    }

    CLI::App *sub = app.get_subcommands().front();
    std::set<std::string> from_config;
    try {
        if (!config_path.empty()) from_config = apply_config_file(app, *sub, config_path);
    } catch (const CLI::Error &e) {
        return usage_error(e.what());
    }
    if (sub == build && bm_delta->count() == 0 && !from_config.contains("delta"))
        return usage_error("--delta is required");

    if (threads > 0) omp_set_num_threads(threads);
    const int used_threads = omp_get_max_threads();

    RunContext ctx;
    ctx.command = sub->get_name();
    ctx.out_dir = out_dir;
    ctx.config = effective_config(app, *sub);

    const auto t0 = std::chrono::steady_clock::now();
    int code = 0;
    try {
        if (sub == build) code = run_build_measure(bm, ctx);
        else if (sub == scaling) code = run_scaling(sc, ctx);
        else if (sub == wtmm) code = run_wtmm(wt, ctx);
        else if (sub == sample) code = run_riemann_sample(rs, ctx);
        else if (sub == tails) code = run_tails(tl, ctx);
        else if (sub == pairs) code = run_count_pairs(cp, ctx);
        else if (sub == verify) code = run_verify(vf, ctx);
    } catch (const std::invalid_argument &e) {
        code = usage_error(e.what());
    } catch (const std::length_error &e) {
        code = usage_error(e.what());
    } catch (const std::exception &e) {
        std::cerr << "error: " << ctx.command << ": " << e.what() << '\n';
        code = kExitFailure;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    try {
        write_manifest(ctx, std::vector<std::string>(argv, argv + argc), used_threads, seconds, code);
    } catch (const std::exception &e) {
        std::cerr << "error: cannot write manifest: " << e.what() << '\n';
        if (code == 0) code = kExitFailure;
    }
    return code;
}
