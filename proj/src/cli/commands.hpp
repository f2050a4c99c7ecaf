#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace multifrac::cli {

/// Exit codes: 0 success, 1 failed assertion or pipeline error, 2 configuration error.
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Shared by every command: where outputs go and what the manifest records.
struct RunContext
{
    std::string command;
    std::filesystem::path out_dir;
    nlohmann::ordered_json config;  // effective value of every option
    std::vector<std::string> outputs;

    /// out_dir / name, created on first use, recorded in the manifest.
    std::filesystem::path output(const std::string &name);
};

struct BuildMeasureOptions
{
    double delta = 0.5;
    std::int64_t qmax = 64;
    double window_lo = 0.0;
    double window_hi = 1.0;
};

struct ScalingOptions
{
    double delta = 0.5;
    std::vector<double> p;  // empty: 0.25, 0.5, 1, 2, 4 and 2/s +- 0.15
    int nmin = 12;          // log2 of the smallest N
    int nmax = 18;
    std::string wavelet = "gaussian_d1";
    int oversample = 16;
    double c0 = 0.0;         // 0: wavelet default
    std::int64_t qmax = 0;   // 0: ceil(4 c0 sqrt(N_max))
    int fit_octaves = 5;
    bool no_compensation = false;
};

struct WtmmOptions
{
    std::string signal = "hdelta";
    double alpha = 0.7;
    double h0 = 0.5;
    int J = 13;
    std::string wavelet = "auto";  // gaussian_d2 for hdelta, gaussian_d1 otherwise
    int n_scales = 32;
    double p_min = -5.0;
    double p_max = 5.0;
    double p_step = 0.25;
    double h_min = NAN;  // NaN: chosen from the signal
    double h_max = NAN;
    std::int64_t n_terms = 100'000;
};

struct RiemannSampleOptions
{
    std::string signal = "riemann";
    int J = 13;
    std::int64_t n_terms = 100'000;
    double delta = 0.5;
    std::string format = "csv";
};

struct TailsOptions
{
    double delta = 0.5;
    std::string wavelet = "gaussian_d1";
    std::vector<std::int64_t> q0{1, 2, 3};
    int nmin = 10;
    int nmax = 16;
    double c0 = 0.0;
    std::int64_t qmax_factor = 2;  // atoms up to qmax_factor * N
};

struct CountPairsOptions
{
    std::int64_t scale = 1024;
    std::int64_t lambda = 16;
    std::int64_t mu = 16;
    double c1 = 0.0;  // 0: first Gaussian derivative
};

struct VerifyOptions
{
    bool quick = false;
    std::string inject_fault;  // "" or "coefficients"
};

int run_build_measure(const BuildMeasureOptions &opt, RunContext &ctx);
int run_scaling(const ScalingOptions &opt, RunContext &ctx);
int run_wtmm(const WtmmOptions &opt, RunContext &ctx);
int run_riemann_sample(const RiemannSampleOptions &opt, RunContext &ctx);
int run_tails(const TailsOptions &opt, RunContext &ctx);
int run_count_pairs(const CountPairsOptions &opt, RunContext &ctx);
int run_verify(const VerifyOptions &opt, RunContext &ctx);

/// <out_dir>/<command>.manifest.json: command line, effective config, versions, threads, wall time, outputs.
void write_manifest(const RunContext &ctx, const std::vector<std::string> &argv, int threads, double seconds,
                    int exit_code);

} // namespace multifrac::cli
