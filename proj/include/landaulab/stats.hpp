#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "landaulab/model_kernel.hpp"
#include "landaulab/rng.hpp"

namespace landaulab {

struct StatRun {
    int n_samples = 0;
    std::vector<double> values; // per-sample linear statistics
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double se_mean = 0.0;
    double se_variance = 0.0; // fourth-moment formula
    std::uint64_t base_seed = 0;
};

// sum_i f(x_i) over the points of one sample (rows of `points`).
double linear_statistic(const TestFunction& f, const std::vector<FlatPoint>& points);

// One Monte Carlo run: sample i uses the stream seed base_seed + i, so the
// run is reproducible and insensitive to scheduling. Aggregation is a
// deterministic pairwise reduction.
using SampleFn = std::function<double(CounterRng&)>; // returns the statistic value

StatRun mc_moments(const SampleFn& sampler, int n_samples, std::uint64_t base_seed);

// Moment summaries recomputed from a frozen value list (used by report code).
StatRun summarize(std::vector<double> values, std::uint64_t base_seed);

struct LlnReport {
    double ratio_mean = 0.0; // mean(N_p[f]) / N_p
    double target = 0.0;     // (1/Vol_B) int f Omega_B
    double se = 0.0;
    double z = 0.0;
    bool chebyshev_ok = false; // empirical 2-sigma tail within the Chebyshev bound
};

LlnReport lln_check(const StatRun& run, double n_points, double target);

struct CltReport {
    double ks = 0.0;              // Kolmogorov-Smirnov distance to N(0,1)
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
    double var_ratio = 0.0;       // empirical / predicted
    double ks_critical_1pct = 0.0;
    double ks_critical_5pct = 0.0;
};

// Standardizes by the empirical mean and the *predicted* standard deviation.
CltReport clt_check(const StatRun& run, double predicted_variance);

double ks_distance_to_normal(std::span<const double> standardized);

double normal_cdf(double x);

// Deterministic pairwise sum (used everywhere aggregation order matters).
double pairwise_sum(std::span<const double> values);

} // namespace landaulab
