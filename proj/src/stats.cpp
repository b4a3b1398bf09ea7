#include "landaulab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace landaulab {

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double linear_statistic(const TestFunction& f, const std::vector<FlatPoint>& points) {
    std::vector<double> terms;
    terms.reserve(points.size());
    for (const FlatPoint& x : points) terms.push_back(f.f(x));
    return pairwise_sum(terms);
}

StatRun summarize(std::vector<double> values, std::uint64_t base_seed) {
    const int n = static_cast<int>(values.size());
    if (n < 2) throw std::invalid_argument("StatRun needs at least 2 samples");
    StatRun run;
    run.n_samples = n;
    run.base_seed = base_seed;
    run.mean = pairwise_sum(values) / n;

    std::vector<double> d2(n), d3(n), d4(n);
    for (int i = 0; i < n; ++i) {
        double d = values[i] - run.mean;
        d2[i] = d * d;
        d3[i] = d2[i] * d;
        d4[i] = d2[i] * d2[i];
    }
    double m2 = pairwise_sum(d2) / n;
    double m4 = pairwise_sum(d4) / n;
    run.variance = pairwise_sum(d2) / (n - 1);
    run.se_mean = std::sqrt(run.variance / n);
    // SE of the sample variance from the fourth central moment
    double var_of_var = (m4 - (n - 3.0) / (n - 1.0) * m2 * m2) / n;
    run.se_variance = var_of_var > 0.0 ? std::sqrt(var_of_var) : 0.0;
    run.values = std::move(values);
    return run;
}

StatRun mc_moments(const SampleFn& sampler, int n_samples, std::uint64_t base_seed) {
    if (n_samples < 2) throw std::invalid_argument("mc_moments: n_samples must be >= 2");
    std::vector<double> values(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        CounterRng rng(stream_seed(base_seed, static_cast<std::uint64_t>(i)));
        values[i] = sampler(rng);
    }
    return summarize(std::move(values), base_seed);
}

LlnReport lln_check(const StatRun& run, double n_points, double target) {
    LlnReport rep;
    rep.target = target;
    rep.ratio_mean = run.mean / n_points;
    rep.se = run.se_mean / n_points;
    rep.z = rep.se > 0.0 ? (rep.ratio_mean - target) / rep.se : 0.0;

    // Chebyshev: P(|Y - mean| > eps) <= Var/eps^2; check the empirical tail
    // at eps = 2 sd against the 1/4 bound (with a slack for sampling noise).
    double sd = std::sqrt(run.variance);
    if (sd > 0.0) {
        long tail = 0;
        for (double v : run.values)
            if (std::abs(v - run.mean) > 2.0 * sd) ++tail;
        double frac = static_cast<double>(tail) / run.n_samples;
        rep.chebyshev_ok = frac <= 0.25 + 4.0 / std::sqrt(run.n_samples);
    } else {
        rep.chebyshev_ok = true; // degenerate: all mass at the mean
    }
    return rep;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_distance_to_normal(std::span<const double> standardized) {
    std::vector<double> sorted(standardized.begin(), standardized.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double cdf = normal_cdf(sorted[i]);
        d = std::max(d, std::abs((i + 1) / n - cdf));
        d = std::max(d, std::abs(i / n - cdf));
    }
    return d;
}

CltReport clt_check(const StatRun& run, double predicted_variance) {
    if (predicted_variance <= 0.0)
        throw std::invalid_argument("clt_check: predicted variance must be positive");
    if (run.n_samples < 1000)
        throw std::invalid_argument("clt_check: need at least 1000 samples");
    double sd = std::sqrt(predicted_variance);

    std::vector<double> z(run.values.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (run.values[i] - run.mean) / sd;

    const int n = run.n_samples;
    std::vector<double> z2(n), z3(n), z4(n);
    for (int i = 0; i < n; ++i) {
        z2[i] = z[i] * z[i];
        z3[i] = z2[i] * z[i];
        z4[i] = z2[i] * z2[i];
    }
    double m2 = pairwise_sum(z2) / n;
    double m3 = pairwise_sum(z3) / n;
    double m4 = pairwise_sum(z4) / n;

    CltReport rep;
    rep.ks = ks_distance_to_normal(z);
    rep.skewness = m3 / std::pow(m2, 1.5);
    rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    rep.var_ratio = run.variance / predicted_variance;
    // asymptotic Kolmogorov critical values, valid at n >= 1000
    rep.ks_critical_1pct = 1.63 / std::sqrt(static_cast<double>(n));
    rep.ks_critical_5pct = 1.36 / std::sqrt(static_cast<double>(n));
    return rep;
}

} // namespace landaulab
