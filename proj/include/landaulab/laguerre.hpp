#pragma once

#include <cstdint>
#include <span>

#include "landaulab/landau_model.hpp"

namespace landaulab {

// Guard for the upward recurrence; degrees beyond this are not needed anywhere
// in the library and are rejected rather than silently degraded.
inline constexpr int kMaxLaguerreDegree = 512;

// L_k(x) by the three-term recurrence (k+1)L_{k+1} = (2k+1-x)L_k - k L_{k-1}.
double laguerre_eval(int k, double x);

// closed form of  int_0^inf L_k L_l y^moment e^{-y} dy  for moment in {0,1}:
//   moment 0: delta_{kl}
//   moment 1: (2k+1) delta_{kl} - k delta_{k-1,l} - (k+1) delta_{k+1,l}
double weighted_product_integral(int k, int l, int moment);

// The integer pairing I_m: product over j != m of delta_{k_j,k'_j} times the
// first-moment factor in slot m. `axis` is 0-based.
long long pair_integral(const MultiIndex& k, const MultiIndex& kp, int axis);

// alpha_m = sum over ordered pairs in the level set of pair_integral.
// Only pairs differing by at most one unit in slot `axis` contribute.
long long alpha_m(const LevelSet& levels, int axis);

std::vector<long long> alpha_all(const LevelSet& levels);

// |df|_I^2 = sum_m (alpha_m / a_m) (g_{2m-1}^2 + g_{2m}^2)
double df_I_norm_sq(const MagneticModel& model, const LevelSet& levels,
                    std::span<const double> grad);

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

long long binomial(int n, int k);

// alpha_m for the pure window {|k| = N}, isotropic model: (2N+n)/n * C(N+n-1, n-1)
Rational poly_pure_alpha(int N, int n);

// alpha_m for the full window {|k| <= N}, isotropic model: C(N+n, n)
long long poly_full_alpha(int N, int n);

} // namespace landaulab
