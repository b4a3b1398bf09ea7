#include "landaulab/laguerre.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace landaulab {

double laguerre_eval(int k, double x) {
    if (k < 0) throw std::invalid_argument("laguerre_eval: negative degree");
    if (k > kMaxLaguerreDegree) throw std::invalid_argument("laguerre_eval: degree above guard");
    if (x < 0.0) throw std::invalid_argument("laguerre_eval: negative argument");
    if (k == 0) return 1.0;
    double lm1 = 1.0;     // L_0
    double l = 1.0 - x;   // L_1
    for (int j = 1; j < k; ++j) {
        double lp1 = ((2 * j + 1 - x) * l - j * lm1) / (j + 1);
        lm1 = l;
        l = lp1;
    }
    return l;
}

double weighted_product_integral(int k, int l, int moment) {
    if (k < 0 || l < 0) throw std::invalid_argument("weighted_product_integral: negative degree");
    if (moment == 0) return k == l ? 1.0 : 0.0;
    if (moment == 1) {
        if (k == l) return 2.0 * k + 1.0;
        if (k - 1 == l) return -static_cast<double>(k);
        if (k + 1 == l) return -static_cast<double>(k + 1);
        return 0.0;
    }
    throw std::invalid_argument("weighted_product_integral: moment must be 0 or 1");
}

long long pair_integral(const MultiIndex& k, const MultiIndex& kp, int axis) {
    const int n = static_cast<int>(k.size());
    if (static_cast<int>(kp.size()) != n)
        throw DimensionMismatch("pair_integral: index dimensions differ");
    if (axis < 0 || axis >= n) throw std::invalid_argument("pair_integral: axis out of range");
    long long result = 1;
    for (int j = 0; j < n; ++j) {
        if (j == axis) continue;
        if (k[j] != kp[j]) return 0;
    }
    int km = k[axis], kpm = kp[axis];
    if (km == kpm) result = 2ll * km + 1;
    else if (km - 1 == kpm) result = -static_cast<long long>(km);
    else if (km + 1 == kpm) result = -static_cast<long long>(km + 1);
    else result = 0;
    return result;
}

long long alpha_m(const LevelSet& levels, int axis) {
    if (levels.empty()) throw std::invalid_argument("alpha_m: empty level set");
    // I_m vanishes unless the pair coincides or differs by one in slot `axis`,
    // so only diagonal terms and +-e_axis neighbours are visited.
    std::set<MultiIndex> members(levels.indices.begin(), levels.indices.end());
    long long total = 0;
    for (const MultiIndex& k : levels.indices) {
        total += 2ll * k[axis] + 1; // I_m(k, k)
        MultiIndex up = k;
        up[axis] += 1;
        if (members.count(up)) {
            // pairs (up, k) and (k, up) each contribute -(k_axis + 1)
            total -= 2ll * (k[axis] + 1);
        }
    }
    return total;
}

std::vector<long long> alpha_all(const LevelSet& levels) {
    std::vector<long long> out(levels.n);
    for (int m = 0; m < levels.n; ++m) out[m] = alpha_m(levels, m);
    return out;
}

double df_I_norm_sq(const MagneticModel& model, const LevelSet& levels,
                    std::span<const double> grad) {
    if (static_cast<int>(grad.size()) != 2 * model.n)
        throw DimensionMismatch("df_I_norm_sq: gradient length != 2n");
    std::vector<long long> alpha = alpha_all(levels);
    double total = 0.0;
    for (int m = 0; m < model.n; ++m) {
        double g1 = grad[2 * m], g2 = grad[2 * m + 1];
        total += static_cast<double>(alpha[m]) / model.a[m] * (g1 * g1 + g2 * g2);
    }
    return total;
}

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

Rational poly_pure_alpha(int N, int n) {
    if (N < 0 || n < 1) throw std::invalid_argument("poly_pure_alpha: bad arguments");
    long long num = static_cast<long long>(2 * N + n) * binomial(N + n - 1, n - 1);
    long long den = n;
    long long g = std::gcd(num, den);
    return Rational{num / g, den / g};
}

long long poly_full_alpha(int N, int n) {
    if (N < 0 || n < 1) throw std::invalid_argument("poly_full_alpha: bad arguments");
    return binomial(N + n, n);
}

} // namespace landaulab
