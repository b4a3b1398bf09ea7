#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <vector>

namespace landaulab {

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb,
                                   double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double h6 = (b - a) / 12.0;
    double left = h6 * (fa + 4.0 * flm + fm);
    double right = h6 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 24) {
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Tensor-product adaptive Simpson over the box [lo_i, hi_i], innermost
// dimension integrated first. `rel_tol` is split evenly across levels with a
// crude absolute-scale estimate from a coarse probe.
inline double integrate_box(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> lo, std::span<const double> hi,
                            double rel_tol) {
    const int dim = static_cast<int>(lo.size());
    std::vector<double> x(dim, 0.0);

    // coarse scale probe on a 5^dim lattice; a single center probe can land on
    // a zero of the integrand and collapse the tolerance
    double vol = 1.0;
    for (int d = 0; d < dim; ++d) vol *= hi[d] - lo[d];
    double peak = 0.0;
    long probes = 1;
    for (int d = 0; d < dim; ++d) probes *= 5;
    for (long i = 0; i < probes; ++i) {
        long rest = i;
        for (int d = 0; d < dim; ++d) {
            x[d] = lo[d] + (hi[d] - lo[d]) * (0.1 + 0.2 * (rest % 5));
            rest /= 5;
        }
        peak = std::max(peak, std::abs(f(x)));
    }
    double scale = peak * std::abs(vol) + 1e-12;

    std::function<double(int)> level = [&](int d) -> double {
        if (d == dim) return f(x);
        double tol = rel_tol * scale / std::pow(4.0, d);
        return adaptive_simpson([&](double t) { x[d] = t; return level(d + 1); },
                                lo[d], hi[d], tol);
    };
    return level(0);
}

} // namespace landaulab
