#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "landaulab/landau_model.hpp"

namespace landaulab {

// Point in R^{2n}; complex pairs are z_j = Z[2j] + i Z[2j+1].
using FlatPoint = std::vector<double>;

// C^1 test function with compact support and an analytic gradient. The
// support is contained in the box [-support_radius, support_radius]^{2n}.
struct TestFunction {
    std::string name;
    double support_radius = 1.0;
    std::function<double(std::span<const double>)> f;
    std::function<void(std::span<const double>, std::span<double>)> grad;
};

// Named families: "gaussian-bump", "cosine-bump", "tensor-bump".
// params: [radius] or [radius, amplitude].
TestFunction make_test_function(const std::string& name, std::span<const double> params,
                                int dim2n);

// Central finite differences against the analytic gradient; returns the worst
// relative deviation over a probe grid. Guard threshold is 1e-6.
double gradient_check(const TestFunction& f, int dim2n, double h = 1e-5);

// Schwartz kernel of the projection onto a single Landau level.
std::complex<double> eigenkernel(const MagneticModel& model, const MultiIndex& k,
                                 std::span<const double> Z, std::span<const double> Zp);

// Sum of eigenkernels over the level set (zero kernel when the set is empty).
std::complex<double> window_kernel(const MagneticModel& model, const LevelSet& levels,
                                   std::span<const double> Z, std::span<const double> Zp);

// p^n * window_kernel(sqrt(p) Z, sqrt(p) Z'); exact at every p in the flat
// model since rescaling conjugates the model operator at tensor power p to
// the one at power 1.
std::complex<double> scaled_kernel(const MagneticModel& model, const LevelSet& levels,
                                   int p, std::span<const double> Z,
                                   std::span<const double> Zp);

// Modulus of the window kernel as a function of the difference Z - Z' only.
double window_kernel_modulus(const MagneticModel& model, const LevelSet& levels,
                             std::span<const double> diff);

// p^n (2pi)^{-n} |K_I| int f Omega_B, Omega_B = (prod a_j) dZ.
double predicted_expectation(const MagneticModel& model, const LevelSet& levels,
                             const TestFunction& f, int p, double rel_tol = 1e-8);

// (1/4pi) (p/2pi)^{n-1} int |df|_I^2 Omega_B.
double predicted_variance(const MagneticModel& model, const LevelSet& levels,
                          const TestFunction& f, int p, double rel_tol = 1e-8);

struct VarianceQuadratureSpec {
    int outer_nodes = 129; // per dimension, odd
    int inner_nodes = 61;  // per dimension, odd
    double tail_eps = 1e-16;
};

// Brute-force variance (1/2) iint |K_p(x,y)|^2 (f(x)-f(y))^2 dx dy, reduced
// to an integral over u = x - y against the translation-invariant modulus
// profile, truncated where the Gaussian factor drops below tail_eps.
double exact_variance_quadrature(const MagneticModel& model, const LevelSet& levels,
                                 const TestFunction& f, int p,
                                 const VarianceQuadratureSpec& spec = {});

} // namespace landaulab
