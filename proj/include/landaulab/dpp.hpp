#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "landaulab/errors.hpp"
#include "landaulab/rng.hpp"

namespace landaulab {

// Quadrature discretization of a continuum kernel: nodes x_i (rows), cell
// measures w_i, and the weighted Hermitian matrix K~_ij = sqrt(w_i) K(x_i,x_j) sqrt(w_j).
struct DiscretizedKernel {
    Eigen::MatrixXd nodes;   // num_nodes x dim
    Eigen::VectorXd weights; // positive cell measures
    Eigen::MatrixXcd matrix; // Hermitian
    double grid_step = 0.0;  // recorded for bias reporting
};

struct SpectralReport {
    Eigen::VectorXd eigenvalues;  // ascending, clipped to [0,1]
    Eigen::VectorXd raw_eigenvalues;
    Eigen::MatrixXcd eigenvectors;
};

struct PointSample {
    std::vector<int> indices; // distinct node indices
    std::uint64_t seed = 0;
    int resample_events = 0;  // deflation rank-loss retries, logged per sample
};

using KernelFn =
    std::function<std::complex<double>(std::span<const double>, std::span<const double>)>;

// Midpoint-rule discretization on the centered box [-radius, radius]^dim with
// grid step h. Throws when the node count would exceed max_nodes.
DiscretizedKernel nystrom_restrict(const KernelFn& kernel, int dim, double radius, double h,
                                   long max_nodes = 20000);

// Eigendecomposition plus the Soshnikov admissibility check: eigenvalues must
// lie in [0,1] within `tol`, and are clipped to [0,1] on success.
SpectralReport validate_kernel(const DiscretizedKernel& kernel, double tol = 1e-6);

// Exact chain-rule (HKPV) sampling of the projection DPP with orthonormal
// frame U (num_nodes x rank, weight-included columns). Returns exactly
// rank(U) distinct indices.
PointSample sample_projection_dpp(const Eigen::MatrixXcd& U, CounterRng& rng);

// Bernoulli(lambda_j) eigenvector selection followed by projection sampling.
PointSample sample_general_dpp(const SpectralReport& spectrum, CounterRng& rng);

// det(K(x_i, x_j)) over the given unweighted kernel values; values below
// -1e-12 indicate a broken kernel and throw.
double correlation_function(const Eigen::MatrixXcd& kernel_values);

// Test support: the analytically-computed law of the chain-rule sampler,
// P(unordered configuration) summed over draw orders. Exponential in rank;
// intended for ground sets <= 12, rank <= 3.
double chain_rule_configuration_probability(const Eigen::MatrixXcd& U,
                                            std::span<const int> configuration);

} // namespace landaulab
