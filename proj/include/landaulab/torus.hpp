#pragma once

#include <Eigen/Dense>
#include <vector>

#include "landaulab/dpp.hpp"
#include "landaulab/landau_model.hpp"
#include "landaulab/rng.hpp"

namespace landaulab {

// Unit-area torus, M x M sites, spacing h = 1/M, total flux 2 pi p
// (flux per plaquette phi = 2 pi p / M^2). Continuum field B = 2 pi, so the
// level set is {2 pi (2k+1) + V}.
struct TorusConfig {
    int M = 32;
    int p = 1;                  // p = 0 allowed only for field-free self tests
    std::vector<double> V_grid; // per-site potential; empty means zero
};

struct MagneticLattice {
    int M = 0;
    int p = 0;
    Eigen::MatrixXcd H; // M^2 x M^2, Hermitian
};

struct TorusSpectrum {
    int M = 0;
    int p = 0;
    Eigen::VectorXd eigenvalues;  // ascending
    Eigen::MatrixXcd eigenvectors; // columns, sum_i |v_i|^2 = 1
};

// Five-point magnetic Laplacian with Landau-gauge link phases:
// U_x = 1 except exp(-i phi M j_y) on the x-boundary link, U_y = exp(i phi j_x).
// H = (1/p) (1/h^2) (4 - hops) + V  (no 1/p factor when p = 0).
MagneticLattice build_lattice(const TorusConfig& config);

// Maximum plaquette deviation of the link-phase product from exp(i phi).
double plaquette_flux_defect(const MagneticLattice& lattice);

TorusSpectrum eigensolve(const MagneticLattice& lattice);

struct ClusterReport {
    struct Cluster {
        int k = 0;
        double center = 0.0;   // 2 pi (2k+1) + V
        double mean = 0.0;     // mean of assigned eigenvalues
        int count = 0;
        double mean_deviation = 0.0;
        double max_deviation = 0.0;
    };
    std::vector<Cluster> clusters;
    int unassigned = 0;
};

// Assigns each eigenvalue below K_max to the nearest level 2 pi (2k+1) + V;
// eigenvalues farther than `width` from every level are flagged unassigned.
ClusterReport cluster_spectrum(const TorusSpectrum& spectrum, double V, double K_max,
                               double width = 0.5 * 2.0 * 3.14159265358979323846);

// Exact eigenvalue count in the window. Throws when a window endpoint lies
// within `margin` of an eigenvalue.
int count_states(const TorusSpectrum& spectrum, const SpectralWindow& window);

// p^n (2pi)^{-n} |K_I| Vol_B(X) with n = 1, Vol_B = 2 pi: p * |K_I|.
int demailly_prediction(int p, int num_levels);

// Site kernel P(x,y) = sum_window psi(x) conj(psi(y)) with the site-weighted
// normalization h^2 sum |psi|^2 = 1, so the diagonal is ~ N_p.
struct SpectralProjection {
    int M = 0;
    int p = 0;
    int rank = 0;
    Eigen::MatrixXcd P;          // M^2 x M^2
    Eigen::MatrixXcd frame;      // M^2 x N_p eigenvector frame (unweighted columns)
};

SpectralProjection projection_kernel(const TorusSpectrum& spectrum,
                                     const SpectralWindow& window);

struct DecayFit {
    double rate = 0.0;   // c_p in |P| ~ e^{-c_p d}
    int points = 0;
    bool truncated = false; // fit range cut at the kernel noise floor
};

// Least-squares slope of log |P(x,y)| against torus distance over [2h, 1/4],
// diagonal excluded, pooled over a set of reference sites.
DecayFit decay_fit(const SpectralProjection& proj);

// |det(s_j(x_i))|^2 over the window's orthonormal basis, evaluated at site
// indices; equals det(P(x_i, x_j)).
double slater_density(const SpectralProjection& proj, std::span<const int> sites);

// Chain-rule sampling of the compact-case orthogonal ensemble; exactly N_p sites.
PointSample sample_torus_ensemble(const SpectralProjection& proj, CounterRng& rng);

// Fractional coordinates of a site index on the unit torus.
std::pair<double, double> site_position(int M, int site);

} // namespace landaulab
