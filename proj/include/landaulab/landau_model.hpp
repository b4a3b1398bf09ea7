#pragma once

#include <vector>

#include "landaulab/errors.hpp"

namespace landaulab {

// Constant-coefficient magnetic model on R^{2n}: magnetic eigenvalues
// a_1 <= ... <= a_n (all positive) and a constant potential V.
struct MagneticModel {
    int n = 1;
    std::vector<double> a;
    double V = 0.0;
};

using MultiIndex = std::vector<int>;

struct SpectralWindow {
    double alpha = 0.0;
    double beta = 0.0;
    double margin = 0.0; // minimum allowed distance of endpoints to the level set
};

// All multi-indices whose Landau level falls in a window, with their levels,
// sorted ascending by level (lexicographic index order breaks ties).
struct LevelSet {
    int n = 0;
    std::vector<MultiIndex> indices;
    std::vector<double> levels;

    std::size_t size() const { return indices.size(); }
    bool empty() const { return indices.empty(); }
};

// Throws on invalid field data (n < 1, non-positive or decreasing a).
MagneticModel make_model(int n, std::vector<double> a, double V);

double default_margin(const MagneticModel& model);

// Lambda_k = sum_j (2 k_j + 1) a_j + V
double landau_level(const MagneticModel& model, const MultiIndex& k);

double lowest_level(const MagneticModel& model);

// All levels <= cutoff (inclusive), sorted ascending. Empty below Lambda_0.
LevelSet enumerate_levels(const MagneticModel& model, double cutoff);

// Checks both endpoints stay `margin` away from the level set, then returns
// the indices inside (alpha, beta). Throws EndpointOnLevel otherwise.
// An empty result is legal (empty process).
LevelSet validate_window(const MagneticModel& model, const SpectralWindow& window);

// Window (2N+n-1, 2N+n+1) around the N-th level for the isotropic model a == 1:
// the "pure" polyanalytic set {|k| = N}.
SpectralWindow pure_window(int N, int n);
// Window (n-1, 2N+n+1): the "full" polyanalytic set {|k| <= N}.
SpectralWindow full_window(int N, int n);

} // namespace landaulab
