#include "landaulab/landau_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace landaulab {

MagneticModel make_model(int n, std::vector<double> a, double V) {
    if (n < 1) throw std::invalid_argument("model: n must be >= 1");
    if (static_cast<int>(a.size()) != n)
        throw DimensionMismatch("model: expected n magnetic eigenvalues");
    double prev = 0.0;
    for (double aj : a) {
        if (!std::isfinite(aj) || aj <= 0.0)
            throw std::invalid_argument("model: magnetic eigenvalues must be positive and finite");
        if (aj < prev)
            throw std::invalid_argument("model: magnetic eigenvalues must be nondecreasing");
        prev = aj;
    }
    if (!std::isfinite(V)) throw std::invalid_argument("model: V must be finite");
    return MagneticModel{n, std::move(a), V};
}

double default_margin(const MagneticModel& model) {
    return 1e-8 * *std::max_element(model.a.begin(), model.a.end());
}

double landau_level(const MagneticModel& model, const MultiIndex& k) {
    if (static_cast<int>(k.size()) != model.n)
        throw DimensionMismatch("landau_level: multi-index length != n");
    double lvl = 0.0;
    for (int j = 0; j < model.n; ++j) {
        if (k[j] < 0) throw std::invalid_argument("landau_level: negative index entry");
        lvl += (2 * k[j] + 1) * model.a[j];
    }
    return lvl + model.V;
}

double lowest_level(const MagneticModel& model) {
    return std::accumulate(model.a.begin(), model.a.end(), model.V);
}

namespace {

void enumerate_rec(const MagneticModel& model, double cutoff, int j, double partial,
                   double tail_min, MultiIndex& k, LevelSet& out) {
    if (j == model.n) {
        out.indices.push_back(k);
        out.levels.push_back(partial);
        return;
    }
    // tail_min = minimal contribution of components > j
    double new_tail = tail_min - model.a[j];
    for (int kj = 0;; ++kj) {
        double contrib = (2 * kj + 1) * model.a[j];
        if (partial + contrib + new_tail > cutoff) break;
        k[j] = kj;
        enumerate_rec(model, cutoff, j + 1, partial + contrib, new_tail, k, out);
    }
    k[j] = 0;
}

} // namespace

LevelSet enumerate_levels(const MagneticModel& model, double cutoff) {
    LevelSet out;
    out.n = model.n;
    double tail_min = std::accumulate(model.a.begin(), model.a.end(), 0.0);
    MultiIndex k(model.n, 0);
    enumerate_rec(model, cutoff, 0, model.V, tail_min, k, out);

    std::vector<std::size_t> order(out.indices.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (out.levels[i] != out.levels[j]) return out.levels[i] < out.levels[j];
        return out.indices[i] < out.indices[j];
    });
    LevelSet sorted;
    sorted.n = model.n;
    sorted.indices.reserve(order.size());
    sorted.levels.reserve(order.size());
    for (std::size_t i : order) {
        sorted.indices.push_back(out.indices[i]);
        sorted.levels.push_back(out.levels[i]);
    }
    return sorted;
}

LevelSet validate_window(const MagneticModel& model, const SpectralWindow& window) {
    if (!(window.alpha < window.beta))
        throw std::invalid_argument("window: alpha must be < beta");
    double margin = window.margin > 0.0 ? window.margin : default_margin(model);

    // Endpoint distance to the level set; levels just above beta matter too,
    // so enumerate up to beta + margin.
    LevelSet nearby = enumerate_levels(model, window.beta + margin);
    for (double lvl : nearby.levels) {
        if (std::abs(lvl - window.alpha) < margin)
            throw EndpointOnLevel("window endpoint alpha within margin of level " +
                                  std::to_string(lvl));
        if (std::abs(lvl - window.beta) < margin)
            throw EndpointOnLevel("window endpoint beta within margin of level " +
                                  std::to_string(lvl));
    }

    LevelSet inside;
    inside.n = model.n;
    for (std::size_t i = 0; i < nearby.size(); ++i) {
        if (nearby.levels[i] > window.alpha && nearby.levels[i] < window.beta) {
            inside.indices.push_back(nearby.indices[i]);
            inside.levels.push_back(nearby.levels[i]);
        }
    }
    return inside;
}

SpectralWindow pure_window(int N, int n) {
    return SpectralWindow{static_cast<double>(2 * N + n - 1),
                          static_cast<double>(2 * N + n + 1), 1e-8};
}

SpectralWindow full_window(int N, int n) {
    return SpectralWindow{static_cast<double>(n - 1),
                          static_cast<double>(2 * N + n + 1), 1e-8};
}

} // namespace landaulab
