#include "landaulab/torus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "landaulab/linalg.hpp"

namespace landaulab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int site_index(int M, int jx, int jy) { return jx + M * jy; }

// Link phase for the hop (jx, jy) -> (jx+1, jy); wraparound correction on the
// boundary keeps every plaquette flux equal to phi with integer total flux.
std::complex<double> link_x(int M, double phi, int jx, int jy) {
    if (jx == M - 1) return std::exp(std::complex<double>(0.0, -phi * M * jy));
    return 1.0;
}

// Link phase for the hop (jx, jy) -> (jx, jy+1).
std::complex<double> link_y(int /*M*/, double phi, int jx, int /*jy*/) {
    return std::exp(std::complex<double>(0.0, phi * jx));
}

} // namespace

std::pair<double, double> site_position(int M, int site) {
    return {static_cast<double>(site % M) / M, static_cast<double>(site / M) / M};
}

MagneticLattice build_lattice(const TorusConfig& config) {
    const int M = config.M;
    if (M < 8) throw std::invalid_argument("torus: M must be >= 8");
    if (config.p < 0) throw std::invalid_argument("torus: p must be >= 0");
    if (config.p > 0 && config.p * 20 > M * M)
        throw std::invalid_argument("torus: p above continuum-regime guard M^2/20");
    if (!config.V_grid.empty() && static_cast<int>(config.V_grid.size()) != M * M)
        throw DimensionMismatch("torus: V_grid size must be M^2");

    const double phi = kTwoPi * config.p / (M * M);
    // (1/p)(1/h^2) with h = 1/M; for the field-free self-test p = 0 the 1/p
    // scaling is dropped.
    const double hop = config.p > 0 ? static_cast<double>(M) * M / config.p
                                    : static_cast<double>(M) * M;

    MagneticLattice lat;
    lat.M = M;
    lat.p = config.p;
    lat.H = Eigen::MatrixXcd::Zero(M * M, M * M);
    for (int jy = 0; jy < M; ++jy) {
        for (int jx = 0; jx < M; ++jx) {
            int s = site_index(M, jx, jy);
            double V = config.V_grid.empty() ? 0.0 : config.V_grid[s];
            lat.H(s, s) = 4.0 * hop + V;

            int sx = site_index(M, (jx + 1) % M, jy);
            std::complex<double> ux = -hop * link_x(M, phi, jx, jy);
            lat.H(sx, s) += ux;
            lat.H(s, sx) += std::conj(ux);

            int sy = site_index(M, jx, (jy + 1) % M);
            std::complex<double> uy = -hop * link_y(M, phi, jx, jy);
            lat.H(sy, s) += uy;
            lat.H(s, sy) += std::conj(uy);
        }
    }
    return lat;
}

double plaquette_flux_defect(const MagneticLattice& lat) {
    const int M = lat.M;
    const double phi = kTwoPi * lat.p / (M * M);
    std::complex<double> target = std::exp(std::complex<double>(0.0, phi));
    double worst = 0.0;
    for (int jy = 0; jy < M; ++jy) {
        for (int jx = 0; jx < M; ++jx) {
            std::complex<double> loop = link_x(M, phi, jx, jy) *
                                        link_y(M, phi, (jx + 1) % M, jy) *
                                        std::conj(link_x(M, phi, jx, (jy + 1) % M)) *
                                        std::conj(link_y(M, phi, jx, jy));
            worst = std::max(worst, std::abs(loop - target));
        }
    }
    return worst;
}

TorusSpectrum eigensolve(const MagneticLattice& lat) {
    HermitianEig eig = hermitian_eig(lat.H);
    TorusSpectrum out;
    out.M = lat.M;
    out.p = lat.p;
    out.eigenvalues = std::move(eig.values);
    out.eigenvectors = std::move(eig.vectors);
    return out;
}

ClusterReport cluster_spectrum(const TorusSpectrum& spectrum, double V, double K_max,
                               double width) {
    ClusterReport report;
    int k_top = static_cast<int>(std::ceil((K_max - V) / (2.0 * kTwoPi)));
    std::vector<std::vector<double>> assigned(k_top + 1);
    for (long i = 0; i < spectrum.eigenvalues.size(); ++i) {
        double e = spectrum.eigenvalues[i];
        if (e >= K_max) break;
        int k = static_cast<int>(std::lround(((e - V) / kTwoPi - 1.0) / 2.0));
        k = std::clamp(k, 0, k_top);
        double center = kTwoPi * (2 * k + 1) + V;
        if (std::abs(e - center) > width) {
            ++report.unassigned;
            continue;
        }
        assigned[k].push_back(e);
    }
    for (int k = 0; k <= k_top; ++k) {
        if (assigned[k].empty()) continue;
        ClusterReport::Cluster c;
        c.k = k;
        c.center = kTwoPi * (2 * k + 1) + V;
        c.count = static_cast<int>(assigned[k].size());
        for (double e : assigned[k]) {
            double dev = std::abs(e - c.center);
            c.mean += e;
            c.mean_deviation += dev;
            c.max_deviation = std::max(c.max_deviation, dev);
        }
        c.mean /= c.count;
        c.mean_deviation /= c.count;
        report.clusters.push_back(c);
    }
    return report;
}

int count_states(const TorusSpectrum& spectrum, const SpectralWindow& window) {
    double margin = window.margin > 0.0 ? window.margin : 1e-9;
    int count = 0;
    for (long i = 0; i < spectrum.eigenvalues.size(); ++i) {
        double e = spectrum.eigenvalues[i];
        if (std::abs(e - window.alpha) < margin || std::abs(e - window.beta) < margin)
            throw EndpointOnLevel("count_states: window endpoint inside a cluster near " +
                                  std::to_string(e));
        if (e > window.alpha && e < window.beta) ++count;
    }
    return count;
}

int demailly_prediction(int p, int num_levels) { return p * num_levels; }

SpectralProjection projection_kernel(const TorusSpectrum& spectrum,
                                     const SpectralWindow& window) {
    const int M = spectrum.M;
    std::vector<int> cols;
    for (long i = 0; i < spectrum.eigenvalues.size(); ++i) {
        double e = spectrum.eigenvalues[i];
        if (e > window.alpha && e < window.beta) cols.push_back(static_cast<int>(i));
    }
    SpectralProjection proj;
    proj.M = M;
    proj.p = spectrum.p;
    proj.rank = static_cast<int>(cols.size());
    proj.frame.resize(static_cast<long>(M) * M, proj.rank);
    for (int c = 0; c < proj.rank; ++c) proj.frame.col(c) = spectrum.eigenvectors.col(cols[c]);
    // site-weighted kernel: psi = v / h = v * M
    proj.P.noalias() = static_cast<double>(M) * M * (proj.frame * proj.frame.adjoint());
    return proj;
}

namespace {

double torus_distance(int M, int si, int sj) {
    int dx = std::abs(si % M - sj % M);
    int dy = std::abs(si / M - sj / M);
    dx = std::min(dx, M - dx);
    dy = std::min(dy, M - dy);
    return std::sqrt(static_cast<double>(dx) * dx + static_cast<double>(dy) * dy) / M;
}

} // namespace

DecayFit decay_fit(const SpectralProjection& proj) {
    const int M = proj.M;
    const double d_lo = 2.0 / M;
    const double d_hi = 0.25;
    const double floor = 1e-14 * proj.P.cwiseAbs().maxCoeff();

    DecayFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    long count = 0;
    // a handful of reference sites; the kernel is homogeneous up to gauge
    const int refs = 4;
    for (int r = 0; r < refs; ++r) {
        int si = (r * M / refs) * (M + 1);
        for (int sj = 0; sj < M * M; ++sj) {
            if (sj == si) continue; // diagonal is the maximum, not decay data
            double d = torus_distance(M, si, sj);
            if (d < d_lo || d > d_hi) continue;
            double mod = std::abs(proj.P(si, sj));
            if (mod < floor) {
                fit.truncated = true;
                continue;
            }
            double y = std::log(mod);
            sx += d;
            sy += y;
            sxx += d * d;
            sxy += d * y;
            ++count;
        }
    }
    if (count < 8) throw std::runtime_error("decay_fit: not enough points in fit range");
    double denom = count * sxx - sx * sx;
    double slope = (count * sxy - sx * sy) / denom;
    fit.rate = -slope;
    fit.points = static_cast<int>(count);
    return fit;
}

double slater_density(const SpectralProjection& proj, std::span<const int> sites) {
    if (static_cast<int>(sites.size()) != proj.rank)
        throw std::invalid_argument("slater_density: need exactly N_p points");
    Eigen::MatrixXcd S(proj.rank, proj.rank);
    for (int i = 0; i < proj.rank; ++i)
        for (int j = 0; j < proj.rank; ++j)
            S(i, j) = static_cast<double>(proj.M) * proj.frame(sites[i], j); // psi_j(x_i)
    return std::norm(S.determinant());
}

PointSample sample_torus_ensemble(const SpectralProjection& proj, CounterRng& rng) {
    return sample_projection_dpp(proj.frame, rng);
}

} // namespace landaulab
