#include "landaulab/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "landaulab/linalg.hpp"

namespace landaulab {

DiscretizedKernel nystrom_restrict(const KernelFn& kernel, int dim, double radius, double h,
                                   long max_nodes) {
    if (h <= 0.0 || radius <= 0.0)
        throw std::invalid_argument("nystrom_restrict: radius and step must be positive");
    int per_dim = std::max(1, static_cast<int>(std::lround(2.0 * radius / h)));
    long total = 1;
    for (int d = 0; d < dim; ++d) {
        total *= per_dim;
        if (total > max_nodes)
            throw std::invalid_argument("nystrom_restrict: node budget exceeded");
    }
    double step = 2.0 * radius / per_dim;
    double cell = std::pow(step, dim);

    DiscretizedKernel out;
    out.grid_step = step;
    out.nodes.resize(total, dim);
    out.weights = Eigen::VectorXd::Constant(total, cell);
    for (long i = 0; i < total; ++i) {
        long rem = i;
        for (int d = 0; d < dim; ++d) {
            int idx = static_cast<int>(rem % per_dim);
            rem /= per_dim;
            out.nodes(i, d) = -radius + (idx + 0.5) * step;
        }
    }

    out.matrix.resize(total, total);
    std::vector<double> xi(dim), xj(dim);
    for (long i = 0; i < total; ++i) {
        for (int d = 0; d < dim; ++d) xi[d] = out.nodes(i, d);
        for (long j = i; j < total; ++j) {
            for (int d = 0; d < dim; ++d) xj[d] = out.nodes(j, d);
            std::complex<double> v = cell * kernel(xi, xj);
            out.matrix(i, j) = v;
            out.matrix(j, i) = std::conj(v);
        }
    }
    return out;
}

SpectralReport validate_kernel(const DiscretizedKernel& kernel, double tol) {
    const long n = kernel.matrix.rows();
    double herm_defect = (kernel.matrix - kernel.matrix.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-10)
        throw std::invalid_argument("validate_kernel: matrix not Hermitian, defect " +
                                    std::to_string(herm_defect));
    Eigen::MatrixXcd H = 0.5 * (kernel.matrix + kernel.matrix.adjoint());
    HermitianEig eig = hermitian_eig(std::move(H));

    SpectralReport report;
    report.raw_eigenvalues = eig.values;
    report.eigenvalues = eig.values;
    report.eigenvectors = std::move(eig.vectors);
    for (long i = 0; i < n; ++i) {
        double lam = report.eigenvalues[i];
        if (lam < -tol || lam > 1.0 + tol) throw SpectrumOutOfRange(lam);
        report.eigenvalues[i] = std::clamp(lam, 0.0, 1.0);
    }
    return report;
}

namespace {

int draw_categorical(const Eigen::VectorXd& s, double total, CounterRng& rng) {
    double x = rng.next_double() * total;
    double acc = 0.0;
    int last_positive = -1;
    for (int i = 0; i < s.size(); ++i) {
        double si = std::max(s[i], 0.0);
        if (si > 0.0) last_positive = i;
        acc += si;
        if (x < acc) return i;
    }
    return last_positive; // rounding fell off the end
}

} // namespace

PointSample sample_projection_dpp(const Eigen::MatrixXcd& U0, CounterRng& rng) {
    const int rank = static_cast<int>(U0.cols());
    if (rank < 1) throw std::invalid_argument("sample_projection_dpp: rank must be >= 1");

    Eigen::MatrixXcd U = U0;
    Eigen::VectorXd s = U.rowwise().squaredNorm();

    PointSample sample;
    sample.seed = rng.seed();
    sample.indices.reserve(rank);

    for (int t = rank; t >= 1; --t) {
        auto Ut = U.leftCols(t); // active frame; dropped columns are stale
        int pick = -1;
        double norm2 = 0.0;
        for (int attempt = 0; attempt < 100; ++attempt) {
            int i = draw_categorical(s, static_cast<double>(t), rng);
            if (i < 0) throw std::runtime_error("sample_projection_dpp: mass vanished");
            norm2 = Ut.row(i).squaredNorm();
            if (norm2 >= 1e-12) {
                pick = i;
                break;
            }
            ++sample.resample_events; // numerical rank loss at this row, redraw
        }
        if (pick < 0) throw std::runtime_error("sample_projection_dpp: persistent rank loss");
        sample.indices.push_back(pick);
        if (t == 1) break;

        // Deflate against the selected row with a Householder rotation in
        // coefficient space: the retained t-1 columns stay exactly orthonormal.
        Eigen::VectorXcd c = Ut.row(pick).adjoint() / std::sqrt(norm2);
        std::complex<double> sigma = c[t - 1];
        std::complex<double> phase =
            std::abs(sigma) > 0.0 ? sigma / std::abs(sigma) : std::complex<double>(1.0, 0.0);
        Eigen::VectorXcd v = c;
        v[t - 1] += phase;
        double vnorm2 = v.squaredNorm();

        Eigen::VectorXcd w = Ut * c; // the selected (normalized) direction
        Eigen::VectorXcd Uv = w + phase * U.col(t - 1);
        Ut.noalias() -= Uv * ((2.0 / vnorm2) * v.adjoint());

        s -= w.cwiseAbs2();
        if (t % 16 == 0) s = U.leftCols(t - 1).rowwise().squaredNorm(); // shed drift
    }

    std::sort(sample.indices.begin(), sample.indices.end());
    if (std::adjacent_find(sample.indices.begin(), sample.indices.end()) !=
        sample.indices.end())
        throw std::runtime_error("sample_projection_dpp: repeated index");
    return sample;
}

PointSample sample_general_dpp(const SpectralReport& spectrum, CounterRng& rng) {
    const long n = spectrum.eigenvectors.rows();
    std::vector<int> selected;
    for (long j = 0; j < spectrum.eigenvalues.size(); ++j) {
        double lam = spectrum.eigenvalues[j];
        if (lam >= 1.0 || (lam > 0.0 && rng.next_double() < lam)) selected.push_back(j);
    }
    if (selected.empty()) {
        PointSample empty;
        empty.seed = rng.seed();
        return empty;
    }
    Eigen::MatrixXcd U(n, selected.size());
    for (std::size_t c = 0; c < selected.size(); ++c) U.col(c) = spectrum.eigenvectors.col(selected[c]);
    return sample_projection_dpp(U, rng);
}

double correlation_function(const Eigen::MatrixXcd& kernel_values) {
    std::complex<double> det = kernel_values.determinant();
    if (det.real() < -1e-12)
        throw std::runtime_error("correlation_function: negative determinant " +
                                 std::to_string(det.real()));
    return std::max(det.real(), 0.0);
}

namespace {

double chain_prob_rec(const Eigen::MatrixXcd& U, std::vector<int> remaining) {
    const int t = static_cast<int>(U.cols());
    if (t == 0) return 1.0;
    double total = 0.0;
    for (std::size_t pos = 0; pos < remaining.size(); ++pos) {
        int i = remaining[pos];
        double norm2 = U.row(i).squaredNorm();
        if (norm2 < 1e-300) continue;
        double prob = norm2 / t;

        Eigen::VectorXcd c = U.row(i).adjoint() / std::sqrt(norm2);
        std::complex<double> sigma = c[t - 1];
        std::complex<double> phase =
            std::abs(sigma) > 0.0 ? sigma / std::abs(sigma) : std::complex<double>(1.0, 0.0);
        Eigen::VectorXcd v = c;
        v[t - 1] += phase;
        Eigen::MatrixXcd Ud = U;
        Eigen::VectorXcd Uv = U * v;
        Ud.noalias() -= Uv * (2.0 / v.squaredNorm()) * v.adjoint();
        Ud.conservativeResize(U.rows(), t - 1);

        std::vector<int> rest = remaining;
        rest.erase(rest.begin() + pos);
        total += prob * chain_prob_rec(Ud, std::move(rest));
    }
    return total;
}

} // namespace

double chain_rule_configuration_probability(const Eigen::MatrixXcd& U,
                                            std::span<const int> configuration) {
    if (static_cast<long>(configuration.size()) != U.cols())
        throw std::invalid_argument("configuration size must equal rank");
    return chain_prob_rec(U, std::vector<int>(configuration.begin(), configuration.end()));
}

} // namespace landaulab
