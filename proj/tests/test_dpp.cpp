#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "landaulab/dpp.hpp"
#include "landaulab/model_kernel.hpp"

using namespace landaulab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

DiscretizedKernel diagonal_kernel(std::vector<double> lambdas) {
    const long n = static_cast<long>(lambdas.size());
    DiscretizedKernel k;
    k.nodes = Eigen::MatrixXd::Zero(n, 1);
    for (long i = 0; i < n; ++i) k.nodes(i, 0) = static_cast<double>(i);
    k.weights = Eigen::VectorXd::Ones(n);
    k.matrix = Eigen::MatrixXcd::Zero(n, n);
    for (long i = 0; i < n; ++i) k.matrix(i, i) = lambdas[i];
    k.grid_step = 1.0;
    return k;
}

Eigen::MatrixXcd random_frame(int ground, int rank, std::uint64_t seed) {
    CounterRng rng(seed);
    Eigen::MatrixXcd A(ground, rank);
    for (int i = 0; i < ground; ++i)
        for (int j = 0; j < rank; ++j)
            A(i, j) = std::complex<double>(rng.next_gaussian(), rng.next_gaussian());
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(A).householderQ() *
           Eigen::MatrixXcd::Identity(ground, rank);
}

} // namespace

TEST_CASE("validate_kernel accepts projections, rejects overshoot") {
    DiscretizedKernel zero = diagonal_kernel({0.0, 0.0, 0.0});
    SpectralReport rz = validate_kernel(zero);
    CHECK(rz.eigenvalues.maxCoeff() == doctest::Approx(0.0));

    // rank-1 projection uu*
    Eigen::VectorXcd u(3);
    u << std::complex<double>(0.6, 0.0), std::complex<double>(0.0, 0.8), 0.0;
    DiscretizedKernel proj = diagonal_kernel({0.0, 0.0, 0.0});
    proj.matrix = u * u.adjoint();
    SpectralReport rp = validate_kernel(proj);
    CHECK(rp.eigenvalues.maxCoeff() == doctest::Approx(1.0));
    CHECK(rp.eigenvalues.sum() == doctest::Approx(1.0));

    proj.matrix *= 1.5;
    try {
        validate_kernel(proj);
        CHECK(false);
    } catch (const SpectrumOutOfRange& e) {
        CHECK(e.offending == doctest::Approx(1.5).epsilon(1e-9));
    }
}

TEST_CASE("nystrom_restrict single node and trace identities") {
    KernelFn constant = [](std::span<const double>, std::span<const double>) {
        return std::complex<double>(0.37, 0.0);
    };
    // one node: box [-0.5, 0.5]^2, h = 1 -> matrix [c * measure]
    DiscretizedKernel one = nystrom_restrict(constant, 2, 0.5, 1.0);
    REQUIRE(one.matrix.rows() == 1);
    CHECK(one.matrix(0, 0).real() == doctest::Approx(0.37));

    MagneticModel m = make_model(1, {1.0}, 0.0);
    LevelSet lv = validate_window(m, SpectralWindow{0.0, 2.0, 1e-8});
    KernelFn ginibre = [&](std::span<const double> x, std::span<const double> y) {
        return window_kernel(m, lv, x, y);
    };
    DiscretizedKernel big = nystrom_restrict(ginibre, 2, 8.0, 0.25);
    double trace = big.matrix.trace().real();
    CHECK(std::abs(trace - 256.0 / kTwoPi) / (256.0 / kTwoPi) < 1e-3);

    DiscretizedKernel coarse = nystrom_restrict(ginibre, 2, 3.0, 0.5);
    DiscretizedKernel fine = nystrom_restrict(ginibre, 2, 3.0, 0.25);
    CHECK(std::abs(fine.matrix.trace().real() - coarse.matrix.trace().real()) /
              coarse.matrix.trace().real() <
          1e-4);

    CHECK_THROWS_AS(nystrom_restrict(ginibre, 2, 8.0, 0.25, 100), std::invalid_argument);
    CHECK_THROWS_AS(nystrom_restrict(ginibre, 2, -1.0, 0.25), std::invalid_argument);
}

TEST_CASE("projection sampler degenerate frames") {
    // rank 1, U = e_3 -> always node 3 (0-based index 3)
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(6, 1);
    U(3, 0) = 1.0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        CounterRng rng(s);
        PointSample out = sample_projection_dpp(U, rng);
        REQUIRE(out.indices.size() == 1);
        CHECK(out.indices[0] == 3);
        CHECK(out.seed == s);
    }

    // ground {0,1}, U = (1,1)/sqrt(2): node 0 with probability 1/2
    Eigen::MatrixXcd U2(2, 1);
    U2 << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    int hits = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        CounterRng rng(stream_seed(1000, i));
        if (sample_projection_dpp(U2, rng).indices[0] == 0) ++hits;
    }
    double freq = static_cast<double>(hits) / n;
    CHECK(std::abs(freq - 0.5) < 4.0 * std::sqrt(0.25 / n));
}

TEST_CASE("projection sampler marginals match diag(UU*)") {
    const int ground = 10, rank = 3, draws = 100000;
    Eigen::MatrixXcd U = random_frame(ground, rank, 77);
    Eigen::VectorXd diag = (U * U.adjoint()).diagonal().real();

    std::vector<int> counts(ground, 0);
    for (int i = 0; i < draws; ++i) {
        CounterRng rng(stream_seed(2000, i));
        for (int idx : sample_projection_dpp(U, rng).indices) ++counts[idx];
    }
    for (int i = 0; i < ground; ++i) {
        double p = diag[i];
        double se = std::sqrt(p * (1.0 - p) / draws);
        CHECK(std::abs(static_cast<double>(counts[i]) / draws - p) < 4.0 * se);
    }
}

TEST_CASE("projection samples are reproducible from their seed") {
    Eigen::MatrixXcd U = random_frame(12, 3, 5);
    CounterRng a(424242), b(424242);
    PointSample sa = sample_projection_dpp(U, a);
    PointSample sb = sample_projection_dpp(U, b);
    CHECK(sa.indices == sb.indices);
}

TEST_CASE("general sampler diagonal kernel is independent Bernoulli") {
    SpectralReport spec = validate_kernel(diagonal_kernel({0.3, 0.7}));
    const int draws = 100000;
    std::map<std::pair<bool, bool>, int> joint;
    for (int i = 0; i < draws; ++i) {
        CounterRng rng(stream_seed(3000, i));
        PointSample s = sample_general_dpp(spec, rng);
        bool n0 = false, n1 = false;
        for (int idx : s.indices) (idx == 0 ? n0 : n1) = true;
        ++joint[{n0, n1}];
    }
    auto expect = [&](bool b0, bool b1) {
        return (b0 ? 0.3 : 0.7) * (b1 ? 0.7 : 0.3) * draws;
    };
    for (bool b0 : {false, true}) {
        for (bool b1 : {false, true}) {
            double want = expect(b0, b1);
            double se = std::sqrt(want * (1.0 - want / draws));
            CHECK(std::abs(joint[{b0, b1}] - want) < 4.0 * se);
        }
    }

    SpectralReport none = validate_kernel(diagonal_kernel({0.0, 0.0}));
    CounterRng rng(1);
    CHECK(sample_general_dpp(none, rng).indices.empty());

    SpectralReport all = validate_kernel(diagonal_kernel({1.0, 1.0, 1.0}));
    CHECK(sample_general_dpp(all, rng).indices.size() == 3);
}

TEST_CASE("mean point count matches the kernel trace") {
    MagneticModel m = make_model(1, {1.0}, 0.0);
    LevelSet lv = validate_window(m, SpectralWindow{0.0, 2.0, 1e-8});
    KernelFn ginibre = [&](std::span<const double> x, std::span<const double> y) {
        return window_kernel(m, lv, x, y);
    };
    DiscretizedKernel grid = nystrom_restrict(ginibre, 2, 3.0, 0.5);
    SpectralReport spec = validate_kernel(grid);
    double trace = grid.matrix.trace().real();

    const int draws = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < draws; ++i) {
        CounterRng rng(stream_seed(4000, i));
        double c = static_cast<double>(sample_general_dpp(spec, rng).indices.size());
        sum += c;
        sumsq += c * c;
    }
    double mean = sum / draws;
    double var = (sumsq - draws * mean * mean) / (draws - 1);
    CHECK(std::abs(mean - trace) < 4.0 * std::sqrt(var / draws));
}

TEST_CASE("correlation_function determinants") {
    Eigen::MatrixXcd K1(1, 1);
    K1(0, 0) = 0.25;
    CHECK(correlation_function(K1) == doctest::Approx(0.25));

    // two equal points: rank-deficient, repulsion sends the density to zero
    Eigen::MatrixXcd K2(2, 2);
    K2 << 0.25, 0.25, 0.25, 0.25;
    CHECK(correlation_function(K2) == doctest::Approx(0.0));

    Eigen::MatrixXcd bad(2, 2);
    bad << 0.0, 1.0, 1.0, 0.0; // eigenvalues +-1, det = -1
    CHECK_THROWS_AS(correlation_function(bad), std::runtime_error);
}

TEST_CASE("principal minors of a valid kernel are nonnegative") {
    Eigen::MatrixXcd U = random_frame(9, 4, 99);
    Eigen::MatrixXcd K = U * U.adjoint();
    CounterRng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        int sz = 1 + static_cast<int>(rng.next_below(4));
        std::vector<int> idx;
        while (static_cast<int>(idx.size()) < sz) {
            int c = static_cast<int>(rng.next_below(9));
            bool dup = false;
            for (int v : idx) dup = dup || v == c;
            if (!dup) idx.push_back(c);
        }
        Eigen::MatrixXcd S(sz, sz);
        for (int a = 0; a < sz; ++a)
            for (int b = 0; b < sz; ++b) S(a, b) = K(idx[a], idx[b]);
        CHECK(correlation_function(S) >= -1e-10);
    }
}

TEST_CASE("chain-rule law equals the determinant law on a small frame") {
    const int ground = 8, rank = 2;
    Eigen::MatrixXcd U = random_frame(ground, rank, 21);
    Eigen::MatrixXcd K = U * U.adjoint();
    double total = 0.0;
    for (int i = 0; i < ground; ++i) {
        for (int j = i + 1; j < ground; ++j) {
            Eigen::MatrixXcd S(2, 2);
            S << K(i, i), K(i, j), K(j, i), K(j, j);
            double det = correlation_function(S);
            std::vector<int> conf{i, j};
            double law = chain_rule_configuration_probability(U, conf);
            CHECK(std::abs(det - law) < 1e-10);
            total += law;
        }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}
