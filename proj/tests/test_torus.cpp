#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "landaulab/torus.hpp"

using namespace landaulab;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralWindow lowest_window(double V = 0.0) {
    return SpectralWindow{V + kPi, V + 4.0 * kPi, 1e-9};
}

} // namespace

TEST_CASE("build_lattice guards and hermiticity") {
    CHECK_THROWS_AS(build_lattice(TorusConfig{4, 1, {}}), std::invalid_argument);
    CHECK_THROWS_AS(build_lattice(TorusConfig{16, 20, {}}), std::invalid_argument);
    CHECK_THROWS_AS(build_lattice(TorusConfig{16, 2, std::vector<double>(3, 0.0)}),
                    DimensionMismatch);

    MagneticLattice lat = build_lattice(TorusConfig{12, 3, {}});
    CHECK((lat.H - lat.H.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(plaquette_flux_defect(lat) < 1e-14);
}

TEST_CASE("field-free lattice matches the Fourier oracle") {
    const int M = 16;
    MagneticLattice lat = build_lattice(TorusConfig{M, 0, {}});
    TorusSpectrum spec = eigensolve(lat);

    std::vector<double> oracle;
    for (int k = 0; k < M; ++k)
        for (int l = 0; l < M; ++l)
            oracle.push_back(static_cast<double>(M) * M *
                             (4.0 - 2.0 * std::cos(2.0 * kPi * k / M) -
                              2.0 * std::cos(2.0 * kPi * l / M)));
    std::sort(oracle.begin(), oracle.end());
    for (int i = 0; i < M * M; ++i)
        CHECK(std::abs(spec.eigenvalues[i] - oracle[i]) < 1e-8);
}

TEST_CASE("gauge transformation leaves the spectrum invariant") {
    const int M = 16, p = 2;
    MagneticLattice lat = build_lattice(TorusConfig{M, p, {}});
    TorusSpectrum spec = eigensolve(lat);

    CounterRng rng(55);
    Eigen::VectorXcd phase(M * M);
    for (int s = 0; s < M * M; ++s) {
        double theta = 2.0 * kPi * rng.next_double();
        phase[s] = std::exp(std::complex<double>(0.0, theta));
    }
    MagneticLattice gauged = lat;
    gauged.H = phase.asDiagonal() * lat.H * phase.conjugate().asDiagonal();
    TorusSpectrum gspec = eigensolve(gauged);

    for (int i = 0; i < M * M; ++i)
        CHECK(std::abs(spec.eigenvalues[i] - gspec.eigenvalues[i]) < 1e-9);

    ClusterReport a = cluster_spectrum(spec, 0.0, 20.0 * kPi);
    ClusterReport b = cluster_spectrum(gspec, 0.0, 20.0 * kPi);
    REQUIRE(a.clusters.size() == b.clusters.size());
    for (std::size_t i = 0; i < a.clusters.size(); ++i)
        CHECK(a.clusters[i].count == b.clusters[i].count);
}

TEST_CASE("constant potential shifts the spectrum") {
    const int M = 12, p = 2;
    TorusSpectrum base = eigensolve(build_lattice(TorusConfig{M, p, {}}));
    TorusSpectrum shifted =
        eigensolve(build_lattice(TorusConfig{M, p, std::vector<double>(M * M, 1.0)}));
    for (int i = 0; i < M * M; ++i)
        CHECK(shifted.eigenvalues[i] - base.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-9));

    // cluster centers shift with V, counts unchanged
    ClusterReport a = cluster_spectrum(base, 0.0, 20.0);
    ClusterReport b = cluster_spectrum(shifted, 1.0, 21.0);
    REQUIRE(a.clusters.size() == b.clusters.size());
    for (std::size_t i = 0; i < a.clusters.size(); ++i) {
        CHECK(a.clusters[i].count == b.clusters[i].count);
        CHECK(b.clusters[i].center - a.clusters[i].center == doctest::Approx(1.0));
    }
}

TEST_CASE("M=32 clusters, state counts, and the flux prediction") {
    const int M = 32;
    TorusSpectrum s4 = eigensolve(build_lattice(TorusConfig{M, 4, {}}));
    ClusterReport rep = cluster_spectrum(s4, 0.0, 20.0 * kPi);
    REQUIRE(!rep.clusters.empty());
    CHECK(rep.clusters[0].k == 0);
    CHECK(rep.clusters[0].count == 4);
    CHECK(rep.clusters[0].center == doctest::Approx(2.0 * kPi));
    CHECK(std::abs(rep.clusters[0].mean - 2.0 * kPi) / (2.0 * kPi) < 0.05);

    CHECK(count_states(s4, lowest_window()) == 4);
    CHECK(demailly_prediction(4, 1) == 4);

    TorusSpectrum s6 = eigensolve(build_lattice(TorusConfig{M, 6, {}}));
    CHECK(count_states(s6, lowest_window()) == 6);

    // window covering levels k = 0 and 1 at p = 5 -> 10 states
    TorusSpectrum s5 = eigensolve(build_lattice(TorusConfig{M, 5, {}}));
    CHECK(count_states(s5, SpectralWindow{kPi, 8.0 * kPi, 1e-9}) == 10);
    CHECK(demailly_prediction(5, 2) == 10);

    // gap window -> empty
    CHECK(count_states(s5, SpectralWindow{9.0, 12.0, 1e-9}) == 0);

    // endpoint inside a cluster -> error
    double inside = s5.eigenvalues[0];
    CHECK_THROWS_AS(count_states(s5, SpectralWindow{inside, 4.0 * kPi, 1e-9}),
                    EndpointOnLevel);
}

TEST_CASE("cluster deviations shrink as the lattice refines") {
    // at fixed flux the dominant deviation is the O(h^2) discretization
    // error, so doubling M should cut it by about 4
    const int p = 8;
    TorusSpectrum coarse = eigensolve(build_lattice(TorusConfig{20, p, {}}));
    TorusSpectrum fine = eigensolve(build_lattice(TorusConfig{40, p, {}}));
    ClusterReport rc = cluster_spectrum(coarse, 0.0, 20.0 * kPi);
    ClusterReport rf = cluster_spectrum(fine, 0.0, 20.0 * kPi);
    REQUIRE(!rc.clusters.empty());
    REQUIRE(!rf.clusters.empty());
    CHECK(rf.clusters[0].max_deviation < rc.clusters[0].max_deviation / 3.0);
}

TEST_CASE("projection kernel structure") {
    const int M = 16, p = 3;
    TorusSpectrum spec = eigensolve(build_lattice(TorusConfig{M, p, {}}));
    SpectralProjection proj = projection_kernel(spec, lowest_window());
    REQUIRE(proj.rank == p);

    // Hermitian; weighted trace = N_p; weighted idempotency
    CHECK((proj.P - proj.P.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(proj.P.trace().real() / (M * M) == doctest::Approx(p).epsilon(1e-10));
    double scale = proj.P.cwiseAbs().maxCoeff();
    Eigen::MatrixXcd P2 = proj.P * proj.P / static_cast<double>(M * M);
    CHECK((P2 - proj.P).cwiseAbs().maxCoeff() / scale < 1e-10);

    // the diagonal is homogeneous only in the large-flux limit: the finite-p
    // ripple dies off exponentially in p
    Eigen::VectorXd diag = proj.P.diagonal().real();
    double mean = diag.mean();
    double ripple3 = (diag.array() - mean).abs().maxCoeff() / mean;
    CHECK(ripple3 < 0.05);

    TorusSpectrum spec12 = eigensolve(build_lattice(TorusConfig{32, 12, {}}));
    SpectralProjection proj12 = projection_kernel(spec12, lowest_window());
    Eigen::VectorXd d12 = proj12.P.diagonal().real();
    double m12 = d12.mean();
    CHECK((d12.array() - m12).abs().maxCoeff() / m12 < 1e-6);
}

TEST_CASE("decay fit is positive with the diagonal excluded") {
    const int M = 32, p = 8;
    TorusSpectrum spec = eigensolve(build_lattice(TorusConfig{M, p, {}}));
    SpectralProjection proj = projection_kernel(spec, lowest_window());
    DecayFit fit = decay_fit(proj);
    CHECK(fit.rate > 0.0);
    CHECK(fit.points >= 8);
}

TEST_CASE("slater density equals the projection determinant") {
    const int M = 16, p = 3;
    TorusSpectrum spec = eigensolve(build_lattice(TorusConfig{M, p, {}}));
    SpectralProjection proj = projection_kernel(spec, lowest_window());
    REQUIRE(proj.rank == p);

    CounterRng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> sites;
        while (static_cast<int>(sites.size()) < p) {
            int s = static_cast<int>(rng.next_below(M * M));
            bool dup = false;
            for (int v : sites) dup = dup || v == s;
            if (!dup) sites.push_back(s);
        }
        double slater = slater_density(proj, sites);
        Eigen::MatrixXcd PS(p, p);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) PS(i, j) = proj.P(sites[i], sites[j]);
        double det = PS.determinant().real();
        CHECK(std::abs(slater - det) <= 1e-8 * std::max(1.0, std::abs(det)));

        // permutation invariance
        std::vector<int> perm = sites;
        std::swap(perm[0], perm[p - 1]);
        CHECK(slater_density(proj, perm) == doctest::Approx(slater).epsilon(1e-10));
    }

    // repeated point kills the determinant
    std::vector<int> rep{5, 5, 9};
    CHECK(slater_density(proj, rep) == doctest::Approx(0.0));
    std::vector<int> wrong{1, 2};
    CHECK_THROWS_AS(slater_density(proj, wrong), std::invalid_argument);
}

TEST_CASE("torus ensemble: rigidity, homogeneity, repulsion") {
    const int M = 16, p = 3;
    TorusSpectrum spec = eigensolve(build_lattice(TorusConfig{M, p, {}}));
    SpectralProjection proj = projection_kernel(spec, lowest_window());

    const int draws = 4000;
    std::vector<int> site_counts(M * M, 0);
    int adjacent_hits = 0;
    for (int i = 0; i < draws; ++i) {
        CounterRng rng(stream_seed(6000, i));
        PointSample s = sample_torus_ensemble(proj, rng);
        REQUIRE(s.indices.size() == static_cast<std::size_t>(p));
        bool has0 = false, has1 = false;
        for (int idx : s.indices) {
            ++site_counts[idx];
            has0 = has0 || idx == 0;
            has1 = has1 || idx == 1;
        }
        if (has0 && has1) ++adjacent_hits;
    }

    // homogeneity: every site's inclusion frequency near rank / M^2
    double pin = static_cast<double>(p) / (M * M);
    double se = std::sqrt(pin * (1.0 - pin) / draws);
    for (int s = 0; s < M * M; ++s) {
        double freq = static_cast<double>(site_counts[s]) / draws;
        CHECK(std::abs(freq - pin) < 5.0 * se);
    }

    // adjacent-site pair probability from the determinant formula, below Poisson
    double h4 = 1.0 / (static_cast<double>(M) * M * M * M);
    double det2 = (proj.P(0, 0) * proj.P(1, 1) - proj.P(0, 1) * proj.P(1, 0)).real();
    double pair_prob = h4 * det2;
    CHECK(pair_prob < pin * pin); // repulsion
    double pse = std::sqrt(pair_prob * (1.0 - pair_prob) / draws);
    CHECK(std::abs(static_cast<double>(adjacent_hits) / draws - pair_prob) < 4.0 * pse);
}

TEST_CASE("site positions are fractional torus coordinates") {
    auto [x, y] = site_position(8, 0);
    CHECK(x == doctest::Approx(0.0));
    CHECK(y == doctest::Approx(0.0));
    auto [x2, y2] = site_position(8, 8 * 3 + 5);
    CHECK(x2 == doctest::Approx(5.0 / 8.0));
    CHECK(y2 == doctest::Approx(3.0 / 8.0));
}
