#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

namespace landaulab {

namespace detail {

inline long double laguerre_eval_ld(int k, long double x) {
    long double a = 1.0L, b = 1.0L - x;
    if (k == 0) return a;
    if (k == 1) return b;
    for (int i = 2; i <= k; ++i) {
        long double c = ((2.0L * i - 1.0L - x) * b - (i - 1.0L) * a) / i;
        a = b;
        b = c;
    }
    return b;
}

} // namespace detail

// Gauss-Laguerre rule for int_0^inf g(y) e^{-y} dy. Golub-Welsch eigenvalues
// seed the nodes; each is Newton-polished in extended precision and the weight
// comes from w_i = x_i / ((n+1) L_{n+1}(x_i))^2. The eigenvector-squared
// weight formula is useless here: the large-node weights sit far below the
// eigensolver's resolution of tiny vector components.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_laguerre_rule(int nodes) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int i = 0; i < nodes; ++i) {
        J(i, i) = 2.0 * i + 1.0;
        if (i + 1 < nodes) {
            J(i, i + 1) = i + 1.0;
            J(i + 1, i) = i + 1.0;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J, Eigen::EigenvaluesOnly);
    Eigen::VectorXd x(nodes), w(nodes);
    for (int i = 0; i < nodes; ++i) {
        long double xi = es.eigenvalues()[i];
        for (int it = 0; it < 64; ++it) {
            long double f = detail::laguerre_eval_ld(nodes, xi);
            // L_n'(x) = n (L_n(x) - L_{n-1}(x)) / x
            long double d =
                nodes * (f - detail::laguerre_eval_ld(nodes - 1, xi)) / xi;
            long double step = f / d;
            xi -= step;
            if (std::fabs(static_cast<double>(step)) <
                1e-18 * std::fabs(static_cast<double>(xi)))
                break;
        }
        long double lnext = (nodes + 1.0L) * detail::laguerre_eval_ld(nodes + 1, xi);
        x[i] = static_cast<double>(xi);
        w[i] = static_cast<double>(xi / (lnext * lnext));
    }
    return {x, w};
}

} // namespace landaulab
