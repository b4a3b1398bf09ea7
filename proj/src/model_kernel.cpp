#include "landaulab/model_kernel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "landaulab/laguerre.hpp"
#include "landaulab/quadrature.hpp"

namespace landaulab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sq(double x) { return x * x; }

double radius_sq(std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return r2;
}

} // namespace

TestFunction make_test_function(const std::string& name, std::span<const double> params,
                                int dim2n) {
    if (name == "cosine-wave") {
        // cos(2 pi x_1) + offset; periodic, for torus statistics. params: [offset].
        double offset = params.empty() ? 0.0 : params[0];
        TestFunction tf;
        tf.name = name;
        tf.support_radius = 1.0;
        tf.f = [offset](std::span<const double> x) {
            return std::cos(kTwoPi * x[0]) + offset;
        };
        tf.grad = [](std::span<const double> x, std::span<double> g) {
            for (auto& gi : g) gi = 0.0;
            g[0] = -kTwoPi * std::sin(kTwoPi * x[0]);
        };
        (void)dim2n;
        return tf;
    }

    double R = params.empty() ? 1.0 : params[0];
    double amp = params.size() > 1 ? params[1] : 1.0;
    if (R <= 0.0) throw std::invalid_argument("test function: radius must be positive");

    TestFunction tf;
    tf.name = name;
    tf.support_radius = R;

    if (name == "gaussian-bump") {
        // amp * exp(1 - 1/(1 - (r/R)^2)) inside the ball of radius R
        tf.f = [R, amp](std::span<const double> x) {
            double s = radius_sq(x) / (R * R);
            if (s >= 1.0) return 0.0;
            return amp * std::exp(1.0 - 1.0 / (1.0 - s));
        };
        tf.grad = [R, amp](std::span<const double> x, std::span<double> g) {
            double s = radius_sq(x) / (R * R);
            if (s >= 1.0) {
                for (auto& gi : g) gi = 0.0;
                return;
            }
            double val = amp * std::exp(1.0 - 1.0 / (1.0 - s));
            double factor = -val * 2.0 / (R * R * sq(1.0 - s));
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = factor * x[i];
        };
    } else if (name == "cosine-bump") {
        // amp * (1 + cos(pi r / R)) / 2 inside the ball of radius R
        tf.f = [R, amp](std::span<const double> x) {
            double r = std::sqrt(radius_sq(x));
            if (r >= R) return 0.0;
            return 0.5 * amp * (1.0 + std::cos(std::numbers::pi * r / R));
        };
        tf.grad = [R, amp](std::span<const double> x, std::span<double> g) {
            double r = std::sqrt(radius_sq(x));
            if (r >= R) {
                for (auto& gi : g) gi = 0.0;
                return;
            }
            // -(amp pi / 2R) sin(pi r/R) * x/r, with the r -> 0 limit taken
            double c = std::numbers::pi / R;
            double factor;
            if (r < 1e-8) factor = -0.5 * amp * c * c; // sin(cr)/r -> c
            else factor = -0.5 * amp * c * std::sin(c * r) / r;
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = factor * x[i];
        };
    } else if (name == "tensor-bump") {
        // product of 1D bumps exp(1 - 1/(1 - (t/R)^2)) per coordinate
        auto bump = [R](double t) {
            double s = sq(t / R);
            if (s >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - s));
        };
        auto dbump = [R, bump](double t) {
            double s = sq(t / R);
            if (s >= 1.0) return 0.0;
            return -bump(t) * 2.0 * t / (R * R * sq(1.0 - s));
        };
        tf.f = [amp, bump](std::span<const double> x) {
            double v = amp;
            for (double t : x) {
                v *= bump(t);
                if (v == 0.0) return 0.0;
            }
            return v;
        };
        tf.grad = [amp, bump, dbump](std::span<const double> x, std::span<double> g) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                double v = amp;
                for (std::size_t j = 0; j < x.size(); ++j)
                    v *= (j == i) ? dbump(x[j]) : bump(x[j]);
                g[i] = v;
            }
        };
    } else {
        throw std::invalid_argument("unknown test function: " + name);
    }
    (void)dim2n;
    return tf;
}

double gradient_check(const TestFunction& tf, int dim2n, double h) {
    double worst = 0.0;
    double R = tf.support_radius;
    std::vector<double> x(dim2n, 0.0), g(dim2n, 0.0);
    // probe a deterministic grid strictly inside the support
    const int steps = 5;
    std::vector<int> idx(dim2n, 0);
    const long total = static_cast<long>(std::pow(steps, dim2n));
    for (long t = 0; t < total; ++t) {
        long rem = t;
        for (int d = 0; d < dim2n; ++d) {
            idx[d] = static_cast<int>(rem % steps);
            rem /= steps;
            x[d] = -0.8 * R + 1.6 * R * idx[d] / (steps - 1);
        }
        tf.grad(x, g);
        double gnorm = std::sqrt(radius_sq(g)) + 1.0;
        for (int d = 0; d < dim2n; ++d) {
            double saved = x[d];
            x[d] = saved + h;
            double fp = tf.f(x);
            x[d] = saved - h;
            double fm = tf.f(x);
            x[d] = saved;
            double fd = (fp - fm) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - g[d]) / gnorm);
        }
    }
    return worst;
}

std::complex<double> eigenkernel(const MagneticModel& model, const MultiIndex& k,
                                 std::span<const double> Z, std::span<const double> Zp) {
    const int n = model.n;
    if (static_cast<int>(Z.size()) != 2 * n || static_cast<int>(Zp.size()) != 2 * n)
        throw DimensionMismatch("eigenkernel: point dimension != 2n");
    if (static_cast<int>(k.size()) != n)
        throw DimensionMismatch("eigenkernel: multi-index length != n");

    double prefactor = 1.0;
    double lag = 1.0;
    std::complex<double> exponent = 0.0;
    for (int j = 0; j < n; ++j) {
        std::complex<double> z(Z[2 * j], Z[2 * j + 1]);
        std::complex<double> zp(Zp[2 * j], Zp[2 * j + 1]);
        double aj = model.a[j];
        prefactor *= aj / kTwoPi;
        lag *= laguerre_eval(k[j], aj * std::norm(z - zp) / 2.0);
        exponent += -0.25 * aj * (std::norm(z) + std::norm(zp) - 2.0 * z * std::conj(zp));
    }
    return prefactor * lag * std::exp(exponent);
}

std::complex<double> window_kernel(const MagneticModel& model, const LevelSet& levels,
                                   std::span<const double> Z, std::span<const double> Zp) {
    const int n = model.n;
    if (static_cast<int>(Z.size()) != 2 * n || static_cast<int>(Zp.size()) != 2 * n)
        throw DimensionMismatch("window_kernel: point dimension != 2n");

    // shared Gaussian factor, Laguerre part summed over the level set
    double prefactor = 1.0;
    std::complex<double> exponent = 0.0;
    std::vector<double> arg(n);
    for (int j = 0; j < n; ++j) {
        std::complex<double> z(Z[2 * j], Z[2 * j + 1]);
        std::complex<double> zp(Zp[2 * j], Zp[2 * j + 1]);
        double aj = model.a[j];
        prefactor *= aj / kTwoPi;
        arg[j] = aj * std::norm(z - zp) / 2.0;
        exponent += -0.25 * aj * (std::norm(z) + std::norm(zp) - 2.0 * z * std::conj(zp));
    }
    double lag_sum = 0.0;
    for (const MultiIndex& k : levels.indices) {
        double term = 1.0;
        for (int j = 0; j < n; ++j) term *= laguerre_eval(k[j], arg[j]);
        lag_sum += term;
    }
    return prefactor * lag_sum * std::exp(exponent);
}

std::complex<double> scaled_kernel(const MagneticModel& model, const LevelSet& levels,
                                   int p, std::span<const double> Z,
                                   std::span<const double> Zp) {
    if (p < 1) throw std::invalid_argument("scaled_kernel: p must be >= 1");
    double s = std::sqrt(static_cast<double>(p));
    std::vector<double> Zs(Z.size()), Zps(Zp.size());
    for (std::size_t i = 0; i < Z.size(); ++i) Zs[i] = s * Z[i];
    for (std::size_t i = 0; i < Zp.size(); ++i) Zps[i] = s * Zp[i];
    double pn = std::pow(static_cast<double>(p), model.n);
    return pn * window_kernel(model, levels, Zs, Zps);
}

double window_kernel_modulus(const MagneticModel& model, const LevelSet& levels,
                             std::span<const double> diff) {
    const int n = model.n;
    double prefactor = 1.0;
    double expo = 0.0;
    std::vector<double> arg(n);
    for (int j = 0; j < n; ++j) {
        double rho = sq(diff[2 * j]) + sq(diff[2 * j + 1]);
        double aj = model.a[j];
        prefactor *= aj / kTwoPi;
        arg[j] = aj * rho / 2.0;
        expo += -0.25 * aj * rho;
    }
    double lag_sum = 0.0;
    for (const MultiIndex& k : levels.indices) {
        double term = 1.0;
        for (int j = 0; j < n; ++j) term *= laguerre_eval(k[j], arg[j]);
        lag_sum += term;
    }
    return prefactor * std::abs(lag_sum) * std::exp(expo);
}

double predicted_expectation(const MagneticModel& model, const LevelSet& levels,
                             const TestFunction& f, int p, double rel_tol) {
    const int dim = 2 * model.n;
    std::vector<double> lo(dim, -f.support_radius), hi(dim, f.support_radius);
    double integral = integrate_box(f.f, lo, hi, rel_tol);
    double omega = 1.0;
    for (double aj : model.a) omega *= aj;
    return std::pow(static_cast<double>(p), model.n) / std::pow(kTwoPi, model.n) *
           static_cast<double>(levels.size()) * omega * integral;
}

double predicted_variance(const MagneticModel& model, const LevelSet& levels,
                          const TestFunction& f, int p, double rel_tol) {
    const int dim = 2 * model.n;
    std::vector<long long> alpha = alpha_all(levels);
    std::vector<double> lo(dim, -f.support_radius), hi(dim, f.support_radius);
    std::vector<double> g(dim);
    auto integrand = [&](std::span<const double> x) {
        f.grad(x, g);
        double total = 0.0;
        for (int m = 0; m < model.n; ++m)
            total += static_cast<double>(alpha[m]) / model.a[m] *
                     (sq(g[2 * m]) + sq(g[2 * m + 1]));
        return total;
    };
    double integral = integrate_box(integrand, lo, hi, rel_tol);
    double omega = 1.0;
    for (double aj : model.a) omega *= aj;
    double prefactor = 1.0 / (4.0 * std::numbers::pi) *
                       std::pow(static_cast<double>(p) / kTwoPi, model.n - 1);
    return prefactor * omega * integral;
}

namespace {

// Composite Simpson weights for `nodes` points (odd) on [-half, half].
void simpson_grid(int nodes, double half, std::vector<double>& x, std::vector<double>& w) {
    if (nodes < 3 || nodes % 2 == 0)
        throw std::invalid_argument("simpson grid: node count must be odd and >= 3");
    x.resize(nodes);
    w.resize(nodes);
    double h = 2.0 * half / (nodes - 1);
    for (int i = 0; i < nodes; ++i) {
        x[i] = -half + i * h;
        double wi = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        w[i] = wi * h / 3.0;
    }
}

} // namespace

double exact_variance_quadrature(const MagneticModel& model, const LevelSet& levels,
                                 const TestFunction& f, int p,
                                 const VarianceQuadratureSpec& spec) {
    if (p < 1) throw std::invalid_argument("exact_variance_quadrature: p must be >= 1");
    const int n = model.n;
    const int dim = 2 * n;
    if (levels.empty()) return 0.0;
    if (dim > 4)
        throw std::invalid_argument("exact_variance_quadrature: dimension above quadrature cap");

    // V = 1/2 p^n int dv |W(v)|^2 G(v / sqrt(p)),  G(u) = int (f(x) - f(x-u))^2 dx.
    // |W(v)| carries exp(-sum a_j rho_j / 4); truncate where that factor is
    // below tail_eps in the weakest direction.
    double a_min = model.a.front();
    double v_max = 1.15 * std::sqrt(-4.0 * std::log(spec.tail_eps) / a_min);
    double sqrt_p = std::sqrt(static_cast<double>(p));

    std::vector<double> vx, vw, xx, xw;
    simpson_grid(spec.outer_nodes, v_max, vx, vw);
    double box = f.support_radius + v_max / sqrt_p;
    simpson_grid(spec.inner_nodes, box, xx, xw);

    const long outer_total = static_cast<long>(std::pow(spec.outer_nodes, dim));
    if (outer_total > 20'000'000)
        throw std::invalid_argument("exact_variance_quadrature: outer grid too large");

    double peak = window_kernel_modulus(model, levels, std::vector<double>(dim, 0.0));
    double skip_below = sq(peak) * 1e-18;

    // f values and Simpson weights on the inner grid, reused for every u
    const long inner_total = static_cast<long>(std::pow(spec.inner_nodes, dim));
    std::vector<double> fgrid(inner_total), wgrid(inner_total);
    {
        std::vector<double> x(dim);
        for (long s = 0; s < inner_total; ++s) {
            long r = s;
            double wx = 1.0;
            for (int d = 0; d < dim; ++d) {
                int i = static_cast<int>(r % spec.inner_nodes);
                r /= spec.inner_nodes;
                x[d] = xx[i];
                wx *= xw[i];
            }
            fgrid[s] = f.f(x);
            wgrid[s] = wx;
        }
    }

    std::vector<double> v(dim), u(dim), xs(dim);
    double total = 0.0;
    for (long t = 0; t < outer_total; ++t) {
        long rem = t;
        double wv = 1.0;
        for (int d = 0; d < dim; ++d) {
            int i = static_cast<int>(rem % spec.outer_nodes);
            rem /= spec.outer_nodes;
            v[d] = vx[i];
            wv *= vw[i];
        }
        double mod = window_kernel_modulus(model, levels, v);
        double mod2 = mod * mod;
        if (mod2 < skip_below) continue;

        for (int d = 0; d < dim; ++d) u[d] = v[d] / sqrt_p;

        // G(u) by composite Simpson over the padded support box
        double G = 0.0;
        for (long s = 0; s < inner_total; ++s) {
            long r = s;
            for (int d = 0; d < dim; ++d) {
                int i = static_cast<int>(r % spec.inner_nodes);
                r /= spec.inner_nodes;
                xs[d] = xx[i] - u[d];
            }
            double diff = fgrid[s] - f.f(xs);
            G += wgrid[s] * diff * diff;
        }
        total += wv * mod2 * G;
    }
    return 0.5 * std::pow(static_cast<double>(p), n) * total;
}

} // namespace landaulab
