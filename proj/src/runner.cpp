#include "landaulab/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "landaulab/acceptance.hpp"
#include "landaulab/dpp.hpp"
#include "landaulab/model_kernel.hpp"
#include "landaulab/stats.hpp"
#include "landaulab/torus.hpp"

namespace landaulab {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 17 significant digits: round-trip exact, '.' decimal, no locale.
std::string num(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << x;
    return os.str();
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex << std::setfill('0') << std::setw(16) << h;
    return os.str();
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + (dir / name).string());
    return out;
}

void csv_header(std::ofstream& out, const ExperimentConfig& cfg, const std::string& cols) {
    out << "# config_hash=" << hash_hex(cfg.config_hash) << " seed=" << cfg.stats_base_seed
        << "\n"
        << cols << "\n";
}

MagneticModel model_of(const ExperimentConfig& cfg) {
    return make_model(cfg.model_n, cfg.model_a, cfg.model_V);
}

SpectralWindow window_of(const ExperimentConfig& cfg, const MagneticModel& model) {
    SpectralWindow w;
    w.alpha = cfg.window_alpha.value();
    w.beta = cfg.window_beta.value();
    w.margin = cfg.window_margin > 0.0 ? cfg.window_margin : default_margin(model);
    return w;
}

// Torus default window: the lowest cluster around 2 pi + V.
SpectralWindow torus_window(const ExperimentConfig& cfg) {
    SpectralWindow w;
    if (cfg.window_alpha && cfg.window_beta) {
        w.alpha = *cfg.window_alpha;
        w.beta = *cfg.window_beta;
    } else {
        w.alpha = cfg.torus_V + 0.5 * kTwoPi;
        w.beta = cfg.torus_V + 2.0 * kTwoPi;
    }
    w.margin = cfg.window_margin > 0.0 ? cfg.window_margin : 1e-9;
    return w;
}

json summary_json(const ExperimentConfig& cfg, const StatRun& run, double prediction) {
    json s;
    s["mean"] = run.mean;
    s["var"] = run.variance;
    s["se_mean"] = run.se_mean;
    s["se_var"] = run.se_variance;
    if (prediction > 0.0 && run.n_samples >= 1000) {
        CltReport clt = clt_check(run, prediction);
        s["ks"] = clt.ks;
        s["skew"] = clt.skewness;
        s["kurtosis"] = clt.excess_kurtosis;
        s["prediction"] = prediction;
        s["ratio"] = clt.var_ratio;
    } else {
        s["prediction"] = prediction;
        s["ratio"] = prediction > 0.0 ? run.variance / prediction : 0.0;
    }
    s["n_samples"] = run.n_samples;
    s["base_seed"] = run.base_seed;
    s["config_hash"] = hash_hex(cfg.config_hash);
    return s;
}

int run_predict(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    MagneticModel model = model_of(cfg);
    LevelSet levels = validate_window(model, window_of(cfg, model));
    TestFunction f = make_test_function(cfg.stats_f, cfg.stats_f_params, 2 * model.n);

    json doc;
    doc["mode"] = "predict";
    doc["config_hash"] = hash_hex(cfg.config_hash);
    doc["levels"] = levels.size();
    doc["results"] = json::array();
    for (int p : cfg.flat_p) {
        json rec;
        rec["p"] = p;
        rec["predicted_expectation"] = predicted_expectation(model, levels, f, p);
        double pv = predicted_variance(model, levels, f, p);
        rec["predicted_variance"] = pv;
        if (2 * model.n <= 4) {
            double exact = exact_variance_quadrature(model, levels, f, p);
            rec["exact_variance"] = exact;
            rec["ratio"] = pv > 0.0 ? exact / pv : 0.0;
        }
        doc["results"].push_back(std::move(rec));
        log << "predict: p=" << p << " done\n";
    }
    open_out(dir, "predict.json") << doc.dump(2) << "\n";
    return 0;
}

int run_sample_flat(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    MagneticModel model = model_of(cfg);
    LevelSet levels = validate_window(model, window_of(cfg, model));
    const int dim = 2 * model.n;
    TestFunction f = make_test_function(cfg.stats_f, cfg.stats_f_params, dim);

    for (int p : cfg.flat_p) {
        KernelFn kernel = [&](std::span<const double> x, std::span<const double> y) {
            return scaled_kernel(model, levels, p, x, y);
        };
        DiscretizedKernel grid = nystrom_restrict(kernel, dim, cfg.flat_box_radius,
                                                  cfg.flat_grid_step, cfg.flat_max_nodes);
        SpectralReport spectrum = validate_kernel(grid);
        log << "sample-flat: p=" << p << " nodes=" << grid.nodes.rows() << "\n";

        std::string tag = "flat_p" + std::to_string(p);
        std::ofstream points = open_out(dir, tag + "_points.csv");
        std::string cols = "sample_id";
        for (int d = 1; d <= dim; ++d) cols += ",x" + std::to_string(d);
        csv_header(points, cfg, cols);
        std::ofstream stats = open_out(dir, tag + "_stats.csv");
        csv_header(stats, cfg, "sample_id,count,statistic");

        std::vector<double> values(cfg.stats_n_samples);
        std::vector<double> x(dim);
        double half = grid.grid_step / 2.0;
        for (int i = 0; i < cfg.stats_n_samples; ++i) {
            CounterRng rng(stream_seed(cfg.stats_base_seed, i));
            PointSample s = sample_general_dpp(spectrum, rng);
            double v = 0.0;
            for (int node : s.indices) {
                for (int d = 0; d < dim; ++d) x[d] = grid.nodes(node, d);
                v += f.f(x);
                points << i;
                for (int d = 0; d < dim; ++d) {
                    double coord = x[d];
                    // presentation-only jitter inside the quadrature cell
                    if (cfg.flat_jitter) coord += half * (2.0 * rng.next_double() - 1.0);
                    points << "," << num(coord);
                }
                points << "\n";
            }
            values[i] = v;
            stats << i << "," << s.indices.size() << "," << num(v) << "\n";
        }
        StatRun run = summarize(std::move(values), cfg.stats_base_seed);
        double pred = predicted_variance(model, levels, f, p);
        json s = summary_json(cfg, run, pred);
        s["p"] = p;
        s["grid_step"] = grid.grid_step;
        s["nodes"] = grid.nodes.rows();
        open_out(dir, tag + "_summary.json") << s.dump(2) << "\n";
    }
    return 0;
}

int run_torus_spectrum(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    SpectralWindow window = torus_window(cfg);
    json doc;
    doc["mode"] = "torus-spectrum";
    doc["config_hash"] = hash_hex(cfg.config_hash);
    doc["results"] = json::array();
    for (int p : cfg.torus_p) {
        TorusConfig tc;
        tc.M = cfg.torus_M;
        tc.p = p;
        if (cfg.torus_V != 0.0)
            tc.V_grid.assign(static_cast<std::size_t>(tc.M) * tc.M, cfg.torus_V);
        TorusSpectrum spec = eigensolve(build_lattice(tc));
        ClusterReport rep = cluster_spectrum(spec, cfg.torus_V, 20.0 * std::numbers::pi);
        log << "torus-spectrum: p=" << p << " clusters=" << rep.clusters.size() << "\n";

        std::string tag = "torus_M" + std::to_string(tc.M) + "_p" + std::to_string(p);
        std::ofstream csv = open_out(dir, tag + "_spectrum.csv");
        csv_header(csv, cfg, "index,eigenvalue,assigned_k,deviation");
        const double width = 0.5 * kTwoPi;
        for (long i = 0; i < spec.eigenvalues.size(); ++i) {
            double e = spec.eigenvalues[i];
            int k = static_cast<int>(std::lround(((e - cfg.torus_V) / kTwoPi - 1.0) / 2.0));
            double center = kTwoPi * (2.0 * std::max(k, 0) + 1.0) + cfg.torus_V;
            bool assigned = k >= 0 && std::abs(e - center) < width;
            csv << i << "," << num(e) << "," << (assigned ? std::to_string(k) : "-") << ","
                << num(assigned ? e - center : 0.0) << "\n";
        }

        json rec;
        rec["p"] = p;
        rec["M"] = tc.M;
        rec["unassigned_below_cutoff"] = rep.unassigned;
        rec["lowest_window_states"] = count_states(spec, window);
        rec["demailly_prediction"] = demailly_prediction(p, 1);
        rec["clusters"] = json::array();
        for (const auto& c : rep.clusters) {
            json cj;
            cj["k"] = c.k;
            cj["center"] = c.center;
            cj["mean"] = c.mean;
            cj["count"] = c.count;
            cj["mean_deviation"] = c.mean_deviation;
            cj["max_deviation"] = c.max_deviation;
            rec["clusters"].push_back(std::move(cj));
        }
        doc["results"].push_back(std::move(rec));
    }
    open_out(dir, "torus_spectrum.json") << doc.dump(2) << "\n";
    return 0;
}

int run_torus_ensemble(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& log) {
    SpectralWindow window = torus_window(cfg);
    TestFunction f = make_test_function(cfg.stats_f, cfg.stats_f_params, 2);
    for (int p : cfg.torus_p) {
        TorusConfig tc;
        tc.M = cfg.torus_M;
        tc.p = p;
        if (cfg.torus_V != 0.0)
            tc.V_grid.assign(static_cast<std::size_t>(tc.M) * tc.M, cfg.torus_V);
        TorusSpectrum spec = eigensolve(build_lattice(tc));
        SpectralProjection proj = projection_kernel(spec, window);
        log << "torus-ensemble: p=" << p << " rank=" << proj.rank << "\n";

        std::string tag = "torus_M" + std::to_string(tc.M) + "_p" + std::to_string(p);
        std::ofstream points = open_out(dir, tag + "_points.csv");
        csv_header(points, cfg, "sample_id,x1,x2");
        std::ofstream stats = open_out(dir, tag + "_stats.csv");
        csv_header(stats, cfg, "sample_id,count,statistic");

        std::vector<double> values(cfg.stats_n_samples);
        std::vector<double> x(2);
        for (int i = 0; i < cfg.stats_n_samples; ++i) {
            CounterRng rng(stream_seed(cfg.stats_base_seed, i));
            PointSample s = sample_torus_ensemble(proj, rng);
            double v = 0.0;
            for (int site : s.indices) {
                auto [x1, x2] = site_position(proj.M, site);
                x[0] = x1;
                x[1] = x2;
                v += f.f(x);
                points << i << "," << num(x1) << "," << num(x2) << "\n";
            }
            values[i] = v;
            stats << i << "," << s.indices.size() << "," << num(v) << "\n";
        }
        StatRun run = summarize(std::move(values), cfg.stats_base_seed);

        DecayFit fit = decay_fit(proj);
        json s = summary_json(cfg, run, 0.0);
        s["p"] = p;
        s["M"] = tc.M;
        s["rank"] = proj.rank;
        s["decay_rate"] = fit.rate;
        s["decay_points"] = fit.points;
        s["decay_truncated"] = fit.truncated;
        open_out(dir, tag + "_summary.json") << s.dump(2) << "\n";

        // pooled decay profile for audit: distance vs log-modulus
        std::ofstream decay = open_out(dir, tag + "_decay.csv");
        csv_header(decay, cfg, "distance,log_modulus");
        int ref = (tc.M / 4) * (tc.M + 1);
        auto [rx, ry] = site_position(tc.M, ref);
        for (int site = 0; site < tc.M * tc.M; ++site) {
            if (site == ref) continue;
            auto [sx, sy] = site_position(tc.M, site);
            double dx = std::abs(sx - rx), dy = std::abs(sy - ry);
            dx = std::min(dx, 1.0 - dx);
            dy = std::min(dy, 1.0 - dy);
            double d = std::sqrt(dx * dx + dy * dy);
            double mod = std::abs(proj.P(ref, site));
            if (mod > 0.0) decay << num(d) << "," << num(std::log(mod)) << "\n";
        }
    }
    return 0;
}

} // namespace

int run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
    auto t0 = std::chrono::steady_clock::now();
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);

    int rc = 0;
    if (cfg.mode == "predict") rc = run_predict(cfg, dir, log);
    else if (cfg.mode == "sample-flat") rc = run_sample_flat(cfg, dir, log);
    else if (cfg.mode == "torus-spectrum") rc = run_torus_spectrum(cfg, dir, log);
    else if (cfg.mode == "torus-ensemble") rc = run_torus_ensemble(cfg, dir, log);
    else if (cfg.mode == "verify") {
        std::ostringstream table;
        rc = run_acceptance(table);
        log << table.str();
        open_out(dir, "verify.txt") << table.str();
    } else {
        throw ConfigError("unknown mode: " + cfg.mode);
    }

    // timestamps live only here so the data files stay byte-identical
    auto now = std::chrono::system_clock::now();
    std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::ostringstream stamp;
    stamp << std::put_time(std::gmtime(&tt), "%Y-%m-%dT%H:%M:%SZ");
    json meta;
    meta["timestamp_utc"] = stamp.str();
    meta["mode"] = cfg.mode;
    meta["config_hash"] = hash_hex(cfg.config_hash);
    meta["elapsed_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    open_out(dir, "meta.json") << meta.dump(2) << "\n";
    return rc;
}

} // namespace landaulab
