#include "landaulab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace landaulab {

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("line " + std::to_string(line) + ": bad number '" + s + "'");
    }
}

long to_long(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("line " + std::to_string(line) + ": bad integer '" + s + "'");
    }
}

bool to_bool(const std::string& s, int line) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ConfigError("line " + std::to_string(line) + ": bad boolean '" + s + "'");
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    cfg.config_hash = fnv1a_hash(text);

    std::stringstream ss(text);
    std::string raw;
    int line = 0;
    bool mode_seen = false;
    while (std::getline(ss, raw)) {
        ++line;
        std::string s = raw;
        auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (val.empty())
            throw ConfigError("line " + std::to_string(line) + ": empty value for " + key);

        if (key == "mode") {
            cfg.mode = val;
            mode_seen = true;
        } else if (key == "model.n") {
            cfg.model_n = static_cast<int>(to_long(val, line));
        } else if (key == "model.a") {
            cfg.model_a.clear();
            for (const auto& t : split_list(val)) cfg.model_a.push_back(to_double(t, line));
        } else if (key == "model.V") {
            cfg.model_V = to_double(val, line);
        } else if (key == "window.alpha") {
            cfg.window_alpha = to_double(val, line);
        } else if (key == "window.beta") {
            cfg.window_beta = to_double(val, line);
        } else if (key == "window.margin") {
            cfg.window_margin = to_double(val, line);
        } else if (key == "flat.box_radius") {
            cfg.flat_box_radius = to_double(val, line);
        } else if (key == "flat.grid_step") {
            cfg.flat_grid_step = to_double(val, line);
        } else if (key == "flat.p") {
            cfg.flat_p.clear();
            for (const auto& t : split_list(val))
                cfg.flat_p.push_back(static_cast<int>(to_long(t, line)));
        } else if (key == "flat.max_nodes") {
            cfg.flat_max_nodes = to_long(val, line);
        } else if (key == "flat.jitter") {
            cfg.flat_jitter = to_bool(val, line);
        } else if (key == "torus.M") {
            cfg.torus_M = static_cast<int>(to_long(val, line));
        } else if (key == "torus.p") {
            cfg.torus_p.clear();
            for (const auto& t : split_list(val))
                cfg.torus_p.push_back(static_cast<int>(to_long(t, line)));
        } else if (key == "torus.V") {
            cfg.torus_V = to_double(val, line);
        } else if (key == "stats.f") {
            cfg.stats_f = val;
        } else if (key == "stats.f_params") {
            cfg.stats_f_params.clear();
            for (const auto& t : split_list(val))
                cfg.stats_f_params.push_back(to_double(t, line));
        } else if (key == "stats.n_samples") {
            cfg.stats_n_samples = static_cast<int>(to_long(val, line));
        } else if (key == "stats.base_seed") {
            cfg.stats_base_seed = static_cast<std::uint64_t>(to_long(val, line));
        } else if (key == "output") {
            cfg.output_dir = val;
        } else {
            throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    if (!mode_seen) throw ConfigError("config: missing 'mode'");

    static const char* modes[] = {"predict", "sample-flat", "torus-spectrum",
                                  "torus-ensemble", "verify"};
    bool ok = false;
    for (const char* m : modes) ok = ok || cfg.mode == m;
    if (!ok) throw ConfigError("config: unknown mode '" + cfg.mode + "'");

    // numeric guards re-checked at parse time, mirroring the owning modules
    if (cfg.model_n < 1) throw ConfigError("config: model.n must be >= 1");
    if (static_cast<int>(cfg.model_a.size()) != cfg.model_n)
        throw ConfigError("config: model.a must list n values");
    for (double a : cfg.model_a)
        if (a <= 0.0) throw ConfigError("config: model.a entries must be positive");
    if (cfg.window_alpha && cfg.window_beta && !(*cfg.window_alpha < *cfg.window_beta))
        throw ConfigError("config: window.alpha must be < window.beta");
    if (cfg.flat_grid_step <= 0.0) throw ConfigError("config: flat.grid_step must be positive");
    if (cfg.torus_M < 8) throw ConfigError("config: torus.M must be >= 8");
    for (int p : cfg.torus_p)
        if (p < 1 || p * 20 > cfg.torus_M * cfg.torus_M)
            throw ConfigError("config: torus.p outside [1, M^2/20]");
    for (int p : cfg.flat_p)
        if (p < 1) throw ConfigError("config: flat.p entries must be >= 1");
    if (cfg.stats_n_samples < 2) throw ConfigError("config: stats.n_samples must be >= 2");

    bool needs_window = cfg.mode == "predict" || cfg.mode == "sample-flat";
    if (needs_window && (!cfg.window_alpha || !cfg.window_beta))
        throw ConfigError("config: mode '" + cfg.mode + "' requires window.alpha/window.beta");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace landaulab
