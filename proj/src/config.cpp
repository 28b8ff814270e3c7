#include "mmfees/config.hpp"

#include <fstream>
#include <sstream>

namespace mmfees {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad value for " + key + ": '" + value + "'");
    }
    if (pos != value.size()) throw ConfigError("bad value for " + key + ": '" + value + "'");
    return v;
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad value for " + key + ": '" + value + "'");
    }
    if (pos != value.size()) throw ConfigError("bad value for " + key + ": '" + value + "'");
    return v;
}

}  // namespace

void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "n_agents") cfg.market.n_agents = static_cast<int>(parse_int(key, value));
    else if (key == "K") cfg.market.grid = PriceGrid::uniform(static_cast<int>(parse_int(key, value)));
    else if (key == "volume_per_agent") cfg.market.volume_per_agent = parse_real(key, value);
    else if (key == "sigma") cfg.market.sigma = parse_real(key, value);
    else if (key == "c0") cfg.market.c0 = parse_real(key, value);
    else if (key == "c1") cfg.market.c1 = parse_real(key, value);
    else if (key == "xi") cfg.market.xi = parse_real(key, value);
    else if (key == "beta") cfg.fees.beta = parse_real(key, value);
    else if (key == "eta") cfg.fees.eta = parse_real(key, value);
    else if (key == "gamma") cfg.agent.gamma = parse_real(key, value);
    else if (key == "alpha") cfg.agent.alpha = parse_real(key, value);
    else if (key == "mu") cfg.agent.mu = parse_real(key, value);
    else if (key == "n_instances") cfg.n_instances = static_cast<int>(parse_int(key, value));
    else if (key == "convergence_window") cfg.convergence_window = parse_int(key, value);
    else if (key == "max_periods") cfg.max_periods = parse_int(key, value);
    else if (key == "eval_periods") cfg.eval_periods = parse_int(key, value);
    else if (key == "base_seed") cfg.base_seed = parse_int(key, value);
    else if (key == "skew_upper") cfg.agent.skew_upper = parse_real(key, value);
    else if (key == "skew_lower") cfg.agent.skew_lower = parse_real(key, value);
    else throw ConfigError("unknown config key: '" + key + "'");
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.market.grid.levels() < 1) throw ConfigError("K must be >= 1");
    for (int k = 1; k < cfg.market.grid.levels(); ++k)
        if (cfg.market.grid.deltas[k] <= cfg.market.grid.deltas[k - 1])
            throw ConfigError("price grid must be strictly increasing");
    if (cfg.market.sigma <= 0.0) throw ConfigError("sigma must be positive");
    if (cfg.market.c1 < 0.0) throw ConfigError("c1 must be non-negative");
    if (cfg.market.n_agents < 1) throw ConfigError("n_agents must be >= 1");
    if (cfg.market.volume_per_agent < 0.0) throw ConfigError("volume_per_agent must be >= 0");
    if (cfg.market.xi < 0.0) throw ConfigError("xi must be >= 0");
    if (cfg.agent.alpha <= 0.0 || cfg.agent.alpha > 1.0) throw ConfigError("alpha must be in (0, 1]");
    if (cfg.agent.gamma < 0.0 || cfg.agent.gamma >= 1.0) throw ConfigError("gamma must be in [0, 1)");
    if (cfg.agent.mu <= 0.0) throw ConfigError("mu must be positive");
    if (cfg.agent.skew_lower > cfg.agent.skew_upper) throw ConfigError("skew_lower exceeds skew_upper");
    if (cfg.n_instances < 1) throw ConfigError("n_instances must be >= 1");
    if (cfg.convergence_window < 1) throw ConfigError("convergence_window must be >= 1");
    if (cfg.max_periods < 1) throw ConfigError("max_periods must be >= 1");
    if (cfg.eval_periods < 1) throw ConfigError("eval_periods must be >= 1");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        apply_config_key(cfg, key, value);
    }
    validate_config(cfg);
    return cfg;
}

}  // namespace mmfees
