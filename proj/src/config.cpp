#include "coevo/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace coevo {

void ScenarioConfig::validate() const {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    if (!(p0 >= 0.0 && p0 < 1.0)) fail("p0 must lie in [0,1)");
    if (!(q0 > 0.0 && q0 < 1.0)) fail("q0 must lie in (0,1)");
    if (!(lambda >= 0.0)) fail("lambda must be >= 0");
    if (!(gamma >= 0.0)) fail("gamma must be >= 0");
    if (!(horizon_T > 0.0)) fail("horizon_T must be > 0");
    if (n_steps < 10) fail("n_steps must be >= 10");
    if (graphon_resolution < 1) fail("graphon_resolution must be >= 1");
    if (n_vertices < 2) fail("n_vertices must be >= 2");
    if (replicates < 1) fail("replicates must be >= 1");

    auto prob = [&](double v, const char* name) {
        if (!(v >= 0.0 && v <= 1.0)) fail(std::string(name) + " must lie in [0,1]");
    };
    switch (kernel.kind) {
        case KernelKind::Constant:
            prob(kernel.const_ss, "pi_ss");
            prob(kernel.const_si, "pi_si");
            prob(kernel.const_ii, "pi_ii");
            break;
        case KernelKind::Behavioral:
            if (!(kernel.phi1 > 0.0 && kernel.phi1 < kernel.phi2))
                fail("behavioral kernel requires 0 < phi1 < phi2");
            if (!(kernel.window_a > 0.0)) fail("window_a must be > 0");
            prob(kernel.p_ss_norm, "p_ss_norm");
            prob(kernel.p_ss_dist, "p_ss_dist");
            prob(kernel.p_si_norm, "p_si_norm");
            prob(kernel.p_si_dist, "p_si_dist");
            prob(kernel.pi_ii, "pi_ii");
            break;
        case KernelKind::Table:
            if (kernel.si_ages.size() != kernel.si_values.size() || kernel.si_ages.empty())
                fail("table kernel requires matching non-empty si_ages/si_values");
            for (std::size_t i = 1; i < kernel.si_ages.size(); ++i)
                if (kernel.si_ages[i] <= kernel.si_ages[i - 1])
                    fail("si_ages must be strictly increasing");
            for (double v : kernel.si_values) prob(v, "si_values entry");
            prob(kernel.const_ss, "pi_ss");
            prob(kernel.const_ii, "pi_ii");
            break;
    }
}

namespace {

struct RawConfig {
    // section -> key -> (value, line number)
    std::map<std::string, std::map<std::string, std::pair<std::string, int>>> kv;
    std::string origin;

    bool has(const std::string& sec, const std::string& key) const {
        auto it = kv.find(sec);
        return it != kv.end() && it->second.count(key) > 0;
    }
    std::string take(const std::string& sec, const std::string& key,
                     std::set<std::string>& consumed) {
        auto it = kv.find(sec);
        if (it == kv.end() || !it->second.count(key))
            throw ConfigError(origin + ": missing required field '" + key + "' in section [" +
                              sec + "]");
        consumed.insert(sec + "." + key);
        return it->second.at(key).first;
    }
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& what) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("field '" + what + "': cannot parse '" + v + "' as a number");
    return x;
}

long long parse_int(const std::string& v, const std::string& what) {
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("field '" + what + "': cannot parse '" + v + "' as an integer");
    return x;
}

std::vector<double> parse_list(const std::string& v, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), what));
    if (out.empty()) throw ConfigError("field '" + what + "': empty list");
    return out;
}

RawConfig tokenize(const std::string& text, const std::string& origin) {
    RawConfig raw;
    raw.origin = origin;
    std::stringstream ss(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
        if (raw.kv[section].count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        raw.kv[section][key] = {val, lineno};
    }
    return raw;
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
    RawConfig raw = tokenize(text, origin);
    std::set<std::string> consumed;
    ScenarioConfig cfg;

    cfg.p0 = parse_double(raw.take("model", "p0", consumed), "p0");
    cfg.q0 = parse_double(raw.take("model", "q0", consumed), "q0");
    cfg.lambda = parse_double(raw.take("model", "lambda", consumed), "lambda");
    cfg.gamma = parse_double(raw.take("model", "gamma", consumed), "gamma");
    cfg.horizon_T = parse_double(raw.take("model", "horizon_T", consumed), "horizon_T");

    std::string kind = raw.take("kernel", "type", consumed);
    if (kind == "constant") {
        cfg.kernel.kind = KernelKind::Constant;
        cfg.kernel.const_ss = parse_double(raw.take("kernel", "pi_ss", consumed), "pi_ss");
        cfg.kernel.const_si = parse_double(raw.take("kernel", "pi_si", consumed), "pi_si");
        cfg.kernel.const_ii = parse_double(raw.take("kernel", "pi_ii", consumed), "pi_ii");
    } else if (kind == "behavioral") {
        cfg.kernel.kind = KernelKind::Behavioral;
        cfg.kernel.phi1 = parse_double(raw.take("kernel", "phi1", consumed), "phi1");
        cfg.kernel.phi2 = parse_double(raw.take("kernel", "phi2", consumed), "phi2");
        cfg.kernel.window_a = parse_double(raw.take("kernel", "window_a", consumed), "window_a");
        cfg.kernel.p_ss_norm = parse_double(raw.take("kernel", "p_ss_norm", consumed), "p_ss_norm");
        cfg.kernel.p_ss_dist = parse_double(raw.take("kernel", "p_ss_dist", consumed), "p_ss_dist");
        cfg.kernel.p_si_norm = parse_double(raw.take("kernel", "p_si_norm", consumed), "p_si_norm");
        cfg.kernel.p_si_dist = parse_double(raw.take("kernel", "p_si_dist", consumed), "p_si_dist");
        cfg.kernel.pi_ii = parse_double(raw.take("kernel", "pi_ii", consumed), "pi_ii");
    } else if (kind == "table") {
        cfg.kernel.kind = KernelKind::Table;
        cfg.kernel.si_ages = parse_list(raw.take("kernel", "si_ages", consumed), "si_ages");
        cfg.kernel.si_values = parse_list(raw.take("kernel", "si_values", consumed), "si_values");
        cfg.kernel.const_ss = parse_double(raw.take("kernel", "pi_ss", consumed), "pi_ss");
        cfg.kernel.const_ii = parse_double(raw.take("kernel", "pi_ii", consumed), "pi_ii");
    } else {
        throw ConfigError(origin + ": unknown kernel type '" + kind + "'");
    }

    cfg.n_steps = static_cast<int>(parse_int(raw.take("solver", "n_steps", consumed), "n_steps"));
    cfg.graphon_resolution = static_cast<int>(
        parse_int(raw.take("solver", "graphon_resolution", consumed), "graphon_resolution"));

    cfg.n_vertices = static_cast<int>(parse_int(raw.take("sim", "n_vertices", consumed), "n_vertices"));
    cfg.base_seed = static_cast<std::uint64_t>(
        parse_int(raw.take("sim", "base_seed", consumed), "base_seed"));
    cfg.replicates = static_cast<int>(parse_int(raw.take("sim", "replicates", consumed), "replicates"));

    // unknown keys are hard errors: silent typos in rate parameters are the
    // dominant user error
    for (const auto& [sec, keys] : raw.kv)
        for (const auto& [key, val] : keys)
            if (!consumed.count(sec + "." + key))
                throw ConfigError(origin + ":" + std::to_string(val.second) + ": unknown key '" +
                                  key + "' in section [" + sec + "]");

    cfg.validate();
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

ScenarioConfig behavioral_reference_config() {
    ScenarioConfig cfg;
    cfg.p0 = 0.1;
    cfg.q0 = 0.05;
    cfg.lambda = 10.0;
    cfg.gamma = 20.0;
    cfg.horizon_T = 5.0;
    cfg.kernel.kind = KernelKind::Behavioral;
    cfg.kernel.phi1 = 0.24;
    cfg.kernel.phi2 = 0.28;
    cfg.kernel.window_a = 1.0;
    cfg.kernel.p_ss_norm = 0.9;
    cfg.kernel.p_ss_dist = 0.3;
    cfg.kernel.p_si_norm = 0.6;
    cfg.kernel.p_si_dist = 0.01;
    cfg.kernel.pi_ii = 0.3;
    cfg.n_steps = 1000;
    cfg.graphon_resolution = 50;
    cfg.n_vertices = 200;
    cfg.base_seed = 1;
    cfg.replicates = 1;
    return cfg;
}

} // namespace coevo
