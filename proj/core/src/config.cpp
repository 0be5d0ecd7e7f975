#include "wfrec/config.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wfrec/errors.hpp"

namespace wfrec {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError("config: key '" + key + "' expects a number, got '" +
                          value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    const char* begin = value.c_str();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(begin, &end, 10);
    if (end == begin || *end != '\0' || value.find('-') != std::string::npos)
        throw ConfigError("config: key '" + key +
                          "' expects a nonnegative integer, got '" + value + "'");
    return v;
}

std::vector<double> parse_double_list(const std::string& key,
                                      const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty())
            throw ConfigError("config: key '" + key + "' has an empty list item");
        out.push_back(parse_double(key, t));
    }
    if (out.empty())
        throw ConfigError("config: key '" + key + "' expects a comma-separated list");
    return out;
}

}  // namespace

ModelParams RunConfig::model() const {
    try {
        return ModelParams(model_a, model_b, model_epsilon);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"model.a", [&](auto& k, auto& v) { cfg.model_a = parse_double(k, v); }},
        {"model.b", [&](auto& k, auto& v) { cfg.model_b = parse_double(k, v); }},
        {"model.epsilon",
         [&](auto& k, auto& v) { cfg.model_epsilon = parse_double(k, v); }},
        {"plan.c", [&](auto& k, auto& v) { cfg.plan.c = parse_double(k, v); }},
        {"plan.m_fraction",
         [&](auto& k, auto& v) { cfg.plan.m_fraction = parse_double(k, v); }},
        {"plan.alpha_fraction",
         [&](auto& k, auto& v) { cfg.plan.alpha_fraction = parse_double(k, v); }},
        {"plan.kappa_fraction",
         [&](auto& k, auto& v) { cfg.plan.kappa_fraction = parse_double(k, v); }},
        {"sim.scheme",
         [&](auto&, auto& v) { cfg.sim.scheme = scheme_from_name(v); }},
        {"sim.dt", [&](auto& k, auto& v) { cfg.sim.dt = parse_double(k, v); }},
        {"sim.t_max",
         [&](auto& k, auto& v) { cfg.sim.t_max = parse_double(k, v); }},
        {"sim.clamp_eps",
         [&](auto& k, auto& v) { cfg.sim.clamp_eps = parse_double(k, v); }},
        {"sim.master_seed",
         [&](auto& k, auto& v) { cfg.sim.master_seed = parse_u64(k, v); }},
        {"sim.n_paths",
         [&](auto& k, auto& v) { cfg.sim.n_paths = parse_u64(k, v); }},
        {"verify.recurrence_x0",
         [&](auto& k, auto& v) { cfg.verify.recurrence_x0 = parse_double(k, v); }},
        {"verify.recurrence_scheme",
         [&](auto&, auto& v) { cfg.verify.recurrence_scheme = scheme_from_name(v); }},
        {"verify.recurrence_dt",
         [&](auto& k, auto& v) { cfg.verify.recurrence_dt = parse_double(k, v); }},
        {"verify.boundary_x0",
         [&](auto& k, auto& v) { cfg.verify.boundary_x0 = parse_double(k, v); }},
        {"verify.boundary_horizon",
         [&](auto& k, auto& v) { cfg.verify.boundary_horizon = parse_double(k, v); }},
        {"verify.boundary_scheme",
         [&](auto&, auto& v) { cfg.verify.boundary_scheme = scheme_from_name(v); }},
        {"verify.touch_tolerance",
         [&](auto& k, auto& v) { cfg.verify.touch_tolerance = parse_double(k, v); }},
        {"verify.hit_x0",
         [&](auto& k, auto& v) { cfg.verify.hit_x0 = parse_double(k, v); }},
        {"verify.hit_beta",
         [&](auto& k, auto& v) { cfg.verify.hit_beta = parse_double(k, v); }},
        {"verify.stationary_x0",
         [&](auto& k, auto& v) { cfg.verify.stationary_x0 = parse_double(k, v); }},
        {"verify.stationary_t",
         [&](auto& k, auto& v) { cfg.verify.stationary_t = parse_double(k, v); }},
        {"verify.bins", [&](auto& k, auto& v) { cfg.verify.bins = parse_u64(k, v); }},
        {"verify.tv_tolerance",
         [&](auto& k, auto& v) { cfg.verify.tv_tolerance = parse_double(k, v); }},
        {"verify.decay_x0",
         [&](auto& k, auto& v) { cfg.verify.decay_x0 = parse_double(k, v); }},
        {"verify.decay_snapshots",
         [&](auto& k, auto& v) { cfg.verify.decay_snapshots = parse_double_list(k, v); }},
        {"verify.censor_tolerance",
         [&](auto& k, auto& v) { cfg.verify.censor_tolerance = parse_double(k, v); }},
        {"verify.kurtosis_guard",
         [&](auto& k, auto& v) { cfg.verify.kurtosis_guard = parse_double(k, v); }},
        {"drift.grid_size",
         [&](auto& k, auto& v) { cfg.drift_grid_size = (std::size_t)parse_u64(k, v); }},
        {"simulate.x0",
         [&](auto& k, auto& v) { cfg.simulate.x0 = parse_double(k, v); }},
        {"simulate.stop",
         [&](auto&, auto& v) {
             if (v != "none" && v != "tau_alpha" && v != "gamma_beta" &&
                 v != "t_kappa")
                 throw ConfigError(
                     "config: simulate.stop must be one of none, tau_alpha, "
                     "gamma_beta, t_kappa");
             cfg.simulate.stop = v;
         }},
        {"simulate.threshold",
         [&](auto& k, auto& v) { cfg.simulate.threshold = parse_double(k, v); }},
        {"out.dir", [&](auto&, auto& v) { cfg.out_dir = v; }},
        {"out.format",
         [&](auto&, auto& v) { cfg.format = format_from_name(v); }},
    };

    std::stringstream lines(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty value for '" + key + "'");
        it->second(key, value);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::EulerClamp: return "euler_clamp";
        case Scheme::EulerReflect: return "euler_reflect";
        case Scheme::Lamperti: return "lamperti";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "euler_clamp") return Scheme::EulerClamp;
    if (name == "euler_reflect") return Scheme::EulerReflect;
    if (name == "lamperti") return Scheme::Lamperti;
    throw ConfigError("config: unknown scheme '" + name +
                      "' (euler_clamp, euler_reflect, lamperti)");
}

std::string format_name(ReportFormat f) {
    switch (f) {
        case ReportFormat::Json: return "json";
        case ReportFormat::Csv: return "csv";
        case ReportFormat::Both: return "both";
    }
    return "?";
}

ReportFormat format_from_name(const std::string& name) {
    if (name == "json") return ReportFormat::Json;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "both") return ReportFormat::Both;
    throw ConfigError("config: unknown format '" + name + "' (json, csv, both)");
}

}  // namespace wfrec
