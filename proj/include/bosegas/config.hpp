#pragma once

// Run configuration: a flat key=value format with dotted section names, with
// JSON accepted as an alternative. Parsing, validation, and serialization
// round-trip to an identical value so runs can be reproduced from their own
// output.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bosegas/potential.hpp"

namespace bosegas {

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string f, const std::string& reason)
        : std::runtime_error(f + ": " + reason), field(std::move(f)) {}
};

struct RunConfig {
    std::string potential_kind = "square_barrier";
    double potential_v0 = 2.0;
    double potential_radius = 1.0;
    std::string potential_table;  // sample file for the tabulated kind
    double N = 20.0;
    double ell = 0.25;
    int cutoff = 60;
    int threads = 0;  // 0 = unset; resolved from the environment, else 1
    std::string mode = "both";
    int max_m = 240;
    bool fit = false;
    double rho = 1e-4;
    double a = 1.0;

    bool operator==(const RunConfig&) const = default;
};

// Shortest round-trip decimal form, so serialize -> parse -> serialize is a
// fixed point.
inline std::string format_double(double x) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, p);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline double parse_double_field(const std::string& key, std::string_view v) {
    const std::string s(v);
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key, "not a number: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError(key, "trailing characters in number: '" + s + "'");
    return x;
}

inline int parse_int_field(const std::string& key, std::string_view v) {
    const std::string s(v);
    std::size_t pos = 0;
    long x = 0;
    try {
        x = std::stol(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key, "not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw ConfigError(key, "trailing characters in integer: '" + s + "'");
    return static_cast<int>(x);
}

inline bool parse_bool_field(const std::string& key, std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key, "expected true or false, got '" + std::string(v) + "'");
}

inline void apply_field(RunConfig& c, const std::string& key, std::string_view value) {
    if (key == "potential.kind") c.potential_kind = std::string(value);
    else if (key == "potential.v0") c.potential_v0 = parse_double_field(key, value);
    else if (key == "potential.radius") c.potential_radius = parse_double_field(key, value);
    else if (key == "potential.table") c.potential_table = std::string(value);
    else if (key == "N") c.N = parse_double_field(key, value);
    else if (key == "ell") c.ell = parse_double_field(key, value);
    else if (key == "cutoff") c.cutoff = parse_int_field(key, value);
    else if (key == "threads") c.threads = parse_int_field(key, value);
    else if (key == "mode") c.mode = std::string(value);
    else if (key == "max_m") c.max_m = parse_int_field(key, value);
    else if (key == "fit") c.fit = parse_bool_field(key, value);
    else if (key == "rho") c.rho = parse_double_field(key, value);
    else if (key == "a") c.a = parse_double_field(key, value);
    else throw ConfigError(key, "unknown configuration key");
}

inline void apply_json_value(RunConfig& c, const std::string& key, const nlohmann::json& v) {
    std::string text;
    if (v.is_string()) text = v.get<std::string>();
    else if (v.is_boolean()) text = v.get<bool>() ? "true" : "false";
    else if (v.is_number_integer()) text = std::to_string(v.get<long long>());
    else if (v.is_number_float()) text = format_double(v.get<double>());
    else throw ConfigError(key, "unsupported JSON value type");
    apply_field(c, key, text);
}

}  // namespace detail

// key=value text, one pair per line; '#' starts a comment; sections are
// expressed with dotted keys (potential.v0=2).
inline RunConfig parse_config_kv(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string_view body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key=value");
        const std::string key(detail::trim(body.substr(0, eq)));
        const std::string_view value = detail::trim(body.substr(eq + 1));
        detail::apply_field(c, key, value);
    }
    return c;
}

// JSON alternative: either nested ({"potential": {"v0": 2}}) or flat dotted
// keys ({"potential.v0": 2}).
inline RunConfig parse_config_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("json", e.what());
    }
    if (!j.is_object()) throw ConfigError("json", "top-level value must be an object");
    RunConfig c;
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            for (const auto& [sub, subval] : value.items()) {
                detail::apply_json_value(c, key + "." + sub, subval);
            }
        } else {
            detail::apply_json_value(c, key, value);
        }
    }
    return c;
}

inline RunConfig parse_config(const std::string& text) {
    for (const char ch : text) {
        if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
        if (ch == '{') return parse_config_json(text);
        break;
    }
    return parse_config_kv(text);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

inline std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    out << "potential.kind=" << c.potential_kind << '\n';
    out << "potential.v0=" << format_double(c.potential_v0) << '\n';
    out << "potential.radius=" << format_double(c.potential_radius) << '\n';
    if (!c.potential_table.empty()) out << "potential.table=" << c.potential_table << '\n';
    out << "N=" << format_double(c.N) << '\n';
    out << "ell=" << format_double(c.ell) << '\n';
    out << "cutoff=" << c.cutoff << '\n';
    out << "threads=" << c.threads << '\n';
    out << "mode=" << c.mode << '\n';
    out << "max_m=" << c.max_m << '\n';
    out << "fit=" << (c.fit ? "true" : "false") << '\n';
    out << "rho=" << format_double(c.rho) << '\n';
    out << "a=" << format_double(c.a) << '\n';
    return out.str();
}

inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["potential"]["kind"] = c.potential_kind;
    j["potential"]["v0"] = c.potential_v0;
    j["potential"]["radius"] = c.potential_radius;
    if (!c.potential_table.empty()) j["potential"]["table"] = c.potential_table;
    j["N"] = c.N;
    j["ell"] = c.ell;
    j["cutoff"] = c.cutoff;
    j["threads"] = c.threads;
    j["mode"] = c.mode;
    j["max_m"] = c.max_m;
    j["fit"] = c.fit;
    j["rho"] = c.rho;
    j["a"] = c.a;
    return j;
}

inline void validate_config(const RunConfig& c) {
    if (c.potential_kind != "square_barrier" && c.potential_kind != "smooth_bump" &&
        c.potential_kind != "tabulated")
        throw ConfigError("potential.kind", "must be square_barrier, smooth_bump or tabulated");
    if (c.potential_v0 < 0.0) throw ConfigError("potential.v0", "must be nonnegative");
    if (c.potential_radius <= 0.0) throw ConfigError("potential.radius", "must be positive");
    if (c.potential_kind == "tabulated" && c.potential_table.empty())
        throw ConfigError("potential.table", "required for the tabulated kind");
    if (!(c.N > 1.0)) throw ConfigError("N", "must exceed 1");
    if (!(c.ell > 0.0 && c.ell < 0.5)) throw ConfigError("ell", "must lie in (0, 1/2)");
    if (c.cutoff < 1) throw ConfigError("cutoff", "must be at least 1");
    if (c.threads < 0) throw ConfigError("threads", "must be nonnegative");
    if (c.mode != "lattice" && c.mode != "integral" && c.mode != "both")
        throw ConfigError("mode", "must be lattice, integral or both");
    if (c.max_m < 8) throw ConfigError("max_m", "must be at least 8");
    if (c.rho < 0.0) throw ConfigError("rho", "must be nonnegative");
    if (c.a < 0.0) throw ConfigError("a", "must be nonnegative");
}

// Resolved thread count: flag/config value if set, else the environment
// default, else single-threaded.
inline int resolve_threads(const RunConfig& c) {
    if (c.threads > 0) return c.threads;
    if (const char* env = std::getenv("BOSEGAS_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    return 1;
}

// Two-column text file (r, V(r)) with strictly increasing r.
inline RadialPotential load_tabulated_potential(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("potential.table", "cannot open file '" + path + "'");
    std::vector<std::pair<double, double>> pts;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        double r = 0.0, v = 0.0;
        if (row >> r >> v) pts.emplace_back(r, v);
    }
    if (pts.size() < 4) throw ConfigError("potential.table", "need at least 4 samples");
    return RadialPotential::tabulated(std::move(pts));
}

inline RadialPotential make_potential(const RunConfig& c) {
    if (c.potential_kind == "square_barrier")
        return RadialPotential::square(c.potential_v0, c.potential_radius);
    if (c.potential_kind == "smooth_bump")
        return RadialPotential::bump(c.potential_v0, c.potential_radius);
    return load_tabulated_potential(c.potential_table);
}

}  // namespace bosegas
