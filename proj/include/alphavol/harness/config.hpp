#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "alphavol/domain_spec.hpp"

namespace alphavol::harness {

enum class ExperimentKind { ErrorCurve, Coverage, ConvexComparison };

inline std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::ErrorCurve: return "error-curve";
        case ExperimentKind::Coverage: return "coverage";
        case ExperimentKind::ConvexComparison: return "convex-compare";
    }
    return "?";
}

inline ExperimentKind parse_kind(const std::string& s) {
    if (s == "error-curve") return ExperimentKind::ErrorCurve;
    if (s == "coverage") return ExperimentKind::Coverage;
    if (s == "convex-compare") return ExperimentKind::ConvexComparison;
    throw std::invalid_argument("unknown experiment kind: " + s);
}

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::ErrorCurve;
    std::string domain = "annulus(0.25,1)";
    std::vector<double> alpha_list{0.15, 0.25, 0.35};
    std::vector<std::size_t> n_list{250, 500, 1000, 2000, 4000};
    std::vector<int> m_rule{5, 10};  ///< j values; m = floor(n j / 10), j = 10 is the plug-in
    std::size_t replicates = 200;
    std::size_t replicate_offset = 0;  ///< first replicate index, for splitting a run
    std::size_t bag_count = 0;         ///< 0 = single split
    std::uint64_t seed = 20240601;
    double tolerance = 1e-4;  ///< area tolerance relative to the hull's bounding-box area
    std::vector<double> ci_levels{0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
    std::string output_dir = ".";
    unsigned threads = 0;  ///< 0 = hardware concurrency

    static ExperimentConfig defaults(ExperimentKind kind) {
        ExperimentConfig c;
        c.kind = kind;
        if (kind == ExperimentKind::Coverage) {
            c.alpha_list = {0.25};
            c.n_list = {500, 1000};
            c.m_rule = {5};
        } else if (kind == ExperimentKind::ConvexComparison) {
            c.domain = "ellipse(5,2)";
            c.alpha_list = {10.0};
            c.n_list = {100, 200, 500, 1000, 2000};
            c.m_rule = {5};
        }
        return c;
    }

    void validate() const {
        parse_domain(domain);
        if (alpha_list.empty() || n_list.empty() || m_rule.empty()) throw std::invalid_argument("config: empty list");
        for (double a : alpha_list)
            if (!(a > 0.0)) throw std::invalid_argument("config: alpha must be positive");
        for (std::size_t n : n_list)
            if (n < 2) throw std::invalid_argument("config: n must be >= 2");
        for (int j : m_rule)
            if (j < 1 || j > 10) throw std::invalid_argument("config: m_rule entries must lie in 1..10");
        if (replicates == 0) throw std::invalid_argument("config: replicates must be >= 1");
        if (!(tolerance > 0.0)) throw std::invalid_argument("config: tolerance must be positive");
        if (kind == ExperimentKind::Coverage) {
            if (ci_levels.empty()) throw std::invalid_argument("config: ci_levels empty");
            for (double l : ci_levels)
                if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("config: ci level must lie in (0, 1)");
            if (m_rule.front() >= 10) throw std::invalid_argument("config: coverage needs a split (j < 10)");
        }
    }
};

/// m = floor(n j / 10).
inline std::size_t m_for(std::size_t n, int j) { return n * static_cast<std::size_t>(j) / 10; }

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& value) {
    std::vector<T> out;
    std::string v = value;
    for (char& ch : v)
        if (ch == ',' || ch == '[' || ch == ']' || ch == '{' || ch == '}') ch = ' ';
    std::istringstream is(v);
    std::string tok;
    while (is >> tok) {
        const double d = alphavol::detail::parse_real(tok, key);
        if constexpr (std::is_integral_v<T>) {
            if (d < 0.0 || d != std::floor(d)) throw std::invalid_argument("config: " + key + " needs integers");
        }
        out.push_back(static_cast<T>(d));
    }
    if (out.empty()) throw std::invalid_argument("config: empty list for " + key);
    return out;
}

}  // namespace detail

/// Line-oriented `key = value`; '#' starts a comment.
inline std::map<std::string, std::string> parse_key_values(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = alphavol::detail::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = alphavol::detail::trim(std::string_view(t).substr(0, eq));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = alphavol::detail::trim(std::string_view(t).substr(eq + 1));
    }
    return kv;
}

inline ExperimentConfig parse_config(std::istream& is, ExperimentKind kind) {
    ExperimentConfig c = ExperimentConfig::defaults(kind);
    for (const auto& [key, value] : parse_key_values(is)) {
        auto whole = [&](const char* k) {
            const auto v = detail::parse_list<std::uint64_t>(k, value);
            if (v.size() != 1) throw std::invalid_argument(std::string("config: ") + k + " takes one value");
            return v.front();
        };
        if (key == "domain") c.domain = value;
        else if (key == "alpha_list" || key == "alpha") c.alpha_list = detail::parse_list<double>(key, value);
        else if (key == "n_list" || key == "n") c.n_list = detail::parse_list<std::size_t>(key, value);
        else if (key == "m_rule" || key == "j") c.m_rule = detail::parse_list<int>(key, value);
        else if (key == "replicates" || key == "B") c.replicates = whole("replicates");
        else if (key == "replicate_offset") c.replicate_offset = whole("replicate_offset");
        else if (key == "bag_count" || key == "b") c.bag_count = whole("bag_count");
        else if (key == "seed") c.seed = std::stoull(value);
        else if (key == "tolerance") c.tolerance = alphavol::detail::parse_real(value, key);
        else if (key == "ci_levels") c.ci_levels = detail::parse_list<double>(key, value);
        else if (key == "output_dir") c.output_dir = value;
        else if (key == "threads") c.threads = static_cast<unsigned>(whole("threads"));
        else if (key == "experiment") {
            if (parse_kind(value) != kind) throw std::invalid_argument("config: experiment is " + value);
        } else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::string& path, ExperimentKind kind) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    return parse_config(in, kind);
}

}  // namespace alphavol::harness
