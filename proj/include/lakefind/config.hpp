#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lakefind/common.hpp"

namespace lakefind {

/// Engine configuration. One instance drives ingestion, profiling, sketching,
/// index construction and querying; the index manifest records a full
/// snapshot so queries run with the exact parameters the index was built with.
struct Config {
    int qgram_size = 4;
    int minhash_size = 256;
    int rp_bits = 256;
    double lsh_threshold = 0.7;
    int forest_trees = 8;
    int forest_max_depth = 32;
    int lookup_budget_factor = 4;
    double theta_num = 0.9;
    double subject_alpha = 0.4;
    double subject_beta = 0.3;
    double subject_gamma = 0.3;
    std::array<double, 5> evidence_weights{1.0, 1.0, 1.0, 1.0, 1.0};
    std::string embedding_path;
    std::size_t sample_cap = 100000;
    std::uint64_t seed = 42;
    int max_join_len = 3;
    /// Cell values equal (case-insensitively) to any of these count as nulls.
    std::vector<std::string> null_markers{"", "-", "na", "n/a", "null"};

    void validate() const {
        if (qgram_size < 2) throw ConfigError("qgram_size must be >= 2");
        if (minhash_size < 16) throw ConfigError("minhash_size must be >= 16");
        if (rp_bits < 16) throw ConfigError("rp_bits must be >= 16");
        if (!(lsh_threshold > 0.0 && lsh_threshold < 1.0))
            throw ConfigError("lsh_threshold must be in (0, 1)");
        if (forest_trees < 1) throw ConfigError("forest_trees must be >= 1");
        if (forest_max_depth < 1) throw ConfigError("forest_max_depth must be >= 1");
        if (minhash_size / forest_trees < 1 || rp_bits / forest_trees < 1)
            throw ConfigError("forest_trees exceeds signature length");
        if (lookup_budget_factor < 1) throw ConfigError("lookup_budget_factor must be >= 1");
        if (!(theta_num > 0.0 && theta_num <= 1.0))
            throw ConfigError("theta_num must be in (0, 1]");
        if (sample_cap < 1) throw ConfigError("sample_cap must be >= 1");
        if (max_join_len < 1) throw ConfigError("max_join_len must be >= 1");
        bool any = false;
        for (double w : evidence_weights) {
            if (w < 0.0) throw ConfigError("evidence weights must be non-negative");
            if (w > 0.0) any = true;
        }
        if (!any) throw ConfigError("evidence weights must not all be zero");
    }

    /// Tree depth for a signature of `signature_len` components: trees
    /// partition the signature, capped at forest_max_depth.
    int forest_depth_for(int signature_len) const {
        int d = signature_len / forest_trees;
        return d < forest_max_depth ? d : forest_max_depth;
    }

    bool is_null_marker(std::string_view trimmed_cell) const {
        for (const auto& m : null_markers)
            if (iequals(trimmed_cell, m)) return true;
        return false;
    }

    void set(std::string_view key, std::string_view value);
    static Config from_file(const std::filesystem::path& path);
};

namespace detail {

inline long long parse_int_or_throw(std::string_view key, std::string_view v) {
    long long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("bad integer for " + std::string(key) + ": " + std::string(v));
    return out;
}

inline double parse_double_or_throw(std::string_view key, std::string_view v) {
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("bad number for " + std::string(key) + ": " + std::string(v));
    return out;
}

}  // namespace detail

inline void Config::set(std::string_view key, std::string_view value) {
    using detail::parse_double_or_throw;
    using detail::parse_int_or_throw;
    std::string v = trim(value);
    if (key == "qgram_size") qgram_size = static_cast<int>(parse_int_or_throw(key, v));
    else if (key == "minhash_size") minhash_size = static_cast<int>(parse_int_or_throw(key, v));
    else if (key == "rp_bits") rp_bits = static_cast<int>(parse_int_or_throw(key, v));
    else if (key == "lsh_threshold") lsh_threshold = parse_double_or_throw(key, v);
    else if (key == "forest_trees") forest_trees = static_cast<int>(parse_int_or_throw(key, v));
    else if (key == "forest_max_depth") forest_max_depth = static_cast<int>(parse_int_or_throw(key, v));
    else if (key == "lookup_budget_factor") lookup_budget_factor = static_cast<int>(parse_int_or_throw(key, v));
    else if (key == "theta_num") theta_num = parse_double_or_throw(key, v);
    else if (key == "subject_alpha") subject_alpha = parse_double_or_throw(key, v);
    else if (key == "subject_beta") subject_beta = parse_double_or_throw(key, v);
    else if (key == "subject_gamma") subject_gamma = parse_double_or_throw(key, v);
    else if (key == "embedding_path") embedding_path = v;
    else if (key == "sample_cap") sample_cap = static_cast<std::size_t>(parse_int_or_throw(key, v));
    else if (key == "seed") seed = static_cast<std::uint64_t>(parse_int_or_throw(key, v));
    else if (key == "max_join_len") max_join_len = static_cast<int>(parse_int_or_throw(key, v));
    else if (key == "evidence_weights") {
        auto parts = split(v, ',');
        if (parts.size() != 5) throw ConfigError("evidence_weights needs 5 comma-separated values");
        for (std::size_t i = 0; i < 5; ++i)
            evidence_weights[i] = parse_double_or_throw(key, trim(parts[i]));
    } else if (key == "null_markers") {
        null_markers.clear();
        for (auto& p : split(v, ',')) null_markers.push_back(to_lower(trim(p)));
        null_markers.push_back("");  // empty cell is always null
    } else {
        throw ConfigError("unknown config key: " + std::string(key));
    }
}

inline Config Config::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path.string());
    Config cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = trim_view(line);
        if (s.empty() || s.front() == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not key = value");
        cfg.set(trim(s.substr(0, eq)), s.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

}  // namespace lakefind
