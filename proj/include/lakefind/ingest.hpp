#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lakefind/common.hpp"
#include "lakefind/config.hpp"
#include "lakefind/csv.hpp"
#include "lakefind/table.hpp"

namespace lakefind {

/// Parses `s` as a finite number, stripping thousands separators. The whole
/// string must be consumed.
inline bool parse_number(std::string_view s, double& out) {
    if (s.empty()) return false;
    std::string cleaned;
    cleaned.reserve(s.size());
    for (char c : s) {
        if (c == ',') continue;
        cleaned += c;
    }
    if (cleaned.empty()) return false;
    const char* b = cleaned.data();
    const char* e = b + cleaned.size();
    if (*b == '+') ++b;  // from_chars rejects an explicit plus
    if (b == e) return false;
    double v = 0;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e || !std::isfinite(v)) return false;
    out = v;
    return true;
}

/// A column is Numeric iff at least theta_num of its non-null values parse as
/// finite numbers. All-null columns are Text.
inline ColumnKind infer_kind(const std::vector<std::string>& raw_cells, const Config& cfg) {
    std::size_t non_null = 0;
    std::size_t numeric = 0;
    double v;
    for (const auto& cell : raw_cells) {
        std::string_view t = trim_view(cell);
        if (cfg.is_null_marker(t)) continue;
        ++non_null;
        if (parse_number(t, v)) ++numeric;
    }
    if (non_null == 0) return ColumnKind::Text;
    return static_cast<double>(numeric) >= cfg.theta_num * static_cast<double>(non_null)
               ? ColumnKind::Numeric
               : ColumnKind::Text;
}

struct LoadReport {
    std::vector<std::string> warnings;               // unreadable / headerless files
    std::map<std::string, std::size_t> skipped_rows;  // dataset id -> malformed rows

    std::size_t total_skipped_rows() const {
        std::size_t n = 0;
        for (const auto& [_, v] : skipped_rows) n += v;
        return n;
    }
};

struct Lake {
    std::vector<Dataset> datasets;
    LoadReport report;
};

namespace detail {

/// Duplicate column names get an ordinal suffix: City, City_2, City_3, ...
inline std::vector<std::string> disambiguate_names(std::vector<std::string> names) {
    std::map<std::string, int> seen;
    for (auto& n : names) {
        int k = ++seen[n];
        if (k > 1) {
            std::string suffixed;
            do {
                suffixed = n + "_" + std::to_string(k);
                ++k;
            } while (seen.count(suffixed));
            seen[suffixed] = 1;
            n = suffixed;
        }
    }
    return names;
}

}  // namespace detail

/// Loads one delimiter-separated file. Returns nullopt (with a warning in the
/// report) when the file is unreadable or has no header row; malformed data
/// rows are skipped and counted per file.
inline std::optional<Dataset> load_table_file(const std::filesystem::path& file,
                                              const std::string& id, const Config& cfg,
                                              LoadReport& report) {
    std::ifstream in(file);
    if (!in) {
        report.warnings.push_back(id + ": cannot open file");
        return std::nullopt;
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    if (lines.empty()) {
        report.warnings.push_back(id + ": empty file, no header row");
        return std::nullopt;
    }

    std::vector<std::string> sample(lines.begin(),
                                    lines.begin() + std::min<std::size_t>(lines.size(), 10));
    char delim = sniff_delimiter(sample);

    auto header = split_delimited(lines[0], delim);
    bool any_name = false;
    for (auto& h : header) {
        h = trim(h);
        if (!h.empty()) any_name = true;
    }
    if (!any_name) {
        report.warnings.push_back(id + ": no header row");
        return std::nullopt;
    }
    header = detail::disambiguate_names(header);
    const std::size_t arity = header.size();

    std::vector<std::vector<std::string>> columns(arity);
    std::size_t rows = 0;
    std::size_t skipped = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim_view(lines[i]).empty()) continue;
        auto fields = split_delimited(lines[i], delim);
        if (fields.size() != arity) {
            ++skipped;
            continue;
        }
        for (std::size_t c = 0; c < arity; ++c) columns[c].push_back(trim(fields[c]));
        ++rows;
    }
    if (skipped) report.skipped_rows[id] = skipped;

    Dataset ds;
    ds.id = id;
    ds.name = file.stem().string();
    ds.row_count = rows;
    ds.attributes.reserve(arity);
    for (std::size_t c = 0; c < arity; ++c) {
        Attribute attr;
        attr.name = header[c];
        attr.position = c;
        attr.kind = infer_kind(columns[c], cfg);
        for (auto& cell : columns[c]) {
            if (cfg.is_null_marker(cell)) {
                ++attr.null_count;
                continue;
            }
            if (attr.kind == ColumnKind::Numeric) {
                double v;
                if (!parse_number(cell, v)) {
                    // dirty cell in a numeric column counts as null so the
                    // extent-plus-nulls-equals-rows invariant holds
                    ++attr.null_count;
                    continue;
                }
                attr.numbers.push_back(v);
            }
            attr.values.push_back(std::move(cell));
        }
        ds.attributes.push_back(std::move(attr));
    }
    return ds;
}

/// Loads every regular file under `root` (recursively, dotfiles skipped) as a
/// dataset, ordered by relative path. Throws when the lake yields no datasets.
inline Lake load_lake(const std::filesystem::path& root, const Config& cfg) {
    namespace fs = std::filesystem;
    if (!fs::exists(root) || !fs::is_directory(root))
        throw IoError("lake directory does not exist: " + root.string());

    std::vector<std::pair<std::string, fs::path>> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename().string().starts_with(".")) continue;
        files.emplace_back(fs::relative(entry.path(), root).generic_string(), entry.path());
    }
    std::sort(files.begin(), files.end());

    Lake lake;
    for (const auto& [id, path] : files) {
        auto ds = load_table_file(path, id, cfg, lake.report);
        if (ds) lake.datasets.push_back(std::move(*ds));
    }
    if (lake.datasets.empty()) throw Error("empty lake: no loadable tables under " + root.string());
    return lake;
}

/// Loads a single table (e.g. the query target). Throws on failure.
inline Dataset load_single_table(const std::filesystem::path& file, const Config& cfg) {
    LoadReport report;
    auto ds = load_table_file(file, file.filename().generic_string(), cfg, report);
    if (!ds) {
        std::string why = report.warnings.empty() ? "unreadable" : report.warnings.front();
        throw IoError("cannot load table: " + why);
    }
    return std::move(*ds);
}

}  // namespace lakefind
