#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace lakefind {

// Quote-aware splitting of delimiter-separated rows. Handles RFC-4180 style
// double quotes ("" escapes a quote inside a quoted field); records are
// single lines (no embedded newlines).

inline std::vector<std::string> split_delimited(std::string_view line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && cur.empty()) {
            in_quotes = true;
        } else if (c == delim) {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r' && i + 1 == line.size()) {
            // CRLF line ending
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

namespace detail {

inline std::size_t count_delims(std::string_view line, char delim) {
    std::size_t n = 0;
    bool in_quotes = false;
    for (char c : line) {
        if (c == '"') in_quotes = !in_quotes;
        else if (c == delim && !in_quotes) ++n;
    }
    return n;
}

}  // namespace detail

/// Picks the delimiter from {comma, tab, semicolon, pipe} that appears on the
/// most sample lines (total occurrences break ties; candidate order breaks
/// exact ties). Falls back to comma when no candidate appears at all.
inline char sniff_delimiter(const std::vector<std::string>& sample_lines) {
    constexpr std::array<char, 4> candidates{',', '\t', ';', '|'};
    char best = ',';
    std::size_t best_lines = 0;
    std::size_t best_total = 0;
    for (char cand : candidates) {
        std::size_t lines_with = 0;
        std::size_t total = 0;
        for (const auto& line : sample_lines) {
            std::size_t n = detail::count_delims(line, cand);
            if (n > 0) ++lines_with;
            total += n;
        }
        if (lines_with > best_lines || (lines_with == best_lines && total > best_total)) {
            best = cand;
            best_lines = lines_with;
            best_total = total;
        }
    }
    return best;
}

}  // namespace lakefind
