#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lakefind/common.hpp"

namespace lakefind {

/// Contiguous q-grams of the lowercased, whitespace-stripped name. Names
/// shorter than q yield the whole name as a single gram; an empty name yields
/// the empty set.
inline std::set<std::string> name_qgrams(std::string_view name, int q) {
    std::string s;
    s.reserve(name.size());
    for (char c : name)
        if (!is_space_char(c)) s += ascii_lower(c);
    std::set<std::string> grams;
    if (s.empty()) return grams;
    if (s.size() < static_cast<std::size_t>(q)) {
        grams.insert(s);
        return grams;
    }
    for (std::size_t i = 0; i + q <= s.size(); ++i) grams.insert(s.substr(i, q));
    return grams;
}

namespace detail {

inline bool is_alnum_byte(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_digit_byte(char c) { return c >= '0' && c <= '9'; }

inline bool all_digits(std::string_view s) {
    for (char c : s)
        if (!is_digit_byte(c)) return false;
    return !s.empty();
}

}  // namespace detail

/// A value split into parts (at punctuation) and each part into words.
/// Words are maximal alphanumeric runs, case-folded; runs that are digits
/// only are dropped (they carry numeric, not lexical, signal). Whitespace
/// separates words without ending the part.
inline std::vector<std::vector<std::string>> split_parts_words(std::string_view value) {
    std::vector<std::vector<std::string>> parts;
    std::vector<std::string> cur_part;
    std::string cur_word;
    auto flush_word = [&] {
        if (!cur_word.empty()) {
            if (!detail::all_digits(cur_word)) cur_part.push_back(cur_word);
            cur_word.clear();
        }
    };
    auto flush_part = [&] {
        flush_word();
        if (!cur_part.empty()) {
            parts.push_back(std::move(cur_part));
            cur_part.clear();
        }
    };
    for (char c : value) {
        if (detail::is_alnum_byte(c)) {
            cur_word += ascii_lower(c);
        } else if (is_space_char(c)) {
            flush_word();
        } else {
            flush_part();  // punctuation ends the part
        }
    }
    flush_part();
    return parts;
}

struct ExtentTokens {
    std::set<std::string> tokens;    // per-part least frequent words
    std::set<std::string> frequent;  // per-part most frequent words
};

/// One pass builds a word-occurrence histogram over the extent (each distinct
/// word counted once per part occurrence); a second pass picks, for every
/// part of every value, the word with the fewest occurrences for `tokens`
/// and the word with the most occurrences for `frequent`. Ties go to the
/// lexicographically smallest word.
inline ExtentTokens tokenize_extent(const std::vector<std::string>& extent) {
    std::map<std::string, std::size_t> histogram;
    for (const auto& value : extent) {
        for (const auto& part : split_parts_words(value)) {
            std::set<std::string> uniq(part.begin(), part.end());
            for (const auto& w : uniq) ++histogram[w];
        }
    }
    ExtentTokens out;
    for (const auto& value : extent) {
        for (const auto& part : split_parts_words(value)) {
            std::set<std::string> uniq(part.begin(), part.end());
            if (uniq.empty()) continue;
            const std::string* min_word = nullptr;
            const std::string* max_word = nullptr;
            std::size_t min_count = 0;
            std::size_t max_count = 0;
            for (const auto& w : uniq) {  // set order makes ties lexicographic
                std::size_t c = histogram[w];
                if (!min_word || c < min_count) {
                    min_word = &w;
                    min_count = c;
                }
                if (!max_word || c > max_count) {
                    max_word = &w;
                    max_count = c;
                }
            }
            out.tokens.insert(*min_word);
            out.frequent.insert(*max_word);
        }
    }
    return out;
}

namespace detail {

/// Lexical class of one alphanumeric run: C=[A-Z][a-z]+, U=[A-Z]+, L=[a-z]+,
/// N=[0-9]+, A=[A-Za-z0-9]+ (first match in that order).
inline char alnum_class(std::string_view token) {
    bool all_upper = true, all_lower = true, all_digit = true;
    for (char c : token) {
        if (!(c >= 'A' && c <= 'Z')) all_upper = false;
        if (!(c >= 'a' && c <= 'z')) all_lower = false;
        if (!is_digit_byte(c)) all_digit = false;
    }
    if (token.size() >= 2 && token[0] >= 'A' && token[0] <= 'Z') {
        bool rest_lower = true;
        for (std::size_t i = 1; i < token.size(); ++i)
            if (!(token[i] >= 'a' && token[i] <= 'z')) rest_lower = false;
        if (rest_lower) return 'C';
    }
    if (all_upper) return 'U';
    if (all_lower) return 'L';
    if (all_digit) return 'N';
    return 'A';
}

}  // namespace detail

/// Maps a value to its format string: each token (alphanumeric run or
/// punctuation run, whitespace skipped) becomes a class symbol from
/// {C,U,L,N,A,P}, and every run of a repeated symbol collapses to the first
/// occurrence plus '+'. Empty values map to the empty string.
inline std::string format_pattern(std::string_view value) {
    std::string symbols;
    std::string cur;
    bool cur_alnum = false;
    auto flush = [&] {
        if (cur.empty()) return;
        symbols += cur_alnum ? detail::alnum_class(cur) : 'P';
        cur.clear();
    };
    for (char c : value) {
        if (is_space_char(c)) {
            flush();
        } else if (detail::is_alnum_byte(c)) {
            if (!cur.empty() && !cur_alnum) flush();
            cur_alnum = true;
            cur += c;
        } else {
            if (!cur.empty() && cur_alnum) flush();
            cur_alnum = false;
            cur += c;
        }
    }
    flush();

    std::string collapsed;
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i > 0 && symbols[i] == symbols[i - 1]) {
            if (collapsed.back() != '+') collapsed += '+';
        } else {
            collapsed += symbols[i];
        }
    }
    return collapsed;
}

}  // namespace lakefind
