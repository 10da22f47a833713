#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "lakefind/common.hpp"

namespace lakefind {

/// A word-embedding model loaded from a text vector file: an optional first
/// line "count dimension", then one record per line — the word followed by
/// its vector components, whitespace-separated.
class EmbeddingModel {
public:
    EmbeddingModel() = default;
    explicit EmbeddingModel(std::size_t dimension) : dim_(dimension) {}

    static EmbeddingModel load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open embedding file: " + path.string());
        EmbeddingModel model;
        std::string line;
        bool first = true;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string_view s = trim_view(line);
            if (s.empty()) continue;
            std::istringstream ss{std::string(s)};
            if (first) {
                first = false;
                // header line: exactly two integer tokens
                long long a, b;
                std::string extra;
                std::istringstream probe{std::string(s)};
                if (probe >> a >> b && !(probe >> extra) && a > 0 && b > 0) {
                    model.dim_ = static_cast<std::size_t>(b);
                    continue;
                }
            }
            std::string word;
            if (!(ss >> word))
                throw IoError("bad embedding record at line " + std::to_string(lineno));
            std::vector<float> vec;
            double x;
            while (ss >> x) vec.push_back(static_cast<float>(x));
            if (vec.empty())
                throw IoError("embedding record without components at line " +
                              std::to_string(lineno));
            if (model.dim_ == 0) model.dim_ = vec.size();
            if (vec.size() != model.dim_)
                throw IoError("embedding dimension mismatch at line " + std::to_string(lineno));
            model.vectors_.emplace(std::move(word), std::move(vec));
        }
        return model;
    }

    void save(const std::filesystem::path& path) const {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write embedding file: " + path.string());
        out << vectors_.size() << " " << dim_ << "\n";
        // sorted for reproducible files
        std::vector<const std::string*> words;
        words.reserve(vectors_.size());
        for (const auto& [w, _] : vectors_) words.push_back(&w);
        std::sort(words.begin(), words.end(),
                  [](const std::string* a, const std::string* b) { return *a < *b; });
        char buf[64];
        for (const auto* w : words) {
            out << *w;
            for (float x : vectors_.at(*w)) {
                std::snprintf(buf, sizeof buf, " %.8g", static_cast<double>(x));
                out << buf;
            }
            out << "\n";
        }
    }

    void insert(std::string word, std::vector<float> vec) {
        if (dim_ == 0) dim_ = vec.size();
        if (vec.size() != dim_) throw ParamError("embedding dimension mismatch on insert");
        vectors_[std::move(word)] = std::move(vec);
    }

    const std::vector<float>* find(const std::string& word) const {
        auto it = vectors_.find(word);
        return it == vectors_.end() ? nullptr : &it->second;
    }

    std::size_t dimension() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }
    bool empty() const { return vectors_.empty(); }

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::vector<float>> vectors_;
};

/// Component-wise mean of the vectors of in-vocabulary words; absent when no
/// word is in the vocabulary.
inline std::optional<std::vector<float>> mean_embedding(const std::set<std::string>& words,
                                                        const EmbeddingModel& model) {
    std::vector<double> acc;
    std::size_t n = 0;
    for (const auto& w : words) {
        const auto* v = model.find(w);
        if (!v) continue;
        if (acc.empty()) acc.assign(v->size(), 0.0);
        for (std::size_t i = 0; i < v->size(); ++i) acc[i] += (*v)[i];
        ++n;
    }
    if (n == 0) return std::nullopt;
    std::vector<float> mean(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
        mean[i] = static_cast<float>(acc[i] / static_cast<double>(n));
    return mean;
}

}  // namespace lakefind
