#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lakefind/common.hpp"
#include "lakefind/config.hpp"
#include "lakefind/embedding.hpp"
#include "lakefind/table.hpp"
#include "lakefind/tokenize.hpp"

namespace lakefind {

/// The evidence representations of one attribute. Numeric attributes carry no
/// value tokens and no embedding (token and word signals are not meaningful
/// for numbers); instead they expose their sorted extent for distribution
/// comparison.
struct AttributeProfile {
    std::set<std::string> name_qgrams;
    std::set<std::string> value_tokens;
    std::set<std::string> format_patterns;
    std::optional<std::vector<float>> embedding;
    std::optional<std::vector<double>> numeric_extent;  // sorted ascending
    bool is_subject = false;
};

struct ProfiledDataset {
    Dataset table;
    std::vector<AttributeProfile> profiles;  // parallel to table.attributes
    std::optional<std::size_t> subject;      // attribute position
};

inline double subject_score(double uniqueness, double null_ratio, double position_term,
                            const Config& cfg) {
    return cfg.subject_alpha * uniqueness + cfg.subject_beta * (1.0 - null_ratio) +
           cfg.subject_gamma * position_term;
}

/// Picks the subject attribute: among Text attributes, the argmax of
/// alpha*uniqueness + beta*(1 - null_ratio) + gamma*(1 - position/arity),
/// leftmost on ties. Datasets without Text attributes have no subject.
inline std::optional<std::size_t> detect_subject_attribute(const Dataset& ds, const Config& cfg) {
    std::optional<std::size_t> best;
    double best_score = 0.0;
    const double arity = static_cast<double>(ds.attributes.size());
    for (const auto& attr : ds.attributes) {
        if (attr.kind != ColumnKind::Text) continue;
        double uniqueness = 0.0;
        if (!attr.values.empty()) {
            std::set<std::string> distinct(attr.values.begin(), attr.values.end());
            uniqueness = static_cast<double>(distinct.size()) /
                         static_cast<double>(attr.values.size());
        }
        double null_ratio = ds.row_count == 0
                                ? 0.0
                                : static_cast<double>(attr.null_count) /
                                      static_cast<double>(ds.row_count);
        double position_term = 1.0 - static_cast<double>(attr.position) / arity;
        double score = subject_score(uniqueness, null_ratio, position_term, cfg);
        if (!best || score > best_score) {
            best = attr.position;
            best_score = score;
        }
    }
    return best;
}

namespace detail {

/// Extents above the sample cap are profiled from a seeded uniform sample so
/// profiling cost stays bounded and reproducible.
inline std::vector<std::size_t> profile_sample(std::size_t extent_size, const Config& cfg,
                                               const std::string& dataset_id,
                                               std::size_t position) {
    std::vector<std::size_t> idx;
    if (extent_size <= cfg.sample_cap) {
        idx.resize(extent_size);
        for (std::size_t i = 0; i < extent_size; ++i) idx[i] = i;
        return idx;
    }
    Rng rng(mix_seed(cfg.seed, hash_bytes(dataset_id, 0x70726f66ULL), position));
    return rng.sample_indices(extent_size, cfg.sample_cap);
}

}  // namespace detail

inline AttributeProfile profile_attribute(const Attribute& attr, const std::string& dataset_id,
                                          const Config& cfg, const EmbeddingModel* model) {
    AttributeProfile p;
    p.name_qgrams = name_qgrams(attr.name, cfg.qgram_size);

    auto sample = detail::profile_sample(attr.values.size(), cfg, dataset_id, attr.position);
    std::vector<std::string> sampled_values;
    sampled_values.reserve(sample.size());
    for (std::size_t i : sample) sampled_values.push_back(attr.values[i]);

    for (const auto& v : sampled_values) {
        auto fp = format_pattern(v);
        if (!fp.empty()) p.format_patterns.insert(std::move(fp));
    }

    if (attr.kind == ColumnKind::Numeric) {
        std::vector<double> extent;
        extent.reserve(sample.size());
        for (std::size_t i : sample) extent.push_back(attr.numbers[i]);
        std::sort(extent.begin(), extent.end());
        p.numeric_extent = std::move(extent);
    } else {
        auto tokens = tokenize_extent(sampled_values);
        p.value_tokens = std::move(tokens.tokens);
        if (model && !model->empty())
            p.embedding = mean_embedding(tokens.frequent, *model);
    }
    return p;
}

/// Profiles every attribute and flags the subject attribute. Profiles are a
/// deterministic function of (dataset, config, model).
inline ProfiledDataset profile_dataset(Dataset ds, const Config& cfg,
                                       const EmbeddingModel* model) {
    ProfiledDataset out;
    out.subject = detect_subject_attribute(ds, cfg);
    out.profiles.reserve(ds.attributes.size());
    for (const auto& attr : ds.attributes) {
        auto p = profile_attribute(attr, ds.id, cfg, model);
        p.is_subject = out.subject && *out.subject == attr.position;
        out.profiles.push_back(std::move(p));
    }
    out.table = std::move(ds);
    return out;
}

}  // namespace lakefind
