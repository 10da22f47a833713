#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lakefind/common.hpp"
#include "lakefind/config.hpp"
#include "lakefind/profile.hpp"
#include "lakefind/relatedness.hpp"
#include "lakefind/table.hpp"

namespace lakefind {

/// Two-level ground truth: which datasets are related to a target, and which
/// attribute pairs are related. Attribute-level entries imply table-level
/// entries.
struct GroundTruth {
    std::map<std::string, std::set<std::string>> tables;
    // target id -> target attr name -> related (dataset id, attr name)
    std::map<std::string, std::map<std::string, std::set<std::pair<std::string, std::string>>>>
        attrs;

    bool covers(const std::string& target_id) const { return tables.count(target_id) > 0; }

    bool table_related(const std::string& target_id, const std::string& candidate_id) const {
        auto it = tables.find(target_id);
        return it != tables.end() && it->second.count(candidate_id) > 0;
    }

    bool attr_related(const std::string& target_id, const std::string& target_attr,
                      const std::string& candidate_id, const std::string& candidate_attr) const {
        auto it = attrs.find(target_id);
        if (it == attrs.end()) return false;
        auto jt = it->second.find(target_attr);
        if (jt == it->second.end()) return false;
        return jt->second.count({candidate_id, candidate_attr}) > 0;
    }

    void add_table(const std::string& target_id, const std::string& related_id) {
        tables[target_id].insert(related_id);
    }

    void add_attr(const std::string& target_id, const std::string& target_attr,
                  const std::string& related_id, const std::string& related_attr) {
        tables[target_id].insert(related_id);
        attrs[target_id][target_attr].insert({related_id, related_attr});
    }

    /// Line-delimited records: "table<TAB>target<TAB>related" and
    /// "attr<TAB>target<TAB>target attr<TAB>related<TAB>related attr".
    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write ground truth: " + path.string());
        for (const auto& [t, rel] : tables)
            for (const auto& r : rel) out << "table\t" << t << "\t" << r << "\n";
        for (const auto& [t, per_attr] : attrs)
            for (const auto& [ta, rel] : per_attr)
                for (const auto& [rid, ra] : rel)
                    out << "attr\t" << t << "\t" << ta << "\t" << rid << "\t" << ra << "\n";
    }

    static GroundTruth load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open ground truth: " + path.string());
        GroundTruth gt;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (trim_view(line).empty()) continue;
            auto fields = split(line, '\t');
            if (fields[0] == "table" && fields.size() == 3) {
                gt.add_table(fields[1], fields[2]);
            } else if (fields[0] == "attr" && fields.size() == 5) {
                gt.add_attr(fields[1], fields[2], fields[3], fields[4]);
            } else {
                throw IoError("bad ground truth record at line " + std::to_string(lineno));
            }
        }
        return gt;
    }
};

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
};

/// Standard top-k precision and recall against the table-level truth. A
/// returned dataset counts as a true positive when any of its attributes
/// relate, which the table-level truth already encodes. Empty results report
/// precision 0.
inline PrecisionRecall precision_recall(const std::vector<std::string>& returned,
                                        const GroundTruth& truth, const std::string& target_id) {
    auto it = truth.tables.find(target_id);
    if (it == truth.tables.end())
        throw Error("target not covered by ground truth: " + target_id);
    const auto& related = it->second;
    std::size_t tp = 0;
    for (const auto& id : returned)
        if (related.count(id)) ++tp;
    PrecisionRecall pr;
    pr.precision = returned.empty()
                       ? 0.0
                       : static_cast<double>(tp) / static_cast<double>(returned.size());
    pr.recall = related.empty() ? 0.0
                                : static_cast<double>(tp) / static_cast<double>(related.size());
    return pr;
}

/// Fraction of target attributes covered by a set of aligned positions.
inline double coverage(const std::set<std::uint32_t>& covered_target_attrs, std::size_t arity) {
    if (arity == 0) throw ParamError("coverage needs a non-empty target");
    return static_cast<double>(covered_target_attrs.size()) / static_cast<double>(arity);
}

// ---------------------------------------------------------------------------
// Synthetic benchmark generation: derived tables are seeded random column
// projections (at least 2 columns) and row selections (at least 10 rows) of
// base tables; lineage is recorded as ground truth.
// ---------------------------------------------------------------------------

struct BenchmarkOptions {
    std::size_t count = 0;
    std::uint64_t seed = 1;
    std::size_t min_rows = 10;
    std::size_t min_cols = 2;
    double subject_keep_prob = 0.8;
};

struct Benchmark {
    std::vector<Dataset> tables;
    GroundTruth truth;
    std::vector<std::string> warnings;
};

namespace detail {

struct DerivedColumn {
    std::size_t base_table;
    std::size_t base_column;
};

}  // namespace detail

inline Benchmark generate_benchmark(const std::vector<Dataset>& bases,
                                    const BenchmarkOptions& opt, const Config& cfg) {
    if (opt.count < bases.size())
        throw ParamError("benchmark size must be at least the number of base tables");
    Benchmark bench;

    std::vector<std::size_t> viable;
    for (std::size_t b = 0; b < bases.size(); ++b) {
        if (bases[b].row_count < opt.min_rows || bases[b].attributes.size() < opt.min_cols) {
            bench.warnings.push_back(bases[b].id + ": too small to derive from, skipped");
            continue;
        }
        // extents exclude nulls, so row selection is only well defined when
        // every column is fully populated
        bool aligned = true;
        for (const auto& a : bases[b].attributes)
            if (a.null_count > 0) aligned = false;
        if (!aligned) {
            bench.warnings.push_back(bases[b].id + ": contains nulls, row selection skipped");
            continue;
        }
        viable.push_back(b);
    }
    if (viable.empty()) throw Error("no base table is large enough to derive from");

    std::vector<std::optional<std::size_t>> base_subjects(bases.size());
    for (std::size_t b : viable) base_subjects[b] = detect_subject_attribute(bases[b], cfg);

    Rng rng(mix_seed(opt.seed, 0x62656e6368ULL));
    // lineage of every derived column, per derived table
    std::vector<std::vector<detail::DerivedColumn>> lineage(opt.count);

    for (std::size_t i = 0; i < opt.count; ++i) {
        const std::size_t b = viable[i % viable.size()];
        const Dataset& base = bases[b];
        const std::size_t arity = base.attributes.size();

        std::size_t n_cols = static_cast<std::size_t>(
            rng.next_between(opt.min_cols, arity));
        auto cols = rng.sample_indices(arity, n_cols);
        if (base_subjects[b] && rng.next_bool(opt.subject_keep_prob)) {
            if (std::find(cols.begin(), cols.end(), *base_subjects[b]) == cols.end()) {
                cols[0] = *base_subjects[b];  // replace one sampled column
                std::sort(cols.begin(), cols.end());
            }
        }

        std::size_t n_rows = static_cast<std::size_t>(
            rng.next_between(opt.min_rows, base.row_count));
        auto row_idx = rng.sample_indices(base.row_count, n_rows);

        Dataset derived;
        char buf[32];
        std::snprintf(buf, sizeof buf, "t%04zu_", i);
        derived.name = buf + base.name;
        derived.id = derived.name + ".csv";
        derived.row_count = n_rows;
        std::size_t out_pos = 0;
        for (std::size_t c : cols) {
            const Attribute& src_attr = base.attributes[c];
            Attribute attr;
            attr.name = src_attr.name;
            attr.position = out_pos++;
            attr.kind = src_attr.kind;
            for (std::size_t r : row_idx) {
                attr.values.push_back(src_attr.values[r]);
                if (attr.kind == ColumnKind::Numeric) attr.numbers.push_back(src_attr.numbers[r]);
            }
            derived.attributes.push_back(std::move(attr));
            lineage[i].push_back({b, c});
        }
        bench.tables.push_back(std::move(derived));
    }

    // Lineage ground truth: same base => related (including self), same base
    // column => attribute-related.
    for (std::size_t i = 0; i < bench.tables.size(); ++i) {
        for (std::size_t j = 0; j < bench.tables.size(); ++j) {
            if (lineage[i][0].base_table != lineage[j][0].base_table) continue;
            bench.truth.add_table(bench.tables[i].id, bench.tables[j].id);
            for (std::size_t ci = 0; ci < lineage[i].size(); ++ci)
                for (std::size_t cj = 0; cj < lineage[j].size(); ++cj)
                    if (lineage[i][ci].base_column == lineage[j][cj].base_column)
                        bench.truth.add_attr(bench.tables[i].id,
                                             bench.tables[i].attributes[ci].name,
                                             bench.tables[j].id,
                                             bench.tables[j].attributes[cj].name);
        }
    }
    return bench;
}

// ---------------------------------------------------------------------------
// Combined-distance weight fitting: logistic regression over the five
// per-evidence aggregates of labeled dataset pairs.
// ---------------------------------------------------------------------------

struct LabeledPair {
    std::array<double, 5> dv{1.0, 1.0, 1.0, 1.0, 1.0};
    int label = 0;  // 1 related, 0 unrelated
};

struct FitResult {
    EvidenceWeights weights;          // |coefficient| per evidence, clamped to >= 1e-6
    std::array<double, 5> coefficients{};  // raw signed coefficients
    double intercept = 0.0;
    double held_out_accuracy = 0.0;
    std::size_t train_size = 0;
    std::size_t held_out_size = 0;
};

namespace detail {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace detail

/// Builds labeled training pairs for weight fitting: every dataset that
/// produced rows against a profiled target becomes a pair (its five
/// aggregates, labeled by the table-level truth), and datasets with no
/// evidence at all become all-ones pairs. Pairs are sampled per class
/// (seeded) down to max_pairs, related and unrelated balanced as far as the
/// data allows.
inline std::vector<LabeledPair> build_labeled_pairs(const std::vector<ProfiledDataset>& targets,
                                                    const EvidenceSource& src,
                                                    const GroundTruth& truth, std::size_t budget,
                                                    std::size_t max_pairs, std::uint64_t seed) {
    EvidenceWeights ones;
    std::vector<LabeledPair> positives, negatives;
    for (const auto& target : targets) {
        if (!truth.covers(target.table.id)) continue;
        RowCollection rows = collect_rows(target, src, budget);
        auto ranked = rank_datasets(rows, src, ones);
        std::set<std::uint32_t> seen;
        for (const auto& r : ranked) {
            seen.insert(r.dataset);
            LabeledPair p;
            p.dv = r.dv.aggregates;
            p.label = truth.table_related(target.table.id, src.datasets()[r.dataset].id) ? 1 : 0;
            (p.label ? positives : negatives).push_back(p);
        }
        for (std::uint32_t ds = 0; ds < src.datasets().size(); ++ds) {
            if (seen.count(ds)) continue;
            LabeledPair p;  // no evidence: maximally distant on every axis
            p.label = truth.table_related(target.table.id, src.datasets()[ds].id) ? 1 : 0;
            (p.label ? positives : negatives).push_back(p);
        }
    }
    Rng rng(mix_seed(seed, 0x70616972ULL));
    rng.shuffle(positives);
    rng.shuffle(negatives);
    std::size_t half = max_pairs / 2;
    std::size_t n_pos = std::min(positives.size(), half);
    std::size_t n_neg = std::min(negatives.size(), max_pairs - n_pos);
    n_pos = std::min(positives.size(), max_pairs - n_neg);
    std::vector<LabeledPair> pairs;
    pairs.reserve(n_pos + n_neg);
    for (std::size_t i = 0; i < n_pos; ++i) pairs.push_back(positives[i]);
    for (std::size_t i = 0; i < n_neg; ++i) pairs.push_back(negatives[i]);
    rng.shuffle(pairs);
    return pairs;
}

/// Deterministic batch gradient descent on the mean log-loss with a small L2
/// penalty. Every 5th example is held out for the reported accuracy. The
/// returned evidence weights are the coefficient magnitudes (distances
/// anti-correlate with relatedness, so raw coefficients are negative for
/// informative evidence), clamped to at least 1e-6.
inline FitResult fit_weights(const std::vector<LabeledPair>& pairs) {
    if (pairs.size() < 20) throw ParamError("fit_weights needs at least 20 labeled pairs");
    bool has_pos = false, has_neg = false;
    for (const auto& p : pairs) (p.label ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw ParamError("fit_weights needs both related and unrelated pairs");

    std::vector<const LabeledPair*> train, held;
    for (std::size_t i = 0; i < pairs.size(); ++i)
        ((i % 5 == 4) ? held : train).push_back(&pairs[i]);
    if (train.empty() || held.empty())
        throw ParamError("fit_weights could not split a held-out set");
    bool train_pos = false, train_neg = false;
    for (const auto* p : train) (p->label ? train_pos : train_neg) = true;
    if (!train_pos || !train_neg)
        throw ParamError("fit_weights training split is single-class");

    constexpr int kIterations = 2000;
    constexpr double kLearningRate = 0.5;
    constexpr double kL2 = 1e-3;
    std::array<double, 5> coef{};
    double intercept = 0.0;
    const double inv_n = 1.0 / static_cast<double>(train.size());
    for (int it = 0; it < kIterations; ++it) {
        std::array<double, 5> grad{};
        double grad0 = 0.0;
        for (const auto* p : train) {
            double z = intercept;
            for (std::size_t t = 0; t < 5; ++t) z += coef[t] * p->dv[t];
            double err = detail::sigmoid(z) - static_cast<double>(p->label);
            grad0 += err;
            for (std::size_t t = 0; t < 5; ++t) grad[t] += err * p->dv[t];
        }
        intercept -= kLearningRate * grad0 * inv_n;
        for (std::size_t t = 0; t < 5; ++t)
            coef[t] -= kLearningRate * (grad[t] * inv_n + kL2 * coef[t]);
    }

    FitResult out;
    out.coefficients = coef;
    out.intercept = intercept;
    out.train_size = train.size();
    out.held_out_size = held.size();
    for (std::size_t t = 0; t < 5; ++t)
        out.weights.w[t] = std::max(std::fabs(coef[t]), 1e-6);
    std::size_t correct = 0;
    for (const auto* p : held) {
        double z = intercept;
        for (std::size_t t = 0; t < 5; ++t) z += coef[t] * p->dv[t];
        int predicted = detail::sigmoid(z) >= 0.5 ? 1 : 0;
        if (predicted == p->label) ++correct;
    }
    out.held_out_accuracy = static_cast<double>(correct) / static_cast<double>(held.size());
    return out;
}

}  // namespace lakefind
