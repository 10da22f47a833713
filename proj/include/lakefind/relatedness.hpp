#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "lakefind/common.hpp"
#include "lakefind/evidence.hpp"
#include "lakefind/ks.hpp"
#include "lakefind/profile.hpp"

namespace lakefind {

/// Per-evidence weights for the combined distance. Fitted magnitudes replace
/// the all-ones default.
struct EvidenceWeights {
    std::array<double, 5> w{1.0, 1.0, 1.0, 1.0, 1.0};

    void validate() const {
        bool any = false;
        for (double x : w) {
            if (x < 0.0) throw ParamError("evidence weights must be non-negative");
            if (x > 0.0) any = true;
        }
        if (!any) throw ParamError("evidence weights must not all be zero");
    }
};

/// One aligned attribute pair with its five distances. Components with no
/// measurement hold 1 (maximally distant). `measured` records actual lookup
/// returns / KS computations; `applicable` records which evidence types are
/// structurally possible for this pair (both sides carry the representation)
/// — a text pair never has Domain applicable, a numeric pair never Value or
/// Embedding.
struct DistanceRow {
    std::uint32_t target_attr = 0;     // position in the target
    std::uint32_t candidate_attr = 0;  // attribute ordinal in the lake
    std::array<double, 5> d{1.0, 1.0, 1.0, 1.0, 1.0};
    std::array<bool, 5> measured{false, false, false, false, false};
    std::array<bool, 5> applicable{false, false, false, false, false};

    double mean() const {
        double s = 0.0;
        for (double x : d) s += x;
        return s / 5.0;
    }
};

/// Per-dataset aggregation result: the five per-evidence aggregates, which of
/// them apply to the pair at all, the combined scalar distance, and the
/// number of matched target attributes.
struct DistanceVector {
    std::array<double, 5> aggregates{1.0, 1.0, 1.0, 1.0, 1.0};
    std::array<bool, 5> evidence_present{false, false, false, false, false};
    double combined = 1.0;
    std::size_t matched = 0;
};

/// Everything collect_rows learns about a target against the lake: the best
/// row per (target attribute, candidate dataset), the per-target-attribute
/// distance populations that drive the CCDF weights, and which datasets have
/// any index evidence at all (used by join-path discovery).
struct RowCollection {
    std::map<std::uint32_t, std::vector<DistanceRow>> rows_by_dataset;
    // populations[target attr][evidence], sorted ascending
    std::vector<std::array<std::vector<double>, 5>> populations;
    std::set<std::uint32_t> evidence_datasets;
};

/// Complementary-CDF weight: the fraction of the population strictly greater
/// than the observed distance. Empty populations give weight 0.
inline double ccdf_weight(const std::vector<double>& population_sorted, double observed) {
    if (population_sorted.empty()) return 0.0;
    auto it = std::upper_bound(population_sorted.begin(), population_sorted.end(), observed);
    auto greater = static_cast<double>(population_sorted.end() - it);
    return greater / static_cast<double>(population_sorted.size());
}

/// Weighted average of one evidence column over a dataset's rows, weights
/// from the CCDF of each row's target-attribute population. When every
/// weight is zero the unweighted mean is used.
inline double aggregate_column(const std::vector<DistanceRow>& rows, Evidence e,
                               const std::vector<std::array<std::vector<double>, 5>>& populations) {
    const int t = static_cast<int>(e);
    double num = 0.0, den = 0.0, plain = 0.0;
    for (const auto& row : rows) {
        double w = ccdf_weight(populations[row.target_attr][static_cast<std::size_t>(t)],
                               row.d[static_cast<std::size_t>(t)]);
        num += w * row.d[static_cast<std::size_t>(t)];
        den += w;
        plain += row.d[static_cast<std::size_t>(t)];
    }
    if (den > 0.0) return num / den;
    return rows.empty() ? 1.0 : plain / static_cast<double>(rows.size());
}

/// Weighted l2-norm of the distance vector, restricted to evidence types that
/// actually produced a measurement for this pair (an entirely absent type
/// would otherwise dominate the norm with its filler value). Clamped to
/// [0, 1].
inline double combine(const std::array<double, 5>& dv, const std::array<bool, 5>& present,
                      const EvidenceWeights& weights) {
    weights.validate();
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < 5; ++t) {
        if (!present[t]) continue;
        double wd = weights.w[t] * dv[t];
        num += wd * wd;
        den += weights.w[t];
    }
    if (den <= 0.0) return 1.0;
    return clamp01(std::sqrt(num / den));
}

/// Convenience overload treating every component as present.
inline double combine(const std::array<double, 5>& dv, const EvidenceWeights& weights) {
    return combine(dv, {true, true, true, true, true}, weights);
}

/// Gathers index evidence for every target attribute and reduces it to one
/// row per (target attribute, candidate dataset).
///
/// Numeric pairs follow the guard rules: a KS distance is computed when the
/// candidate surfaced in the target attribute's name- or format-lookup, or
/// when the candidate's dataset has a subject attribute related to the
/// target's subject attribute in any index (in which case every numeric
/// attribute of that dataset is measured). Numeric pairs passing no guard
/// contribute no row.
inline RowCollection collect_rows(const ProfiledDataset& target, const EvidenceSource& src,
                                  std::size_t budget) {
    if (target.profiles.size() != target.table.attributes.size())
        throw ParamError("target is not profiled");
    const auto& attrs = src.attributes();
    const std::size_t n_target = target.profiles.size();

    RowCollection out;
    out.populations.resize(n_target);

    struct Partial {
        std::array<double, 5> d{1.0, 1.0, 1.0, 1.0, 1.0};
        std::array<bool, 5> present{false, false, false, false, false};
    };
    // per target attribute: candidate attr ordinal -> partial row
    std::vector<std::map<std::uint32_t, Partial>> partials(n_target);

    constexpr std::array<Evidence, 4> indexed{Evidence::Name, Evidence::Value, Evidence::Format,
                                              Evidence::Embedding};
    for (std::size_t i = 0; i < n_target; ++i) {
        const auto& probe = target.profiles[i];
        for (Evidence e : indexed) {
            for (const auto& hit : src.lookup(e, probe, budget)) {
                auto& p = partials[i][hit.attr];
                p.d[static_cast<std::size_t>(e)] = hit.distance;
                p.present[static_cast<std::size_t>(e)] = true;
                out.populations[i][static_cast<std::size_t>(e)].push_back(hit.distance);
            }
        }
    }

    // Subject-attribute guard: datasets whose subject attribute surfaced in
    // any lookup of the target's subject attribute.
    std::set<std::uint32_t> subject_related;
    if (target.subject) {
        const auto& subject_hits = partials[*target.subject];
        for (const auto& [cand, p] : subject_hits) {
            if (attrs[cand].is_subject) subject_related.insert(attrs[cand].dataset);
        }
    }

    // Numeric evidence. For each numeric target attribute, the guarded
    // candidate set is (a) numeric candidates already surfaced via name or
    // format plus (b) all numeric attributes of subject-related datasets.
    for (std::size_t i = 0; i < n_target; ++i) {
        const auto& probe = target.profiles[i];
        if (!probe.numeric_extent) continue;
        std::set<std::uint32_t> guarded;
        for (const auto& [cand, p] : partials[i]) {
            if (attrs[cand].kind != ColumnKind::Numeric) continue;
            if (p.present[static_cast<std::size_t>(Evidence::Name)] ||
                p.present[static_cast<std::size_t>(Evidence::Format)])
                guarded.insert(cand);
        }
        for (std::uint32_t ds : subject_related) {
            const auto& dr = src.datasets()[ds];
            for (std::uint32_t a = dr.first_attr; a < dr.first_attr + dr.attr_count; ++a)
                if (attrs[a].kind == ColumnKind::Numeric) guarded.insert(a);
        }
        for (std::uint32_t cand : guarded) {
            double dd = numeric_distance(*probe.numeric_extent, src.numeric_extent(cand), true);
            auto& p = partials[i][cand];
            p.d[static_cast<std::size_t>(Evidence::Domain)] = dd;
            p.present[static_cast<std::size_t>(Evidence::Domain)] = true;
            out.populations[i][static_cast<std::size_t>(Evidence::Domain)].push_back(dd);
        }
    }

    for (auto& per_attr : out.populations)
        for (auto& pop : per_attr) std::sort(pop.begin(), pop.end());

    // Reduce to one row per (target attribute, candidate dataset): the
    // candidate attribute with the smallest unweighted mean wins, ties to the
    // lower ordinal.
    for (std::size_t i = 0; i < n_target; ++i) {
        std::map<std::uint32_t, const std::pair<const std::uint32_t, Partial>*> best;
        for (const auto& entry : partials[i]) {
            out.evidence_datasets.insert(attrs[entry.first].dataset);
            auto& slot = best[attrs[entry.first].dataset];
            if (!slot) {
                slot = &entry;
                continue;
            }
            double cur = 0.0, prev = 0.0;
            for (std::size_t t = 0; t < 5; ++t) {
                cur += entry.second.d[t];
                prev += slot->second.d[t];
            }
            if (cur < prev) slot = &entry;
        }
        for (const auto& [ds, entry] : best) {
            DistanceRow row;
            row.target_attr = static_cast<std::uint32_t>(i);
            row.candidate_attr = entry->first;
            row.d = entry->second.d;
            row.present = entry->second.present;
            out.rows_by_dataset[ds].push_back(row);
        }
    }
    return out;
}

/// Aggregates one dataset's rows into its distance vector (weighted averages
/// per evidence column, then the combined norm).
inline DistanceVector aggregate_rows(const std::vector<DistanceRow>& rows,
                                     const std::vector<std::array<std::vector<double>, 5>>& populations,
                                     const EvidenceWeights& weights) {
    DistanceVector dv;
    dv.matched = rows.size();
    for (std::size_t t = 0; t < 5; ++t) {
        bool present = false;
        for (const auto& row : rows) present = present || row.present[t];
        dv.evidence_present[t] = present;
        dv.aggregates[t] = aggregate_column(rows, static_cast<Evidence>(t), populations);
    }
    dv.combined = combine(dv.aggregates, dv.evidence_present, weights);
    return dv;
}

struct RankedDataset {
    std::uint32_t dataset = 0;
    DistanceVector dv;
};

/// Ranks every dataset with at least one row, ascending by combined distance,
/// ties to the larger match count and then to the dataset id.
inline std::vector<RankedDataset> rank_datasets(const RowCollection& rows,
                                                const EvidenceSource& src,
                                                const EvidenceWeights& weights) {
    std::vector<RankedDataset> ranked;
    ranked.reserve(rows.rows_by_dataset.size());
    for (const auto& [ds, ds_rows] : rows.rows_by_dataset)
        ranked.push_back({ds, aggregate_rows(ds_rows, rows.populations, weights)});
    std::sort(ranked.begin(), ranked.end(), [&](const RankedDataset& a, const RankedDataset& b) {
        if (a.dv.combined != b.dv.combined) return a.dv.combined < b.dv.combined;
        if (a.dv.matched != b.dv.matched) return a.dv.matched > b.dv.matched;
        return src.datasets()[a.dataset].id < src.datasets()[b.dataset].id;
    });
    return ranked;
}

/// The k most related datasets to the target. Budget defaults to
/// lookup_budget_factor * k when 0 is passed.
inline std::vector<RankedDataset> top_k(const ProfiledDataset& target, const EvidenceSource& src,
                                        std::size_t k, const EvidenceWeights& weights,
                                        std::size_t budget, const RowCollection* precollected = nullptr) {
    if (k < 1) throw ParamError("k must be >= 1");
    RowCollection local;
    const RowCollection* rows = precollected;
    if (!rows) {
        local = collect_rows(target, src, budget);
        rows = &local;
    }
    auto ranked = rank_datasets(*rows, src, weights);
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

}  // namespace lakefind
