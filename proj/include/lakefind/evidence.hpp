#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lakefind/profile.hpp"
#include "lakefind/table.hpp"

namespace lakefind {

/// The five evidence channels. The first four are backed by sketch indexes;
/// Domain is computed on demand from numeric extents.
enum class Evidence : int { Name = 0, Value = 1, Format = 2, Embedding = 3, Domain = 4 };

inline constexpr int kEvidenceCount = 5;
inline constexpr int kIndexedEvidenceCount = 4;

inline const char* evidence_name(Evidence e) {
    switch (e) {
        case Evidence::Name: return "name";
        case Evidence::Value: return "value";
        case Evidence::Format: return "format";
        case Evidence::Embedding: return "embedding";
        case Evidence::Domain: return "domain";
    }
    return "?";
}

/// Per-attribute entry of the lake catalog. `ordinal` indexes the flat
/// attribute array; `id` is "<dataset id># <position>" shaped for output.
struct AttributeRecord {
    std::string id;
    std::uint32_t dataset = 0;   // ordinal into the dataset array
    std::uint32_t position = 0;  // column position within its dataset
    std::string name;
    ColumnKind kind = ColumnKind::Text;
    std::uint64_t extent_size = 0;
    std::uint64_t null_count = 0;
    std::uint64_t token_count = 0;  // |tset|, for the join overlap bound
    bool is_subject = false;
};

struct DatasetRecord {
    std::string id;
    std::string name;
    std::uint64_t row_count = 0;
    std::int64_t subject = -1;  // attribute position, -1 when none
    std::uint32_t first_attr = 0;
    std::uint32_t attr_count = 0;
};

struct CandidateHit {
    std::uint32_t attr;  // attribute ordinal
    double distance;     // estimated or exact, in [0, 1]
};

/// Abstract evidence provider the query pipeline runs against: the production
/// implementation answers from LSH forests; tests may substitute exact set
/// distances behind the same contract (threshold filter, ascending order,
/// budget truncation).
class EvidenceSource {
public:
    virtual ~EvidenceSource() = default;

    virtual const std::vector<DatasetRecord>& datasets() const = 0;
    virtual const std::vector<AttributeRecord>& attributes() const = 0;

    /// Candidates related to an external probe profile under evidence `e`,
    /// sorted by (distance, ordinal), filtered to distance <= 1 - threshold,
    /// at most `budget` entries.
    virtual std::vector<CandidateHit> lookup(Evidence e, const AttributeProfile& probe,
                                             std::size_t budget) const = 0;

    /// Same, probing with an attribute already in the catalog (the probe
    /// itself is part of the result set).
    virtual std::vector<CandidateHit> lookup_attribute(Evidence e, std::uint32_t attr,
                                                       std::size_t budget) const = 0;

    /// Sorted numeric extent of a Numeric attribute (empty for Text).
    virtual const std::vector<double>& numeric_extent(std::uint32_t attr) const = 0;

    /// Whether the attribute carries a usable representation for evidence
    /// `e`: non-sentinel signatures for the indexed four, a measurable
    /// (>= 2 values) extent for Domain. Drives which evidence types are
    /// applicable to a pair.
    virtual bool has_representation(Evidence e, std::uint32_t attr) const = 0;

    std::string attribute_id(std::uint32_t attr) const { return attributes()[attr].id; }
};

inline std::string make_attribute_id(const std::string& dataset_id, std::size_t position) {
    return dataset_id + "#" + std::to_string(position);
}

}  // namespace lakefind
