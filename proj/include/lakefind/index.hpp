#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lakefind/common.hpp"
#include "lakefind/config.hpp"
#include "lakefind/evidence.hpp"
#include "lakefind/lsh_forest.hpp"
#include "lakefind/profile.hpp"

namespace lakefind {

namespace io {

inline void write_u8(std::ostream& out, std::uint8_t v) {
    out.put(static_cast<char>(v));
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void write_u64(std::ostream& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void write_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_u64(out, bits);
}

inline std::uint8_t read_u8(std::istream& in) {
    int c = in.get();
    if (c == EOF) throw IoError("unexpected end of index file");
    return static_cast<std::uint8_t>(c);
}

inline std::uint32_t read_u32(std::istream& in) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(read_u8(in)) << (8 * i);
    return v;
}

inline std::uint64_t read_u64(std::istream& in) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(read_u8(in)) << (8 * i);
    return v;
}

inline double read_f64(std::istream& in) {
    std::uint64_t bits = read_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace io

namespace detail {

inline constexpr std::uint32_t kContainerMagic = 0x4c4b4958;  // "LKIX"
inline constexpr std::uint32_t kSidecarMagic = 0x4c4b4e58;    // "LKNX"
inline constexpr std::uint32_t kFormatVersion = 1;

inline nlohmann::ordered_json config_to_json(const Config& cfg) {
    nlohmann::ordered_json j;
    j["qgram_size"] = cfg.qgram_size;
    j["minhash_size"] = cfg.minhash_size;
    j["rp_bits"] = cfg.rp_bits;
    j["lsh_threshold"] = cfg.lsh_threshold;
    j["forest_trees"] = cfg.forest_trees;
    j["forest_max_depth"] = cfg.forest_max_depth;
    j["lookup_budget_factor"] = cfg.lookup_budget_factor;
    j["theta_num"] = cfg.theta_num;
    j["subject_alpha"] = cfg.subject_alpha;
    j["subject_beta"] = cfg.subject_beta;
    j["subject_gamma"] = cfg.subject_gamma;
    j["evidence_weights"] = cfg.evidence_weights;
    j["embedding_path"] = cfg.embedding_path;
    j["sample_cap"] = cfg.sample_cap;
    j["seed"] = cfg.seed;
    j["max_join_len"] = cfg.max_join_len;
    j["null_markers"] = cfg.null_markers;
    return j;
}

inline Config config_from_json(const nlohmann::json& j) {
    Config cfg;
    cfg.qgram_size = j.at("qgram_size").get<int>();
    cfg.minhash_size = j.at("minhash_size").get<int>();
    cfg.rp_bits = j.at("rp_bits").get<int>();
    cfg.lsh_threshold = j.at("lsh_threshold").get<double>();
    cfg.forest_trees = j.at("forest_trees").get<int>();
    cfg.forest_max_depth = j.at("forest_max_depth").get<int>();
    cfg.lookup_budget_factor = j.at("lookup_budget_factor").get<int>();
    cfg.theta_num = j.at("theta_num").get<double>();
    cfg.subject_alpha = j.at("subject_alpha").get<double>();
    cfg.subject_beta = j.at("subject_beta").get<double>();
    cfg.subject_gamma = j.at("subject_gamma").get<double>();
    auto w = j.at("evidence_weights");
    for (std::size_t i = 0; i < 5; ++i) cfg.evidence_weights[i] = w.at(i).get<double>();
    cfg.embedding_path = j.at("embedding_path").get<std::string>();
    cfg.sample_cap = j.at("sample_cap").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.max_join_len = j.at("max_join_len").get<int>();
    cfg.null_markers = j.at("null_markers").get<std::vector<std::string>>();
    cfg.validate();
    return cfg;
}

}  // namespace detail

/// The four persistent sketch indexes over a lake plus the catalog needed at
/// query time (dataset/attribute records, subject flags, numeric extents).
class LakeIndex : public EvidenceSource {
public:
    /// Profiles every dataset and inserts its evidence signatures.
    static LakeIndex build(const std::vector<Dataset>& tables, const Config& cfg,
                           const EmbeddingModel* model) {
        cfg.validate();
        LakeIndex idx(cfg, model ? model->dimension() : 0);
        for (const auto& ds : tables) {
            ProfiledDataset pd = profile_dataset(ds, cfg, model);
            idx.add_profiled(pd);
        }
        return idx;
    }

    static LakeIndex build_profiled(const std::vector<ProfiledDataset>& tables, const Config& cfg,
                                    std::size_t embedding_dim) {
        cfg.validate();
        LakeIndex idx(cfg, embedding_dim);
        for (const auto& pd : tables) idx.add_profiled(pd);
        return idx;
    }

    const Config& config() const { return config_; }
    std::size_t embedding_dim() const { return embedding_dim_; }

    // EvidenceSource -------------------------------------------------------

    const std::vector<DatasetRecord>& datasets() const override { return datasets_; }
    const std::vector<AttributeRecord>& attributes() const override { return attrs_; }

    std::vector<CandidateHit> lookup(Evidence e, const AttributeProfile& probe,
                                     std::size_t budget) const override {
        switch (e) {
            case Evidence::Name:
                return lift(name_forest_.lookup(name_hasher_.sketch(probe.name_qgrams), budget));
            case Evidence::Value:
                if (probe.value_tokens.empty()) return {};
                return lift(value_forest_.lookup(value_hasher_.sketch(probe.value_tokens), budget));
            case Evidence::Format:
                if (probe.format_patterns.empty()) return {};
                return lift(
                    format_forest_.lookup(format_hasher_.sketch(probe.format_patterns), budget));
            case Evidence::Embedding: {
                if (!probe.embedding || embedding_dim_ == 0) return {};
                if (probe.embedding->size() != embedding_dim_)
                    throw ParamError("probe embedding dimension differs from the index");
                return lift(embedding_forest_.lookup(projector_.sketch(*probe.embedding), budget));
            }
            case Evidence::Domain:
                throw ParamError("domain evidence has no index");
        }
        return {};
    }

    std::vector<CandidateHit> lookup_attribute(Evidence e, std::uint32_t attr,
                                               std::size_t budget) const override {
        switch (e) {
            case Evidence::Name: {
                const auto* sig = name_forest_.find(attr);
                return sig ? lift(name_forest_.lookup(*sig, budget)) : std::vector<CandidateHit>{};
            }
            case Evidence::Value: {
                const auto* sig = value_forest_.find(attr);
                return sig ? lift(value_forest_.lookup(*sig, budget)) : std::vector<CandidateHit>{};
            }
            case Evidence::Format: {
                const auto* sig = format_forest_.find(attr);
                return sig ? lift(format_forest_.lookup(*sig, budget))
                           : std::vector<CandidateHit>{};
            }
            case Evidence::Embedding: {
                const auto* sig = embedding_forest_.find(attr);
                return sig ? lift(embedding_forest_.lookup(*sig, budget))
                           : std::vector<CandidateHit>{};
            }
            case Evidence::Domain:
                throw ParamError("domain evidence has no index");
        }
        return {};
    }

    const std::vector<double>& numeric_extent(std::uint32_t attr) const override {
        return numeric_extents_[attr];
    }

    bool has_representation(Evidence e, std::uint32_t attr) const override {
        switch (e) {
            case Evidence::Name: {
                const auto* sig = name_forest_.find(attr);
                return sig && !sig->empty_input();
            }
            case Evidence::Value: {
                const auto* sig = value_forest_.find(attr);
                return sig && !sig->empty_input();
            }
            case Evidence::Format: {
                const auto* sig = format_forest_.find(attr);
                return sig && !sig->empty_input();
            }
            case Evidence::Embedding: {
                const auto* sig = embedding_forest_.find(attr);
                return sig && !sig->empty_input;
            }
            case Evidence::Domain:
                return numeric_extents_[attr].size() >= 2;
        }
        return false;
    }

    // Persistence ----------------------------------------------------------

    void save(const std::filesystem::path& dir) const {
        namespace fs = std::filesystem;
        fs::create_directories(dir);
        write_manifest(dir / "manifest.json");
        save_minhash_container(dir / "name.idx", 'N', name_forest_, name_hasher_);
        save_minhash_container(dir / "value.idx", 'V', value_forest_, value_hasher_);
        save_minhash_container(dir / "format.idx", 'F', format_forest_, format_hasher_);
        save_rp_container(dir / "embedding.idx");
        save_numeric_sidecar(dir / "numeric.bin");
    }

    static LakeIndex load(const std::filesystem::path& dir) {
        namespace fs = std::filesystem;
        auto manifest_path = dir / "manifest.json";
        std::ifstream in(manifest_path);
        if (!in) throw IoError("cannot open index manifest: " + manifest_path.string());
        nlohmann::json j = nlohmann::json::parse(in);
        if (j.value("format", "") != std::string("lakefind-index"))
            throw IoError("not a lakefind index manifest");
        if (j.at("version").get<std::uint32_t>() != detail::kFormatVersion)
            throw ParamError("unsupported index format version");
        Config cfg = detail::config_from_json(j.at("config"));
        LakeIndex idx(cfg, j.at("embedding_dim").get<std::size_t>());

        for (const auto& dj : j.at("datasets")) {
            DatasetRecord dr;
            dr.id = dj.at("id").get<std::string>();
            dr.name = dj.at("name").get<std::string>();
            dr.row_count = dj.at("row_count").get<std::uint64_t>();
            dr.subject = dj.at("subject").get<std::int64_t>();
            dr.first_attr = static_cast<std::uint32_t>(idx.attrs_.size());
            const auto& attrs = dj.at("attributes");
            dr.attr_count = static_cast<std::uint32_t>(attrs.size());
            std::uint32_t ds_ordinal = static_cast<std::uint32_t>(idx.datasets_.size());
            for (const auto& aj : attrs) {
                AttributeRecord ar;
                ar.dataset = ds_ordinal;
                ar.position = aj.at("position").get<std::uint32_t>();
                ar.name = aj.at("name").get<std::string>();
                ar.kind = aj.at("kind").get<std::string>() == "numeric" ? ColumnKind::Numeric
                                                                        : ColumnKind::Text;
                ar.extent_size = aj.at("extent_size").get<std::uint64_t>();
                ar.null_count = aj.at("null_count").get<std::uint64_t>();
                ar.token_count = aj.at("token_count").get<std::uint64_t>();
                ar.is_subject = aj.at("is_subject").get<bool>();
                ar.id = make_attribute_id(dr.id, ar.position);
                idx.attrs_.push_back(std::move(ar));
            }
            idx.datasets_.push_back(std::move(dr));
        }
        idx.numeric_extents_.assign(idx.attrs_.size(), {});

        idx.load_minhash_container(dir / "name.idx", 'N', idx.name_forest_);
        idx.load_minhash_container(dir / "value.idx", 'V', idx.value_forest_);
        idx.load_minhash_container(dir / "format.idx", 'F', idx.format_forest_);
        idx.load_rp_container(dir / "embedding.idx");
        idx.load_numeric_sidecar(dir / "numeric.bin");
        return idx;
    }

private:
    explicit LakeIndex(const Config& cfg, std::size_t embedding_dim)
        : config_(cfg),
          embedding_dim_(embedding_dim),
          name_hasher_(cfg.minhash_size, mix_seed(cfg.seed, 'N')),
          value_hasher_(cfg.minhash_size, mix_seed(cfg.seed, 'V')),
          format_hasher_(cfg.minhash_size, mix_seed(cfg.seed, 'F')),
          projector_(cfg.rp_bits, mix_seed(cfg.seed, 'E')),
          name_forest_(minhash_params(cfg)),
          value_forest_(minhash_params(cfg)),
          format_forest_(minhash_params(cfg)),
          embedding_forest_(rp_params(cfg)) {}

    static LshForest<MinHashPolicy>::Params minhash_params(const Config& cfg) {
        return {cfg.forest_trees, cfg.forest_depth_for(cfg.minhash_size), cfg.lsh_threshold};
    }

    static LshForest<RpPolicy>::Params rp_params(const Config& cfg) {
        return {cfg.forest_trees, cfg.forest_depth_for(cfg.rp_bits), cfg.lsh_threshold};
    }

    static std::vector<CandidateHit> lift(const std::vector<LshForest<MinHashPolicy>::Hit>& hits) {
        std::vector<CandidateHit> out;
        out.reserve(hits.size());
        for (const auto& h : hits) out.push_back({h.id, h.distance});
        return out;
    }

    static std::vector<CandidateHit> lift(const std::vector<LshForest<RpPolicy>::Hit>& hits) {
        std::vector<CandidateHit> out;
        out.reserve(hits.size());
        for (const auto& h : hits) out.push_back({h.id, h.distance});
        return out;
    }

    void add_profiled(const ProfiledDataset& pd) {
        DatasetRecord dr;
        dr.id = pd.table.id;
        dr.name = pd.table.name;
        dr.row_count = pd.table.row_count;
        dr.subject = pd.subject ? static_cast<std::int64_t>(*pd.subject) : -1;
        dr.first_attr = static_cast<std::uint32_t>(attrs_.size());
        dr.attr_count = static_cast<std::uint32_t>(pd.table.attributes.size());
        const std::uint32_t ds_ordinal = static_cast<std::uint32_t>(datasets_.size());

        for (std::size_t i = 0; i < pd.table.attributes.size(); ++i) {
            const Attribute& attr = pd.table.attributes[i];
            const AttributeProfile& prof = pd.profiles[i];
            const std::uint32_t ordinal = static_cast<std::uint32_t>(attrs_.size());

            AttributeRecord ar;
            ar.id = make_attribute_id(pd.table.id, attr.position);
            ar.dataset = ds_ordinal;
            ar.position = static_cast<std::uint32_t>(attr.position);
            ar.name = attr.name;
            ar.kind = attr.kind;
            ar.extent_size = attr.values.size();
            ar.null_count = attr.null_count;
            ar.token_count = prof.value_tokens.size();
            ar.is_subject = prof.is_subject;
            attrs_.push_back(std::move(ar));

            name_forest_.insert(ordinal, name_hasher_.sketch(prof.name_qgrams));
            format_forest_.insert(ordinal, format_hasher_.sketch(prof.format_patterns));
            if (attr.kind == ColumnKind::Text)
                value_forest_.insert(ordinal, value_hasher_.sketch(prof.value_tokens));
            if (prof.embedding) {
                if (embedding_dim_ == 0) embedding_dim_ = prof.embedding->size();
                if (prof.embedding->size() != embedding_dim_)
                    throw ParamError("inconsistent embedding dimensions across attributes");
                embedding_forest_.insert(ordinal, projector_.sketch(*prof.embedding));
            }
            numeric_extents_.push_back(prof.numeric_extent ? *prof.numeric_extent
                                                           : std::vector<double>{});
        }
        datasets_.push_back(std::move(dr));
    }

    void write_manifest(const std::filesystem::path& path) const {
        nlohmann::ordered_json j;
        j["format"] = "lakefind-index";
        j["version"] = detail::kFormatVersion;
        j["config"] = detail::config_to_json(config_);
        j["embedding_dim"] = embedding_dim_;
        auto& dsj = j["datasets"] = nlohmann::ordered_json::array();
        for (const auto& dr : datasets_) {
            nlohmann::ordered_json dj;
            dj["id"] = dr.id;
            dj["name"] = dr.name;
            dj["row_count"] = dr.row_count;
            dj["subject"] = dr.subject;
            auto& aj = dj["attributes"] = nlohmann::ordered_json::array();
            for (std::uint32_t a = dr.first_attr; a < dr.first_attr + dr.attr_count; ++a) {
                const auto& ar = attrs_[a];
                nlohmann::ordered_json rec;
                rec["name"] = ar.name;
                rec["position"] = ar.position;
                rec["kind"] = kind_name(ar.kind);
                rec["extent_size"] = ar.extent_size;
                rec["null_count"] = ar.null_count;
                rec["token_count"] = ar.token_count;
                rec["is_subject"] = ar.is_subject;
                aj.push_back(std::move(rec));
            }
            dsj.push_back(std::move(dj));
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write manifest: " + path.string());
        out << j.dump(2) << "\n";
    }

    void write_container_header(std::ostream& out, char tag, std::uint8_t sketch_kind,
                                std::uint32_t width, std::uint32_t depth,
                                std::uint64_t seed, std::uint64_t count) const {
        io::write_u32(out, detail::kContainerMagic);
        io::write_u32(out, detail::kFormatVersion);
        io::write_u8(out, static_cast<std::uint8_t>(tag));
        io::write_u8(out, sketch_kind);
        io::write_u32(out, width);
        io::write_u32(out, static_cast<std::uint32_t>(config_.forest_trees));
        io::write_u32(out, depth);
        io::write_f64(out, config_.lsh_threshold);
        io::write_u64(out, seed);
        io::write_u64(out, count);
    }

    struct ContainerHeader {
        char tag;
        std::uint8_t sketch_kind;
        std::uint32_t width;
        std::uint32_t trees;
        std::uint32_t depth;
        double threshold;
        std::uint64_t seed;
        std::uint64_t count;
    };

    static ContainerHeader read_container_header(std::istream& in, const std::string& what) {
        if (io::read_u32(in) != detail::kContainerMagic)
            throw IoError(what + ": not a lakefind index container");
        if (io::read_u32(in) != detail::kFormatVersion)
            throw ParamError(what + ": unsupported container version");
        ContainerHeader h;
        h.tag = static_cast<char>(io::read_u8(in));
        h.sketch_kind = io::read_u8(in);
        h.width = io::read_u32(in);
        h.trees = io::read_u32(in);
        h.depth = io::read_u32(in);
        h.threshold = io::read_f64(in);
        h.seed = io::read_u64(in);
        h.count = io::read_u64(in);
        return h;
    }

    void check_header(const ContainerHeader& h, char tag, std::uint8_t kind, std::uint32_t width,
                      std::uint32_t depth, std::uint64_t seed, const std::string& what) const {
        if (h.tag != tag || h.sketch_kind != kind || h.width != width ||
            h.trees != static_cast<std::uint32_t>(config_.forest_trees) || h.depth != depth ||
            h.threshold != config_.lsh_threshold || h.seed != seed)
            throw ParamError(what + ": container parameters do not match the manifest config");
    }

    void save_minhash_container(const std::filesystem::path& path, char tag,
                                const LshForest<MinHashPolicy>& forest,
                                const MinHasher& hasher) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write index container: " + path.string());
        write_container_header(out, tag, 0, static_cast<std::uint32_t>(hasher.size()),
                               static_cast<std::uint32_t>(forest.params().depth), hasher.seed(),
                               forest.size());
        forest.for_each([&](std::uint32_t id, const MinHashSignature& sig) {
            io::write_u32(out, id);
            for (std::uint64_t m : sig.mins) io::write_u64(out, m);
        });
    }

    void load_minhash_container(const std::filesystem::path& path, char tag,
                                LshForest<MinHashPolicy>& forest) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open index container: " + path.string());
        auto h = read_container_header(in, path.string());
        const MinHasher& hasher =
            tag == 'N' ? name_hasher_ : (tag == 'V' ? value_hasher_ : format_hasher_);
        check_header(h, tag, 0, static_cast<std::uint32_t>(hasher.size()),
                     static_cast<std::uint32_t>(forest.params().depth), hasher.seed(),
                     path.string());
        for (std::uint64_t i = 0; i < h.count; ++i) {
            std::uint32_t id = io::read_u32(in);
            if (id >= attrs_.size()) throw IoError(path.string() + ": entry id out of range");
            MinHashSignature sig;
            sig.mins.resize(h.width);
            for (auto& m : sig.mins) m = io::read_u64(in);
            forest.insert(id, std::move(sig));
        }
    }

    void save_rp_container(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write index container: " + path.string());
        write_container_header(out, 'E', 1, static_cast<std::uint32_t>(projector_.bits()),
                               static_cast<std::uint32_t>(embedding_forest_.params().depth),
                               projector_.seed(), embedding_forest_.size());
        embedding_forest_.for_each([&](std::uint32_t id, const RpSignature& sig) {
            io::write_u32(out, id);
            io::write_u8(out, sig.empty_input ? 1 : 0);
            for (std::uint64_t w : sig.words) io::write_u64(out, w);
        });
    }

    void load_rp_container(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open index container: " + path.string());
        auto h = read_container_header(in, path.string());
        check_header(h, 'E', 1, static_cast<std::uint32_t>(projector_.bits()),
                     static_cast<std::uint32_t>(embedding_forest_.params().depth),
                     projector_.seed(), path.string());
        const std::size_t word_count = (h.width + 63) / 64;
        for (std::uint64_t i = 0; i < h.count; ++i) {
            std::uint32_t id = io::read_u32(in);
            if (id >= attrs_.size()) throw IoError(path.string() + ": entry id out of range");
            RpSignature sig;
            sig.bit_count = static_cast<int>(h.width);
            sig.empty_input = io::read_u8(in) != 0;
            sig.words.resize(word_count);
            for (auto& w : sig.words) w = io::read_u64(in);
            embedding_forest_.insert(id, std::move(sig));
        }
    }

    void save_numeric_sidecar(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write numeric sidecar: " + path.string());
        io::write_u32(out, detail::kSidecarMagic);
        io::write_u32(out, detail::kFormatVersion);
        std::uint64_t count = 0;
        for (const auto& e : numeric_extents_)
            if (!e.empty()) ++count;
        io::write_u64(out, count);
        for (std::size_t a = 0; a < numeric_extents_.size(); ++a) {
            const auto& e = numeric_extents_[a];
            if (e.empty()) continue;
            io::write_u32(out, static_cast<std::uint32_t>(a));
            io::write_u64(out, e.size());
            for (double x : e) io::write_f64(out, x);
        }
    }

    void load_numeric_sidecar(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoError("cannot open numeric sidecar: " + path.string());
        if (io::read_u32(in) != detail::kSidecarMagic)
            throw IoError(path.string() + ": not a lakefind numeric sidecar");
        if (io::read_u32(in) != detail::kFormatVersion)
            throw ParamError(path.string() + ": unsupported sidecar version");
        std::uint64_t count = io::read_u64(in);
        for (std::uint64_t i = 0; i < count; ++i) {
            std::uint32_t id = io::read_u32(in);
            if (id >= attrs_.size()) throw IoError(path.string() + ": entry id out of range");
            std::uint64_t n = io::read_u64(in);
            auto& e = numeric_extents_[id];
            e.resize(n);
            for (auto& x : e) x = io::read_f64(in);
        }
    }

    Config config_;
    std::size_t embedding_dim_ = 0;
    std::vector<DatasetRecord> datasets_;
    std::vector<AttributeRecord> attrs_;
    std::vector<std::vector<double>> numeric_extents_;
    MinHasher name_hasher_;
    MinHasher value_hasher_;
    MinHasher format_hasher_;
    RandomProjector projector_;
    LshForest<MinHashPolicy> name_forest_;
    LshForest<MinHashPolicy> value_forest_;
    LshForest<MinHashPolicy> format_forest_;
    LshForest<RpPolicy> embedding_forest_;
};

}  // namespace lakefind
