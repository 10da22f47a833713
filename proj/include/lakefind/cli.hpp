#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lakefind/common.hpp"
#include "lakefind/config.hpp"
#include "lakefind/embedding.hpp"
#include "lakefind/eval.hpp"
#include "lakefind/index.hpp"
#include "lakefind/ingest.hpp"
#include "lakefind/joins.hpp"
#include "lakefind/relatedness.hpp"

namespace lakefind {

namespace detail {

inline std::string fmt6(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

inline std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline std::string csv_field(const std::string& s, char delim) {
    bool needs_quotes = s.find(delim) != std::string::npos ||
                        s.find('"') != std::string::npos || s.find('\n') != std::string::npos ||
                        s.find('\r') != std::string::npos;
    if (!needs_quotes) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace detail

/// Writes a dataset back to a delimiter-separated file. Only null-free
/// datasets can be written (extents exclude nulls, so row alignment requires
/// fully populated columns).
inline void write_table_csv(const Dataset& ds, const std::filesystem::path& path) {
    for (const auto& a : ds.attributes)
        if (a.values.size() != ds.row_count)
            throw ParamError("cannot write dataset with nulls: " + ds.id);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write table: " + path.string());
    for (std::size_t c = 0; c < ds.attributes.size(); ++c) {
        if (c) out << ",";
        out << detail::csv_field(ds.attributes[c].name, ',');
    }
    out << "\n";
    for (std::size_t r = 0; r < ds.row_count; ++r) {
        for (std::size_t c = 0; c < ds.attributes.size(); ++c) {
            if (c) out << ",";
            out << detail::csv_field(ds.attributes[c].values[r], ',');
        }
        out << "\n";
    }
}

/// Loads 5 whitespace-separated evidence weights from a small text file
/// (lines starting with # are comments).
inline EvidenceWeights load_weights_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open weights file: " + path.string());
    std::vector<double> vals;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view s = trim_view(line);
        if (s.empty() || s.front() == '#') continue;
        std::istringstream ss{std::string(s)};
        double x;
        while (ss >> x) vals.push_back(x);
    }
    if (vals.size() != 5)
        throw IoError("weights file must contain exactly 5 numbers: " + path.string());
    EvidenceWeights w;
    for (std::size_t i = 0; i < 5; ++i) w.w[i] = vals[i];
    w.validate();
    return w;
}

inline void save_weights_file(const EvidenceWeights& w, double accuracy,
                              const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write weights file: " + path.string());
    char buf[64];
    std::snprintf(buf, sizeof buf, "# held-out accuracy %.4f\n", accuracy);
    out << buf;
    for (std::size_t i = 0; i < 5; ++i) {
        std::snprintf(buf, sizeof buf, "%.9g", w.w[i]);
        out << (i ? " " : "") << buf;
    }
    out << "\n";
}

// ---------------------------------------------------------------------------
// Query execution shared by the query and eval commands.
// ---------------------------------------------------------------------------

struct QueryRun {
    ProfiledDataset target;
    RowCollection rows;
    std::vector<RankedDataset> ranked;  // top k
};

inline QueryRun run_query(const Dataset& target_table, const LakeIndex& index, std::size_t k,
                          const EvidenceWeights& weights, const EmbeddingModel* model) {
    if (k < 1) throw ParamError("k must be >= 1");
    QueryRun run;
    run.target = profile_dataset(target_table, index.config(), model);
    const std::size_t budget =
        k * static_cast<std::size_t>(index.config().lookup_budget_factor);
    run.rows = collect_rows(run.target, index, budget);
    run.ranked = top_k(run.target, index, k, weights, budget, &run.rows);
    return run;
}

/// Join-path analysis for one query: the SA-join graph over the lake, all
/// qualifying paths from the top-k, and per-top-k coverage with and without
/// following joins.
struct JoinAnalysis {
    JoinGraph graph;
    std::vector<JoinPath> paths;
    std::map<std::uint32_t, std::set<std::uint32_t>> covered;  // dataset -> target attrs
    std::map<std::uint32_t, double> plain_coverage;            // per top-k dataset
    std::map<std::uint32_t, double> join_coverage;
};

inline JoinAnalysis analyze_joins(const QueryRun& run, const LakeIndex& index, std::size_t k) {
    JoinAnalysis ja;
    const std::size_t budget =
        k * static_cast<std::size_t>(index.config().lookup_budget_factor);
    ja.graph = build_join_graph(index, budget, index.config().lsh_threshold);

    std::set<std::uint32_t> top_set;
    for (const auto& r : run.ranked) top_set.insert(r.dataset);
    ja.paths = find_join_paths(ja.graph, top_set, run.rows.evidence_datasets,
                               index.config().max_join_len);

    for (const auto& [ds, rows] : run.rows.rows_by_dataset)
        for (const auto& row : rows) ja.covered[ds].insert(row.target_attr);

    const std::size_t arity = run.target.table.attributes.size();
    for (const auto& r : run.ranked) {
        std::set<std::uint32_t> base = ja.covered[r.dataset];
        ja.plain_coverage[r.dataset] = coverage(base, arity);
        std::set<std::uint32_t> joined = base;
        for (const auto& path : ja.paths) {
            if (path.nodes.front() != r.dataset) continue;
            for (std::uint32_t node : path.nodes) {
                auto it = ja.covered.find(node);
                if (it != ja.covered.end()) joined.insert(it->second.begin(), it->second.end());
            }
        }
        ja.join_coverage[r.dataset] = coverage(joined, arity);
    }
    return ja;
}

// ---------------------------------------------------------------------------
// index command
// ---------------------------------------------------------------------------

struct IndexArgs {
    std::filesystem::path lake_dir;
    std::filesystem::path out_dir;
    std::optional<std::filesystem::path> config_path;
    bool force = false;
};

inline int cmd_index(const IndexArgs& args, std::ostream& out, std::ostream& err) {
    try {
        Config cfg = args.config_path ? Config::from_file(*args.config_path) : Config{};
        cfg.validate();
        namespace fs = std::filesystem;
        if (fs::exists(args.out_dir) && !fs::is_empty(args.out_dir) && !args.force) {
            err << "error: output directory is not empty (use --force): "
                << args.out_dir.string() << "\n";
            return 1;
        }
        auto t0 = std::chrono::steady_clock::now();
        Lake lake = load_lake(args.lake_dir, cfg);
        EmbeddingModel model;
        if (!cfg.embedding_path.empty()) model = EmbeddingModel::load(cfg.embedding_path);
        LakeIndex index = LakeIndex::build(lake.datasets, cfg, model.empty() ? nullptr : &model);
        index.save(args.out_dir);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        for (const auto& w : lake.report.warnings) err << "warning: " << w << "\n";
        for (const auto& [id, n] : lake.report.skipped_rows)
            err << "warning: " << id << ": skipped " << n << " malformed row(s)\n";
        out << "indexed " << index.datasets().size() << " datasets ("
            << index.attributes().size() << " attributes) in " << ms << " ms, "
            << lake.report.warnings.size() << " warning(s), "
            << lake.report.total_skipped_rows() << " skipped row(s)\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

// ---------------------------------------------------------------------------
// query command
// ---------------------------------------------------------------------------

struct QueryArgs {
    std::filesystem::path index_dir;
    std::filesystem::path target_file;
    long long k = 10;
    bool join_paths = false;
    bool json = false;
    bool pretty = false;
    std::optional<std::filesystem::path> weights_path;
    std::optional<std::filesystem::path> embedding_path;  // overrides the indexed path
};

namespace detail {

inline void print_result_line(std::ostream& out, bool json, std::size_t rank,
                              const std::string& id, const DistanceVector& dv) {
    if (json) {
        out << "{\"type\":\"result\",\"rank\":" << rank << ",\"dataset\":\"" << json_escape(id)
            << "\",\"distance\":" << fmt6(dv.combined);
        static constexpr const char* keys[5] = {"dn", "dv", "df", "de", "dd"};
        for (std::size_t t = 0; t < 5; ++t)
            out << ",\"" << keys[t] << "\":" << fmt6(dv.aggregates[t]);
        out << ",\"m\":" << dv.matched << "}\n";
    } else {
        out << "result\t" << rank << "\t" << id << "\t" << fmt6(dv.combined);
        for (std::size_t t = 0; t < 5; ++t) out << "\t" << fmt6(dv.aggregates[t]);
        out << "\t" << dv.matched << "\n";
    }
}

}  // namespace detail

inline int cmd_query(const QueryArgs& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.k < 1) {
            err << "error: k must be >= 1\n";
            return 1;
        }
        LakeIndex index = LakeIndex::load(args.index_dir);
        const Config& cfg = index.config();

        EmbeddingModel model;
        std::string emb = args.embedding_path ? args.embedding_path->string() : cfg.embedding_path;
        if (!emb.empty()) model = EmbeddingModel::load(emb);

        EvidenceWeights weights;
        if (args.weights_path) weights = load_weights_file(*args.weights_path);
        else weights.w = cfg.evidence_weights;
        weights.validate();

        Dataset target = load_single_table(args.target_file, cfg);
        QueryRun run = run_query(target, index, static_cast<std::size_t>(args.k), weights,
                                 model.empty() ? nullptr : &model);

        const auto& ds_records = index.datasets();
        if (args.pretty) {
            out << "rank  distance  dn      dv      df      de      dd      m   dataset\n";
            std::size_t rank = 1;
            for (const auto& r : run.ranked) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "%-5zu %.4f    %.4f  %.4f  %.4f  %.4f  %.4f  %-3zu %s",
                              rank++, r.dv.combined, r.dv.aggregates[0], r.dv.aggregates[1],
                              r.dv.aggregates[2], r.dv.aggregates[3], r.dv.aggregates[4],
                              r.dv.matched, ds_records[r.dataset].id.c_str());
                out << buf << "\n";
            }
        } else {
            std::size_t rank = 1;
            for (const auto& r : run.ranked)
                detail::print_result_line(out, args.json, rank++, ds_records[r.dataset].id, r.dv);
        }

        if (args.join_paths) {
            JoinAnalysis ja = analyze_joins(run, index, static_cast<std::size_t>(args.k));
            const auto& attrs = index.attributes();
            const auto& target_attrs = run.target.table.attributes;
            for (const auto& path : ja.paths) {
                std::vector<std::string> node_ids;
                for (std::uint32_t n : path.nodes) node_ids.push_back(ds_records[n].id);
                std::vector<std::pair<std::string, std::string>> hop_attrs;
                for (std::size_t h = 0; h < path.hops.size(); ++h) {
                    const JoinEdge& e = ja.graph.edges[path.hops[h]];
                    bool forward = e.dataset_a == path.nodes[h];
                    hop_attrs.emplace_back(attrs[forward ? e.attr_a : e.attr_b].name,
                                           attrs[forward ? e.attr_b : e.attr_a].name);
                }
                std::vector<std::vector<std::string>> covered_names;
                for (std::uint32_t n : path.nodes) {
                    std::vector<std::string> names;
                    auto it = ja.covered.find(n);
                    if (it != ja.covered.end())
                        for (std::uint32_t p : it->second) names.push_back(target_attrs[p].name);
                    covered_names.push_back(std::move(names));
                }
                if (args.json) {
                    out << "{\"type\":\"path\",\"start\":\""
                        << detail::json_escape(node_ids.front()) << "\",\"nodes\":[";
                    for (std::size_t i = 0; i < node_ids.size(); ++i)
                        out << (i ? "," : "") << "\"" << detail::json_escape(node_ids[i]) << "\"";
                    out << "],\"hops\":[";
                    for (std::size_t i = 0; i < hop_attrs.size(); ++i)
                        out << (i ? "," : "") << "[\"" << detail::json_escape(hop_attrs[i].first)
                            << "\",\"" << detail::json_escape(hop_attrs[i].second) << "\"]";
                    out << "],\"covered\":[";
                    for (std::size_t i = 0; i < covered_names.size(); ++i) {
                        out << (i ? "," : "") << "[";
                        for (std::size_t j = 0; j < covered_names[i].size(); ++j)
                            out << (j ? "," : "") << "\""
                                << detail::json_escape(covered_names[i][j]) << "\"";
                        out << "]";
                    }
                    out << "]}\n";
                } else {
                    out << "path\t" << node_ids.front() << "\t" << join(node_ids, "->") << "\t";
                    for (std::size_t i = 0; i < hop_attrs.size(); ++i)
                        out << (i ? ";" : "") << hop_attrs[i].first << "~" << hop_attrs[i].second;
                    out << "\t";
                    for (std::size_t i = 0; i < covered_names.size(); ++i)
                        out << (i ? ";" : "") << join(covered_names[i], "|");
                    out << "\n";
                }
            }
            for (const auto& r : run.ranked) {
                const std::string& id = ds_records[r.dataset].id;
                double plain = ja.plain_coverage[r.dataset];
                double joined = ja.join_coverage[r.dataset];
                if (args.json) {
                    out << "{\"type\":\"coverage\",\"dataset\":\"" << detail::json_escape(id)
                        << "\",\"coverage\":" << detail::fmt6(plain)
                        << ",\"join_coverage\":" << detail::fmt6(joined) << "}\n";
                } else {
                    out << "coverage\t" << id << "\t" << detail::fmt6(plain) << "\t"
                        << detail::fmt6(joined) << "\n";
                }
            }
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

// ---------------------------------------------------------------------------
// eval command
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::filesystem::path index_dir;
    std::filesystem::path targets_dir;
    std::filesystem::path truth_path;
    std::vector<long long> k_list{10};
    std::optional<std::size_t> sample;  // evaluate a seeded sample of targets
    std::optional<std::filesystem::path> out_csv;
    std::optional<std::filesystem::path> fit_weights_out;
    std::optional<std::filesystem::path> embedding_path;
};

/// Aggregated metrics of one (k, target) evaluation.
struct TargetMetrics {
    PrecisionRecall pr;
    double coverage = 0.0;
    double join_coverage = 0.0;
    double attribute_precision = 0.0;
    double join_attribute_precision = 0.0;
};

inline TargetMetrics evaluate_target(const QueryRun& run, const JoinAnalysis& ja,
                                     const LakeIndex& index, const GroundTruth& truth) {
    TargetMetrics m;
    const auto& ds_records = index.datasets();
    const auto& attrs = index.attributes();
    const std::string& target_id = run.target.table.id;
    const auto& target_attrs = run.target.table.attributes;

    std::vector<std::string> returned;
    for (const auto& r : run.ranked) returned.push_back(ds_records[r.dataset].id);
    m.pr = precision_recall(returned, truth, target_id);

    if (run.ranked.empty()) return m;

    double cov_sum = 0.0, jcov_sum = 0.0, ap_sum = 0.0, jap_sum = 0.0;
    for (const auto& r : run.ranked) {
        cov_sum += ja.plain_coverage.at(r.dataset);
        jcov_sum += ja.join_coverage.at(r.dataset);

        const auto& rows = run.rows.rows_by_dataset.at(r.dataset);
        std::size_t tp = 0;
        for (const auto& row : rows) {
            if (truth.attr_related(target_id, target_attrs[row.target_attr].name,
                                   ds_records[r.dataset].id, attrs[row.candidate_attr].name))
                ++tp;
        }
        ap_sum += rows.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(rows.size());

        // join-path variant: for each target attribute, the set of attributes
        // aligned to it across the path nodes counts once, true positive when
        // any member is related
        std::set<std::uint32_t> nodes{r.dataset};
        for (const auto& path : ja.paths)
            if (path.nodes.front() == r.dataset)
                nodes.insert(path.nodes.begin(), path.nodes.end());
        std::map<std::uint32_t, bool> per_target_attr;  // target attr -> any related
        for (std::uint32_t node : nodes) {
            auto it = run.rows.rows_by_dataset.find(node);
            if (it == run.rows.rows_by_dataset.end()) continue;
            for (const auto& row : it->second) {
                bool related = truth.attr_related(target_id, target_attrs[row.target_attr].name,
                                                  ds_records[node].id,
                                                  attrs[row.candidate_attr].name);
                auto [slot, inserted] = per_target_attr.emplace(row.target_attr, related);
                if (!inserted) slot->second = slot->second || related;
            }
        }
        if (per_target_attr.empty()) {
            jap_sum += 0.0;
        } else {
            std::size_t set_tp = 0;
            for (const auto& [_, ok] : per_target_attr)
                if (ok) ++set_tp;
            jap_sum += static_cast<double>(set_tp) / static_cast<double>(per_target_attr.size());
        }
    }
    const double n = static_cast<double>(run.ranked.size());
    m.coverage = cov_sum / n;
    m.join_coverage = jcov_sum / n;
    m.attribute_precision = ap_sum / n;
    m.join_attribute_precision = jap_sum / n;
    return m;
}

inline int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
    try {
        LakeIndex index = LakeIndex::load(args.index_dir);
        const Config& cfg = index.config();
        GroundTruth truth = GroundTruth::load(args.truth_path);

        EmbeddingModel model;
        std::string emb = args.embedding_path ? args.embedding_path->string() : cfg.embedding_path;
        if (!emb.empty()) model = EmbeddingModel::load(emb);
        const EmbeddingModel* model_ptr = model.empty() ? nullptr : &model;

        for (long long k : args.k_list)
            if (k < 1) {
                err << "error: k must be >= 1\n";
                return 1;
            }

        namespace fs = std::filesystem;
        if (!fs::is_directory(args.targets_dir)) {
            err << "error: targets directory does not exist: " << args.targets_dir.string()
                << "\n";
            return 1;
        }
        std::vector<fs::path> target_files;
        for (const auto& entry : fs::recursive_directory_iterator(args.targets_dir)) {
            if (!entry.is_regular_file()) continue;
            if (entry.path().filename().string().starts_with(".")) continue;
            target_files.push_back(entry.path());
        }
        std::sort(target_files.begin(), target_files.end());
        if (args.sample && *args.sample < target_files.size()) {
            Rng rng(mix_seed(cfg.seed, 0x7461726765ULL));
            rng.shuffle(target_files);
            target_files.resize(*args.sample);
            std::sort(target_files.begin(), target_files.end());
        }

        // load and profile once; skip unparseable or uncovered targets
        std::vector<Dataset> targets;
        for (const auto& f : target_files) {
            LoadReport report;
            auto ds = load_table_file(f, f.filename().generic_string(), cfg, report);
            if (!ds) {
                err << "warning: skipping unreadable target " << f.string() << "\n";
                continue;
            }
            if (!truth.covers(ds->id)) {
                err << "warning: target not covered by ground truth, skipped: " << ds->id
                    << "\n";
                continue;
            }
            targets.push_back(std::move(*ds));
        }
        if (targets.empty()) {
            err << "error: no evaluable targets\n";
            return 1;
        }

        EvidenceWeights weights;
        weights.w = cfg.evidence_weights;
        weights.validate();

        std::ostringstream csv;
        csv << "k,precision,recall,coverage,join_coverage,attribute_precision\n";
        for (long long k : args.k_list) {
            double p = 0, r = 0, cov = 0, jcov = 0, ap = 0;
            for (const auto& target : targets) {
                QueryRun run = run_query(target, index, static_cast<std::size_t>(k), weights,
                                         model_ptr);
                JoinAnalysis ja = analyze_joins(run, index, static_cast<std::size_t>(k));
                TargetMetrics tm = evaluate_target(run, ja, index, truth);
                p += tm.pr.precision;
                r += tm.pr.recall;
                cov += tm.coverage;
                jcov += tm.join_coverage;
                ap += tm.attribute_precision;
            }
            const double n = static_cast<double>(targets.size());
            csv << k << "," << detail::fmt6(p / n) << "," << detail::fmt6(r / n) << ","
                << detail::fmt6(cov / n) << "," << detail::fmt6(jcov / n) << ","
                << detail::fmt6(ap / n) << "\n";
        }

        if (args.out_csv) {
            std::ofstream f(*args.out_csv, std::ios::binary);
            if (!f) throw IoError("cannot write metrics csv: " + args.out_csv->string());
            f << csv.str();
        } else {
            out << csv.str();
        }

        if (args.fit_weights_out) {
            std::vector<ProfiledDataset> profiled;
            profiled.reserve(targets.size());
            for (const auto& t : targets) profiled.push_back(profile_dataset(t, cfg, model_ptr));
            long long max_k = *std::max_element(args.k_list.begin(), args.k_list.end());
            std::size_t budget = static_cast<std::size_t>(max_k * cfg.lookup_budget_factor);
            auto pairs = build_labeled_pairs(profiled, index, truth, budget, 400,
                                             mix_seed(cfg.seed, 0x666974ULL));
            FitResult fit = fit_weights(pairs);
            save_weights_file(fit.weights, fit.held_out_accuracy, *args.fit_weights_out);
            out << "fitted weights on " << pairs.size() << " pairs, held-out accuracy "
                << detail::fmt6(fit.held_out_accuracy) << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

// ---------------------------------------------------------------------------
// bench command
// ---------------------------------------------------------------------------

struct BenchArgs {
    std::filesystem::path base_dir;
    std::filesystem::path out_dir;
    std::size_t count = 0;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> config_path;
    std::optional<std::filesystem::path> embedding_out;  // synthetic vector file
    std::size_t embedding_dim = 50;
};

/// Deterministic synthetic vector file covering every word that appears in
/// the text extents of the given tables. Word vectors depend only on
/// (seed, word).
inline EmbeddingModel synthesize_embeddings(const std::vector<Dataset>& tables,
                                            std::size_t dim, std::uint64_t seed) {
    std::set<std::string> vocabulary;
    for (const auto& ds : tables)
        for (const auto& attr : ds.attributes) {
            if (attr.kind != ColumnKind::Text) continue;
            for (const auto& v : attr.values)
                for (const auto& part : split_parts_words(v))
                    for (const auto& w : part) vocabulary.insert(w);
        }
    EmbeddingModel model(dim);
    for (const auto& w : vocabulary) {
        Rng rng(mix_seed(seed, hash_bytes(w, 0x766f63ULL)));
        std::vector<float> vec(dim);
        for (auto& x : vec) x = static_cast<float>(rng.next_gaussian());
        model.insert(w, std::move(vec));
    }
    return model;
}

inline int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
    try {
        Config cfg = args.config_path ? Config::from_file(*args.config_path) : Config{};
        cfg.validate();
        Lake bases = load_lake(args.base_dir, cfg);
        if (args.count < bases.datasets.size()) {
            err << "error: benchmark size " << args.count << " is smaller than the number of base tables ("
                << bases.datasets.size() << ")\n";
            return 1;
        }
        BenchmarkOptions opt;
        opt.count = args.count;
        opt.seed = args.seed ? *args.seed : cfg.seed;
        Benchmark bench = generate_benchmark(bases.datasets, opt, cfg);

        namespace fs = std::filesystem;
        fs::create_directories(args.out_dir / "lake");
        for (const auto& ds : bench.tables) write_table_csv(ds, args.out_dir / "lake" / ds.id);
        bench.truth.save(args.out_dir / "truth.tsv");
        if (args.embedding_out) {
            EmbeddingModel model = synthesize_embeddings(bases.datasets, args.embedding_dim,
                                                         opt.seed);
            model.save(*args.embedding_out);
        }
        for (const auto& w : bench.warnings) err << "warning: " << w << "\n";
        out << "generated " << bench.tables.size() << " tables from " << bases.datasets.size()
            << " base tables (seed " << opt.seed << ") under " << (args.out_dir / "lake").string()
            << "\n";
        return 0;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace lakefind
