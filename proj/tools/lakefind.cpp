#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lakefind/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"lakefind - related-table discovery over data lakes"};
    app.require_subcommand(1);

    lakefind::IndexArgs index_args;
    std::string index_config;
    auto* index_cmd = app.add_subcommand("index", "build the sketch indexes over a lake");
    index_cmd->add_option("lake", index_args.lake_dir, "lake directory")->required();
    index_cmd->add_option("out", index_args.out_dir, "output index directory")->required();
    index_cmd->add_option("--config", index_config, "config file (key = value)");
    index_cmd->add_flag("--force", index_args.force, "overwrite a non-empty output directory");

    lakefind::QueryArgs query_args;
    std::string query_weights, query_embeddings;
    auto* query_cmd = app.add_subcommand("query", "find the k most related tables to a target");
    query_cmd->add_option("index", query_args.index_dir, "index directory")->required();
    query_cmd->add_option("target", query_args.target_file, "target table file")->required();
    query_cmd->add_option("-k,--k", query_args.k, "answer size")->default_val(10);
    query_cmd->add_flag("--join-paths", query_args.join_paths,
                        "also report join paths and join-augmented coverage");
    query_cmd->add_flag("--json", query_args.json, "one JSON object per output line");
    query_cmd->add_flag("--pretty", query_args.pretty, "human-readable table");
    query_cmd->add_option("--weights", query_weights, "evidence weights file (5 values)");
    query_cmd->add_option("--embeddings", query_embeddings,
                          "embedding vector file (overrides the indexed path)");

    lakefind::EvalArgs eval_args;
    std::string eval_k = "10";
    std::string eval_out, eval_fit, eval_embeddings;
    long long eval_sample = 0;
    auto* eval_cmd = app.add_subcommand("eval", "precision/recall/coverage metrics against a ground truth");
    eval_cmd->add_option("index", eval_args.index_dir, "index directory")->required();
    eval_cmd->add_option("targets", eval_args.targets_dir, "directory of target tables")->required();
    eval_cmd->add_option("truth", eval_args.truth_path, "ground truth file")->required();
    eval_cmd->add_option("-k,--k", eval_k, "comma-separated answer sizes")->default_val("10");
    eval_cmd->add_option("--sample", eval_sample, "evaluate a seeded sample of N targets");
    eval_cmd->add_option("--out", eval_out, "write the metrics CSV here instead of stdout");
    eval_cmd->add_option("--fit-weights", eval_fit, "fit evidence weights and write them here");
    eval_cmd->add_option("--embeddings", eval_embeddings, "embedding vector file override");

    lakefind::BenchArgs bench_args;
    long long bench_seed = -1;
    std::string bench_config, bench_embeddings;
    auto* bench_cmd = app.add_subcommand("bench", "generate a synthetic lake with ground truth");
    bench_cmd->add_option("bases", bench_args.base_dir, "directory of base tables")->required();
    bench_cmd->add_option("out", bench_args.out_dir, "output directory")->required();
    bench_cmd->add_option("-n,--count", bench_args.count, "number of derived tables")->required();
    bench_cmd->add_option("--seed", bench_seed, "derivation seed (defaults to the config seed)");
    bench_cmd->add_option("--config", bench_config, "config file");
    bench_cmd->add_option("--embeddings-out", bench_embeddings,
                          "also write a synthetic embedding vector file covering the base vocabulary");
    bench_cmd->add_option("--embedding-dim", bench_args.embedding_dim, "synthetic vector dimension")
        ->default_val(50);

    CLI11_PARSE(app, argc, argv);

    if (index_cmd->parsed()) {
        if (!index_config.empty()) index_args.config_path = index_config;
        return lakefind::cmd_index(index_args, std::cout, std::cerr);
    }
    if (query_cmd->parsed()) {
        if (!query_weights.empty()) query_args.weights_path = query_weights;
        if (!query_embeddings.empty()) query_args.embedding_path = query_embeddings;
        return lakefind::cmd_query(query_args, std::cout, std::cerr);
    }
    if (eval_cmd->parsed()) {
        eval_args.k_list.clear();
        for (const auto& part : lakefind::split(eval_k, ',')) {
            try {
                eval_args.k_list.push_back(std::stoll(lakefind::trim(part)));
            } catch (const std::exception&) {
                std::cerr << "error: bad k list: " << eval_k << "\n";
                return 1;
            }
        }
        if (eval_sample > 0) eval_args.sample = static_cast<std::size_t>(eval_sample);
        if (!eval_out.empty()) eval_args.out_csv = eval_out;
        if (!eval_fit.empty()) eval_args.fit_weights_out = eval_fit;
        if (!eval_embeddings.empty()) eval_args.embedding_path = eval_embeddings;
        return lakefind::cmd_eval(eval_args, std::cout, std::cerr);
    }
    if (bench_cmd->parsed()) {
        if (bench_seed >= 0) bench_args.seed = static_cast<std::uint64_t>(bench_seed);
        if (!bench_config.empty()) bench_args.config_path = bench_config;
        if (!bench_embeddings.empty()) bench_args.embedding_out = bench_embeddings;
        return lakefind::cmd_bench(bench_args, std::cout, std::cerr);
    }
    return 1;
}
