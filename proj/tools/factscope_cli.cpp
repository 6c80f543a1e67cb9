#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "factscope/config.hpp"
#include "factscope/engine.hpp"
#include "factscope/eval.hpp"
#include "factscope/ingest.hpp"
#include "factscope/service.hpp"

namespace {

using factscope::EngineConfig;
using factscope::QueryOptions;
using nlohmann::json;

struct CommonFlags {
    std::string config_path;
    std::string bundle;
    std::string embeddings;
    std::string stopwords;
    std::string k;
    std::string p;
    std::uint32_t depth = 0;
    std::string weights;  // "coh,conn,rel,match"
    std::string auto_p_policy;
    std::uint32_t bm25_top_n = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--bundle", flags.bundle, "index bundle directory");
    cmd->add_option("--embeddings", flags.embeddings, "embeddings file (word2vec text)");
    cmd->add_option("--stopwords", flags.stopwords, "stopword list file");
    cmd->add_option("--k", flags.k, "disambiguations per term, or 'auto'");
    cmd->add_option("--p", flags.p, "fact pruning threshold, or a policy like '10^(5-k)'");
    cmd->add_option("--d", flags.depth, "candidate list depth");
    cmd->add_option("--weights", flags.weights, "signal weights 'coh,conn,rel,match'");
    cmd->add_option("--auto-p-policy", flags.auto_p_policy, "auto-p policy name");
    cmd->add_option("--bm25-top-n", flags.bm25_top_n, "keep only the top-n facts by BM25");
}

factscope::SignalWeights parse_weights(const std::string& spec) {
    std::istringstream in(spec);
    std::vector<double> values;
    std::string part;
    while (std::getline(in, part, ',')) values.push_back(std::stod(part));
    if (values.size() != 4) {
        throw std::invalid_argument("--weights expects four comma-separated values");
    }
    factscope::SignalWeights w{values[0], values[1], values[2], values[3]};
    w.validate();
    return w;
}

EngineConfig resolve_config(const CommonFlags& flags) {
    EngineConfig cfg;
    if (!flags.config_path.empty()) cfg = EngineConfig::from_file(flags.config_path);
    cfg.apply_env();
    if (!flags.bundle.empty()) cfg.bundle_dir = flags.bundle;
    if (!flags.embeddings.empty()) cfg.embeddings_path = flags.embeddings;
    if (!flags.stopwords.empty()) cfg.stopwords_path = flags.stopwords;
    if (!flags.k.empty()) {
        cfg.k = flags.k == "auto" ? 0 : static_cast<std::uint32_t>(std::stoul(flags.k));
        if (flags.k != "auto" && cfg.k < 1) throw std::invalid_argument("k must be >= 1");
    }
    if (!flags.p.empty()) {
        if (flags.p.find('^') != std::string::npos) {
            cfg.auto_p_policy = factscope::auto_p_policy_from_string(flags.p);
        } else {
            cfg.p = std::stoull(flags.p);
            cfg.auto_p_policy = factscope::AutoPPolicy::Static;
        }
    }
    if (flags.depth > 0) cfg.depth = flags.depth;
    if (!flags.weights.empty()) cfg.weights = parse_weights(flags.weights);
    if (!flags.auto_p_policy.empty()) {
        cfg.auto_p_policy = factscope::auto_p_policy_from_string(flags.auto_p_policy);
    }
    if (flags.bm25_top_n > 0) cfg.bm25_filter_n = flags.bm25_top_n;
    cfg.validate();
    return cfg;
}

QueryOptions ablation_options(bool no_coh, bool no_conn, bool no_rel, bool no_match,
                              const EngineConfig& cfg) {
    QueryOptions options;
    if (no_coh || no_conn || no_rel || no_match) {
        options.weights = cfg.weights.without(no_coh, no_conn, no_rel, no_match);
        options.mask = {!no_coh, !no_conn, !no_rel, !no_match};
    }
    return options;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"search-space reduction engine for KB question answering"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "build the index bundle from raw KB files");
    factscope::IngestOptions ingest_options;
    ingest->add_option("--items", ingest_options.items_path, "items.jsonl")->required();
    ingest->add_option("--facts", ingest_options.facts_path, "facts.jsonl");
    ingest->add_option("--triples", ingest_options.triples_path, "reified triples.tsv");
    ingest->add_option("--fact-id-prefix", ingest_options.fact_id_prefix,
                       "prefix marking fact-id dummy nodes");
    ingest->add_option("--out", ingest_options.out_dir, "output bundle directory")->required();

    // query
    auto* query = app.add_subcommand("query", "build the search space for one question");
    CommonFlags query_flags;
    add_common_flags(query, query_flags);
    std::string question;
    bool timings = false;
    bool no_coh = false, no_conn = false, no_rel = false, no_match = false;
    query->add_option("question", question, "the question")->required();
    query->add_flag("--timings", timings, "include per-stage timings in the output");
    query->add_flag("--no-coh", no_coh, "drop the coherence signal");
    query->add_flag("--no-conn", no_conn, "drop the connectivity signal");
    query->add_flag("--no-rel", no_rel, "drop the relatedness signal");
    query->add_flag("--no-match", no_match, "drop the term-match signal");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");
    CommonFlags serve_flags;
    add_common_flags(serve_cmd, serve_flags);
    std::string bind;
    int port = 0;
    serve_cmd->add_option("--bind", bind, "bind address");
    serve_cmd->add_option("--port", port, "port");

    // bench
    auto* bench = app.add_subcommand("bench", "evaluate a benchmark file");
    CommonFlags bench_flags;
    add_common_flags(bench, bench_flags);
    std::string instances_path, out_dir;
    bool b_no_coh = false, b_no_conn = false, b_no_rel = false, b_no_match = false;
    bench->add_option("--instances", instances_path, "benchmark JSONL file")->required();
    bench->add_option("--out", out_dir, "output directory for report.json/report.csv")
        ->required();
    bench->add_flag("--no-coh", b_no_coh, "drop the coherence signal");
    bench->add_flag("--no-conn", b_no_conn, "drop the connectivity signal");
    bench->add_flag("--no-rel", b_no_rel, "drop the relatedness signal");
    bench->add_flag("--no-match", b_no_match, "drop the term-match signal");

    // grid
    auto* grid = app.add_subcommand("grid", "grid search over weights/k/p");
    CommonFlags grid_flags;
    add_common_flags(grid, grid_flags);
    std::string grid_instances, grid_file, grid_out;
    grid->add_option("--instances", grid_instances, "benchmark JSONL file")->required();
    grid->add_option("--grid", grid_file, "grid JSON file")->required();
    grid->add_option("--out", grid_out, "output JSON file")->required();

    // microbench
    auto* micro = app.add_subcommand("microbench", "KB-interface latency micro-benchmark");
    CommonFlags micro_flags;
    add_common_flags(micro, micro_flags);
    std::size_t synth_items = 0, synth_facts = 0, n_lookups = 100000, n_pairs = 100000;
    micro->add_option("--synthetic-items", synth_items, "generate a synthetic KB: item count");
    micro->add_option("--synthetic-facts", synth_facts, "generate a synthetic KB: fact count");
    micro->add_option("--lookups", n_lookups, "number of neighborhood lookups");
    micro->add_option("--pairs", n_pairs, "number of distance checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            auto report = factscope::run_ingest(ingest_options);
            json j;
            j["facts"] = report.facts;
            j["malformed_lines"] = report.malformed_lines;
            j["orphan_groups"] = report.orphan_groups;
            j["diagnostics"] = report.diagnostics;
            std::cout << j.dump(2) << "\n";
            return report.orphan_groups > 0 ? 2 : 0;
        }
        if (*query) {
            auto cfg = resolve_config(query_flags);
            factscope::Engine engine(cfg);
            auto options = ablation_options(no_coh, no_conn, no_rel, no_match, cfg);
            options.include_timings = timings;
            auto space = engine.build_search_space(question, options);
            std::cout << engine.to_json(space, timings).dump(2) << "\n";
            return 0;
        }
        if (*serve_cmd) {
            auto cfg = resolve_config(serve_flags);
            if (!bind.empty()) cfg.bind_address = bind;
            if (port > 0) cfg.port = port;
            factscope::Engine engine(cfg);
            return factscope::serve(engine, cfg.bind_address, cfg.port);
        }
        if (*bench) {
            auto cfg = resolve_config(bench_flags);
            factscope::Engine engine(cfg);
            auto instances = factscope::read_benchmark_jsonl(instances_path);
            auto options = ablation_options(b_no_coh, b_no_conn, b_no_rel, b_no_match, cfg);
            auto report = factscope::run_benchmark(engine, instances, options);
            std::filesystem::create_directories(out_dir);
            factscope::write_report_json(report, out_dir + "/report.json");
            factscope::write_report_csv(report, out_dir + "/report.csv");
            std::cout << "answer presence: " << report.answer_presence << "%\n"
                      << "mean |S|: " << report.mean_space_size << "\n"
                      << "mean runtime: " << report.mean_runtime_ms << " ms\n";
            return 0;
        }
        if (*grid) {
            auto cfg = resolve_config(grid_flags);
            factscope::Engine engine(cfg);
            auto instances = factscope::read_benchmark_jsonl(grid_instances);
            std::ifstream in(grid_file);
            if (!in) throw std::runtime_error("cannot open grid file: " + grid_file);
            json jg = json::parse(in);
            std::vector<factscope::GridPoint> points;
            for (const auto& row : jg.at("points")) {
                factscope::GridPoint point;
                const auto& w = row.at("weights");
                point.weights = {w.at(0).get<double>(), w.at(1).get<double>(),
                                 w.at(2).get<double>(), w.at(3).get<double>()};
                point.k = row.at("k").is_string() ? 0 : row.at("k").get<std::uint32_t>();
                point.p = row.at("p").get<std::uint64_t>();
                points.push_back(point);
            }
            auto result = factscope::grid_search(engine, instances, points);
            json out;
            out["best"] = {{"weights",
                            {result.best.weights.coh, result.best.weights.conn,
                             result.best.weights.rel, result.best.weights.match}},
                           {"k", result.best.k},
                           {"p", result.best.p},
                           {"answer_presence_pct", result.best_report.answer_presence},
                           {"mean_space_size", result.best_report.mean_space_size}};
            json all = json::array();
            for (const auto& [point, report] : result.all) {
                all.push_back({{"weights",
                                {point.weights.coh, point.weights.conn, point.weights.rel,
                                 point.weights.match}},
                               {"k", point.k},
                               {"p", point.p},
                               {"answer_presence_pct", report.answer_presence},
                               {"mean_space_size", report.mean_space_size}});
            }
            out["points"] = std::move(all);
            std::ofstream outf(grid_out);
            outf << out.dump(2) << "\n";
            std::cout << out["best"].dump(2) << "\n";
            return 0;
        }
        if (*micro) {
            factscope::KBStore store;
            if (synth_facts > 0) {
                const std::size_t items = synth_items > 0 ? synth_items : synth_facts / 4 + 16;
                store = factscope::make_synthetic_kb(items, synth_facts, 7);
            } else {
                auto cfg = resolve_config(micro_flags);
                store = factscope::KBStore::load(cfg.bundle_dir);
            }
            auto report = factscope::micro_bench(store, n_lookups, n_pairs);
            json j;
            auto row = [](const factscope::MicroBenchRow& r) {
                return json{{"median_us", r.median_us}, {"mean_us", r.mean_us}};
            };
            j["neighborhood"] = row(report.neighborhood);
            j["distance"] = row(report.distance);
            j["naive_neighborhood"] = row(report.naive_neighborhood);
            j["naive_distance"] = row(report.naive_distance);
            std::cout << j.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
