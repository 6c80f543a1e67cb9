#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "factscope/engine.hpp"
#include "factscope/search_space.hpp"

namespace factscope {

struct BenchmarkInstance {
    std::string question;
    std::vector<std::string> gold_answers;  // item external ids or literal strings
};

struct QuestionResult {
    std::string question;
    bool answer_present = false;
    std::size_t space_size = 0;  // entities + literals in the space
    std::size_t fact_count = 0;
    double elapsed_ms = 0.0;
};

struct EvalReport {
    std::vector<QuestionResult> rows;
    double answer_presence = 0.0;  // percentage
    double mean_space_size = 0.0;
    double mean_runtime_ms = 0.0;

    void finalize();  // recomputes aggregates from rows
};

/// True iff any gold answer occurs in some fact of the space, matched by
/// item external id or by normalized literal form.
bool answer_presence(const KBStore& store, const SearchSpace& space,
                     const std::vector<std::string>& gold);

std::vector<BenchmarkInstance> read_benchmark_jsonl(const std::string& path);

EvalReport run_benchmark(const Engine& engine,
                         const std::vector<BenchmarkInstance>& instances,
                         const QueryOptions& options = {});

void write_report_json(const EvalReport& report, const std::string& path);
void write_report_csv(const EvalReport& report, const std::string& path);

struct GridPoint {
    SignalWeights weights;
    std::uint32_t k = 0;  // 0 = auto
    std::uint64_t p = 1000;
};

struct GridResult {
    GridPoint best;
    EvalReport best_report;
    std::vector<std::pair<GridPoint, EvalReport>> all;
};

/// Exhaustive evaluation of every grid point; the winner has the highest
/// answer presence, ties broken by smaller mean search-space size.
GridResult grid_search(const Engine& engine,
                       const std::vector<BenchmarkInstance>& instances,
                       const std::vector<GridPoint>& grid);

struct MicroBenchRow {
    std::string name;
    double median_us = 0.0;
    double mean_us = 0.0;
};

struct MicroBenchReport {
    MicroBenchRow neighborhood;
    MicroBenchRow distance;
    MicroBenchRow naive_neighborhood;
    MicroBenchRow naive_distance;
};

/// Latency of indexed neighborhood lookups and distance checks against
/// naive full-scan baselines, over random items/pairs of the given store.
MicroBenchReport micro_bench(const KBStore& store, std::size_t n_lookups,
                             std::size_t n_pairs, std::size_t naive_samples = 200,
                             std::uint64_t seed = 42);

/// Synthetic KB generator for scaling experiments.
KBStore make_synthetic_kb(std::size_t n_items, std::size_t n_facts, std::uint64_t seed);

}  // namespace factscope
