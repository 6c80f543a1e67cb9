#pragma once

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "factscope/engine.hpp"
#include "factscope/ingest.hpp"
#include "factscope/kb_store.hpp"

namespace testutil {

inline std::string fixture_dir() {
#ifdef FACTSCOPE_FIXTURE_DIR
    return FACTSCOPE_FIXTURE_DIR;
#else
    const char* env = std::getenv("FACTSCOPE_FIXTURE_DIR");
    return env ? env : "tests/fixtures";
#endif
}

inline std::string worldcup_dir() { return fixture_dir() + "/worldcup"; }

/// Ingests the fixture KB into a per-process temp bundle, once.
inline std::string worldcup_bundle_dir() {
    static std::string dir = [] {
        auto path = std::filesystem::temp_directory_path() /
                    ("factscope_fixture_" + std::to_string(::getpid()));
        factscope::IngestOptions options;
        options.items_path = worldcup_dir() + "/items.jsonl";
        options.facts_path = worldcup_dir() + "/facts.jsonl";
        options.out_dir = path.string();
        factscope::run_ingest(options);
        return path.string();
    }();
    return dir;
}

inline factscope::EngineConfig worldcup_config() {
    factscope::EngineConfig cfg;
    cfg.bundle_dir = worldcup_bundle_dir();
    cfg.embeddings_path = worldcup_dir() + "/embeddings.txt";
    return cfg;
}

inline const factscope::Engine& worldcup_engine() {
    static factscope::Engine engine{worldcup_config()};
    return engine;
}

// --- independent oracles -------------------------------------------------

/// NF by full scan over the fact table.
inline std::vector<factscope::FactId> naive_nf(const factscope::KBStore& store,
                                               factscope::ItemCode x) {
    std::vector<factscope::FactId> out;
    for (const auto& f : store.facts()) {
        if (f.contains(x)) out.push_back(f.id);
    }
    return out;
}

/// NI by double loop over facts and members.
inline std::vector<factscope::ItemCode> naive_ni(const factscope::KBStore& store,
                                                 factscope::ItemCode x) {
    std::vector<factscope::ItemCode> out;
    for (const auto& f : store.facts()) {
        if (!f.contains(x)) continue;
        auto push = [&](factscope::ItemCode y) {
            if (y != x) out.push_back(y);
        };
        push(f.subject);
        push(f.predicate);
        push(f.object);
        for (const auto& [qp, qo] : f.qualifiers) {
            push(qp);
            push(qo);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// BFS hop count on the fact-co-occurrence graph, clamped at 3 (= far).
inline int bfs_hops(const factscope::KBStore& store, factscope::ItemCode from,
                    factscope::ItemCode to, int max_hops = 2) {
    if (from == to) return 1;  // self-distance convention: hop1
    std::vector<int> dist(store.item_count(), -1);
    std::deque<factscope::ItemCode> queue{from};
    dist[from] = 0;
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        if (dist[cur] >= max_hops) continue;
        for (auto next : naive_ni(store, cur)) {
            if (dist[next] != -1) continue;
            dist[next] = dist[cur] + 1;
            if (next == to) return dist[next];
            queue.push_back(next);
        }
    }
    return max_hops + 1;
}

/// Small random KB with qualifier-bearing facts for oracle comparisons.
inline factscope::KBStore random_kb(std::size_t n_items, std::size_t n_facts,
                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<factscope::KBItem> items(n_items);
    for (std::size_t i = 0; i < n_items; ++i) {
        items[i].code = static_cast<factscope::ItemCode>(i);
        items[i].external_id = "n" + std::to_string(i);
        items[i].label = "node " + std::to_string(i);
        items[i].kind = (i % 7 == 0) ? factscope::ItemKind::Predicate
                                     : factscope::ItemKind::Entity;
    }
    std::uniform_int_distribution<factscope::ItemCode> any(
        0, static_cast<factscope::ItemCode>(n_items - 1));
    std::uniform_int_distribution<int> quals(0, 2);
    std::vector<factscope::Fact> facts(n_facts);
    for (auto& f : facts) {
        f.subject = any(rng);
        f.predicate = any(rng);
        f.object = any(rng);
        int q = quals(rng);
        for (int j = 0; j < q; ++j) f.qualifiers.emplace_back(any(rng), any(rng));
    }
    return factscope::KBStore::build(std::move(items), std::move(facts));
}

}  // namespace testutil
