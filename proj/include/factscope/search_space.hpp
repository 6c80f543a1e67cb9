#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "factscope/kb_store.hpp"
#include "factscope/scoring.hpp"
#include "factscope/types.hpp"

namespace factscope {

struct StageTimings {
    double segment_ms = 0.0;
    double candidates_ms = 0.0;
    double signals_ms = 0.0;
    double topk_ms = 0.0;
    double facts_ms = 0.0;
    double filter_ms = 0.0;
    double total_ms = 0.0;
};

/// Final output of a query: per-term disambiguations, the pruned fact set,
/// and the entities/literals occurring in those facts.
struct SearchSpace {
    Question question;
    std::vector<TermResult> per_term;
    std::vector<FactId> facts;            // sorted ascending, unique
    std::vector<ItemCode> items_in_space; // entities + literals, sorted
    StageTimings timings;
};

/// Facts of one selected item admitted under the pruning threshold p.
/// Entities, types and literals: when the object plus qualifier-object
/// occurrences exceed p, only subject facts are kept (the salient role),
/// otherwise all of NF(x). Predicates: p acts as a frequency cut — a
/// predicate above p contributes nothing.
std::vector<FactId> prune_facts(const KBStore& store, ItemCode x, std::uint64_t p);

/// Recomputes the entity/literal set of a fact list.
std::vector<ItemCode> collect_space_items(const KBStore& store,
                                          const std::vector<FactId>& facts);

/// Space-joined labels: subject, predicate, object, then qualifier pairs in
/// order.
std::string verbalize_fact(const KBStore& store, const Fact& f);

/// IR-style post-filter: BM25 (k1 = 1.5, b = 0.75) over the verbalized
/// facts with the question terms as the query, keeping the top n facts.
/// Ties break by fact id ascending, so top-100 nests inside top-1000.
SearchSpace bm25_filter(const KBStore& store, const SearchSpace& space, std::uint32_t n);

}  // namespace factscope
