#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "factscope/config.hpp"
#include "factscope/embeddings.hpp"
#include "factscope/kb_store.hpp"
#include "factscope/lexical_index.hpp"
#include "factscope/scoring.hpp"
#include "factscope/search_space.hpp"
#include "factscope/text.hpp"

namespace factscope {

/// Per-query parameter overrides on top of the engine configuration.
struct QueryOptions {
    std::optional<std::uint32_t> k;  // 0 means auto
    std::optional<std::uint64_t> p;
    std::optional<std::uint32_t> depth;
    std::optional<SignalWeights> weights;
    std::optional<AutoPPolicy> auto_p_policy;
    std::optional<std::uint32_t> bm25_filter_n;
    SignalMask mask;
    /// Pre-segmented terms that bypass question segmentation.
    std::optional<std::vector<std::string>> terms;
    bool include_timings = false;
};

/// The query pipeline over the immutable stores: segmentation, lexical
/// candidates, signal computation, per-term threshold top-k, union of
/// selected items, fact pruning and the optional BM25 fact filter.
/// Thread-safe for concurrent queries once constructed.
class Engine {
  public:
    explicit Engine(EngineConfig config);

    const KBStore& store() const { return store_; }
    const LexicalIndex& lexical_index() const { return lexical_; }
    const EmbeddingStore& embeddings() const { return embeddings_; }
    const EngineConfig& config() const { return config_; }

    /// Whitespace tokenization, stopword removal, greedy longest-match
    /// phrase detection against the item-label lexicon.
    Question segment(const std::string& raw) const;

    SearchSpace build_search_space(const std::string& raw_question,
                                   const QueryOptions& options = {}) const;

    nlohmann::json to_json(const SearchSpace& space, bool include_timings) const;

  private:
    EngineConfig config_;
    KBStore store_;
    LexicalIndex lexical_;
    EmbeddingStore embeddings_;
    StopwordSet stopwords_;

    // Normalized multi-token label/alias sequences, for phrase detection.
    std::unordered_set<std::string> phrase_lexicon_;
    std::size_t max_phrase_tokens_ = 1;
};

}  // namespace factscope
