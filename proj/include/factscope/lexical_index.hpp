#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factscope/kb_store.hpp"
#include "factscope/types.hpp"

namespace factscope {

struct CandidateEntry {
    ItemCode item = kInvalidItem;
    double lexical_score = 0.0;
    std::uint32_t rank = 0;  // 1-based
};

struct CandidateList {
    std::string term;
    std::vector<CandidateEntry> entries;  // score desc, rank contiguous from 1
};

struct Bm25Params {
    double k1 = 1.5;
    double b = 0.75;
};

/// Inverted index over item documents (label + aliases + description,
/// tokenized). Queries are scored with BM25 and accumulated in fixed item
/// order, so rankings are deterministic across runs. Ties break by item
/// code ascending. Immutable after build.
class LexicalIndex {
  public:
    static LexicalIndex build(const KBStore& store, Bm25Params params = {});

    /// Depth-d candidate list for one question term (phrases score as
    /// bag-of-words). Unknown terms yield an empty list; d < 1 throws.
    CandidateList candidates(std::string_view term, std::uint32_t depth) const;

    /// BM25 score of one document against a tokenized query; exposed for
    /// oracle tests.
    double score(ItemCode item, const std::vector<std::string>& query_tokens) const;

    std::uint32_t document_frequency(std::string_view token) const;
    std::size_t document_count() const { return doc_lengths_.size(); }
    double average_document_length() const { return avg_doc_length_; }

  private:
    struct Posting {
        ItemCode doc;
        std::uint32_t tf;
    };

    double idf(std::uint32_t df) const;
    double term_doc_score(std::uint32_t tf, std::uint32_t doc_len, double idf_value) const;

    Bm25Params params_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::vector<std::uint32_t> doc_lengths_;
    double avg_doc_length_ = 0.0;
};

}  // namespace factscope
