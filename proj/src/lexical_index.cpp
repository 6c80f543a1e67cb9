#include "factscope/lexical_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "factscope/text.hpp"

namespace factscope {

LexicalIndex LexicalIndex::build(const KBStore& store, Bm25Params params) {
    if (store.item_count() == 0) throw std::runtime_error("empty corpus");
    LexicalIndex index;
    index.params_ = params;
    index.doc_lengths_.assign(store.item_count(), 0);

    std::uint64_t total_length = 0;
    std::map<std::string, std::uint32_t> tf;  // per-document term frequencies
    for (const auto& item : store.items()) {
        tf.clear();
        auto add = [&](const std::string& text) {
            for (auto& tok : tokenize(text)) ++tf[tok];
        };
        add(item.label);
        for (const auto& a : item.aliases) add(a);
        add(item.description);

        std::uint32_t len = 0;
        for (const auto& [tok, count] : tf) {
            index.postings_[tok].push_back(Posting{item.code, count});
            len += count;
        }
        index.doc_lengths_[item.code] = len;
        total_length += len;
    }
    index.avg_doc_length_ =
        total_length == 0 ? 1.0 : static_cast<double>(total_length) / store.item_count();
    return index;
}

double LexicalIndex::idf(std::uint32_t df) const {
    const double n = static_cast<double>(doc_lengths_.size());
    // Robertson-Sparck Jones idf with +1 inside the log, always positive.
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

double LexicalIndex::term_doc_score(std::uint32_t tf, std::uint32_t doc_len,
                                    double idf_value) const {
    const double f = tf;
    const double norm =
        params_.k1 * (1.0 - params_.b + params_.b * doc_len / avg_doc_length_);
    return idf_value * f * (params_.k1 + 1.0) / (f + norm);
}

std::uint32_t LexicalIndex::document_frequency(std::string_view token) const {
    auto it = postings_.find(std::string(token));
    return it == postings_.end() ? 0 : static_cast<std::uint32_t>(it->second.size());
}

CandidateList LexicalIndex::candidates(std::string_view term, std::uint32_t depth) const {
    if (depth < 1) throw std::invalid_argument("candidate depth must be >= 1");
    CandidateList list;
    list.term = std::string(term);

    auto query_tokens = tokenize(term);
    // Accumulate in token order over postings sorted by document code, so
    // floating-point sums are identical across runs.
    std::map<ItemCode, double> scores;
    for (const auto& tok : query_tokens) {
        auto it = postings_.find(tok);
        if (it == postings_.end()) continue;
        const double idf_value = idf(static_cast<std::uint32_t>(it->second.size()));
        for (const auto& p : it->second) {
            scores[p.doc] += term_doc_score(p.tf, doc_lengths_[p.doc], idf_value);
        }
    }

    std::vector<CandidateEntry> entries;
    entries.reserve(scores.size());
    for (const auto& [doc, score] : scores) {
        entries.push_back(CandidateEntry{doc, score, 0});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const CandidateEntry& a, const CandidateEntry& b) {
                         if (a.lexical_score != b.lexical_score)
                             return a.lexical_score > b.lexical_score;
                         return a.item < b.item;
                     });
    if (entries.size() > depth) entries.resize(depth);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        entries[i].rank = static_cast<std::uint32_t>(i + 1);
    }
    list.entries = std::move(entries);
    return list;
}

double LexicalIndex::score(ItemCode item, const std::vector<std::string>& query_tokens) const {
    double total = 0.0;
    for (const auto& tok : query_tokens) {
        auto it = postings_.find(tok);
        if (it == postings_.end()) continue;
        const double idf_value = idf(static_cast<std::uint32_t>(it->second.size()));
        for (const auto& p : it->second) {
            if (p.doc == item) {
                total += term_doc_score(p.tf, doc_lengths_[p.doc], idf_value);
                break;
            }
        }
    }
    return total;
}

}  // namespace factscope
