#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "factscope/types.hpp"

namespace factscope {

/// Pre-trained vectors in word2vec text format, keyed by item external id or
/// word. Norms are precomputed at load; similarities are cosine values
/// min-max normalized from [-1, 1] to [0, 1]. A missing token or zero
/// vector contributes the neutral value 0.5. Immutable after load.
class EmbeddingStore {
  public:
    EmbeddingStore() = default;
    explicit EmbeddingStore(std::size_t dimension) : dimension_(dimension) {}

    /// Parses "count dim" header then one "token v1 .. vdim" line each.
    /// Header/line-count mismatch is tolerated with a warning; a dimension
    /// mismatch is an error naming the line.
    static EmbeddingStore load(const std::string& path);

    void add(std::string token, std::vector<double> values);

    std::size_t size() const { return norms_.size(); }
    std::size_t dimension() const { return dimension_; }
    bool contains(std::string_view token) const;
    std::optional<std::span<const double>> vector(std::string_view token) const;

    /// Normalized cosine similarity of two stored tokens, in [0, 1].
    double sim(std::string_view a, std::string_view b) const;

    /// Similarity against an explicit vector (used for averaged phrase
    /// vectors); empty vector means missing and yields 0.5.
    double sim(std::string_view a, std::span<const double> vec) const;
    static double sim(std::span<const double> a, std::span<const double> b);

    /// Average of word vectors of in-vocabulary tokens; empty when none are
    /// covered.
    std::vector<double> phrase_vector(const std::vector<std::string>& tokens) const;

    std::size_t warnings() const { return warnings_; }

  private:
    std::size_t index_of(std::string_view token) const;  // npos when absent

    std::size_t dimension_ = 0;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<double> values_;  // row-major, one row per token
    std::vector<double> norms_;
    std::size_t warnings_ = 0;
};

}  // namespace factscope
