#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "factscope/embeddings.hpp"
#include "factscope/kb_store.hpp"
#include "factscope/lexical_index.hpp"
#include "factscope/types.hpp"

namespace factscope {

struct Question {
    std::string raw;
    std::vector<std::string> terms;  // keywords or phrases, stopwords removed
};

struct SignalWeights {
    double coh = 0.1;
    double conn = 0.3;
    double rel = 0.2;
    double match = 0.4;

    /// Throws unless all weights are >= 0 and sum to 1 within 1e-9.
    void validate() const;

    /// Zeroes the named signals and renormalizes the rest.
    SignalWeights without(bool drop_coh, bool drop_conn, bool drop_rel,
                          bool drop_match) const;
};

struct ScoredCandidate {
    ItemCode item = kInvalidItem;
    std::uint32_t term_index = 0;
    double coh = 0.0;
    double conn = 0.0;
    double rel = 0.0;
    double match = 0.0;
    double agg = 0.0;
};

struct TermResult {
    std::uint32_t term_index = 0;
    std::uint32_t k_used = 1;
    std::vector<ScoredCandidate> items;  // agg desc, item code asc
};

double agg_score(const ScoredCandidate& c, const SignalWeights& w);

/// Which signals to actually compute; skipped signals stay 0. Used by the
/// ablation switches, which must coincide with zeroed weights.
struct SignalMask {
    bool coh = true;
    bool conn = true;
    bool rel = true;
    bool match = true;
};

/// Computes the four relevance signals for every candidate of every term.
/// The O(m^2 d^2) pairwise similarity and distance evaluations happen here,
/// once, into the returned per-term score vectors; the threshold algorithm
/// reads them by random access afterwards.
///
/// Coherence and connectivity of a candidate are, per other term list, the
/// best pairwise value against any candidate in that list, averaged over
/// the m-1 other lists. Relatedness averages embedding similarity to the
/// other question terms. Term match is the reciprocal lexical rank. With a
/// single-term question the three contextual signals are 0 and ranking
/// reduces to lexical rank.
std::vector<std::vector<ScoredCandidate>> compute_signals(
    const KBStore& store, const EmbeddingStore& embeddings,
    const std::vector<CandidateList>& lists, const SignalWeights& weights,
    const SignalMask& mask = {});

struct TaStats {
    std::size_t sorted_accesses = 0;
    std::size_t rows_consumed = 0;
};

/// Threshold algorithm over the four score-ordered lists of one term.
/// Performs sorted access in parallel on the coh/conn/rel/match orders,
/// fetches the remaining scores of each newly seen item by random access,
/// and stops once the k-th best aggregate exceeds the threshold delta built
/// from the last scores seen under sorted access. Returns exactly the
/// full-scan top-k under the (agg desc, item code asc) tie-break; boundary
/// ties with delta keep scanning rather than terminate, so tied instances
/// stay oracle-exact.
TermResult threshold_topk(std::uint32_t term_index, std::uint32_t k,
                          const std::vector<ScoredCandidate>& scored,
                          const SignalWeights& weights, TaStats* stats = nullptr);

/// Entropy-driven per-term k: Shannon entropy (base 2) of the normalized
/// fact-count distribution over the candidates, floored plus one, clamped
/// to [1, min(depth, k_max)]. All-zero frequencies count as uniform.
std::uint32_t auto_k(const std::vector<std::uint64_t>& fact_frequencies,
                     std::uint32_t depth, std::uint32_t k_max);

double shannon_entropy(const std::vector<std::uint64_t>& frequencies);

enum class AutoPPolicy {
    Static,          // p passes through unchanged
    Pow5MinusK,      // 10^(5-k)
    Pow5MinusHalfK,  // 10^(5-0.5k)
    Pow4MinusHalfK,  // 10^(4-0.5k)
};

AutoPPolicy auto_p_policy_from_string(const std::string& name);
const char* to_string(AutoPPolicy policy);

std::uint64_t auto_p(std::uint32_t k, AutoPPolicy policy, std::uint64_t static_p);

}  // namespace factscope
