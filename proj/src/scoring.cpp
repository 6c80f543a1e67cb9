#include "factscope/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "factscope/text.hpp"

namespace factscope {

void SignalWeights::validate() const {
    if (coh < 0 || conn < 0 || rel < 0 || match < 0) {
        throw std::invalid_argument("signal weights must be non-negative");
    }
    const double sum = coh + conn + rel + match;
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("signal weights must sum to 1, got " + std::to_string(sum));
    }
}

SignalWeights SignalWeights::without(bool drop_coh, bool drop_conn, bool drop_rel,
                                     bool drop_match) const {
    SignalWeights w = *this;
    if (drop_coh) w.coh = 0;
    if (drop_conn) w.conn = 0;
    if (drop_rel) w.rel = 0;
    if (drop_match) w.match = 0;
    const double sum = w.coh + w.conn + w.rel + w.match;
    if (sum <= 0) throw std::invalid_argument("cannot drop all signals");
    w.coh /= sum;
    w.conn /= sum;
    w.rel /= sum;
    w.match /= sum;
    return w;
}

double agg_score(const ScoredCandidate& c, const SignalWeights& w) {
    return w.coh * c.coh + w.conn * c.conn + w.rel * c.rel + w.match * c.match;
}

std::vector<std::vector<ScoredCandidate>> compute_signals(
    const KBStore& store, const EmbeddingStore& embeddings,
    const std::vector<CandidateList>& lists, const SignalWeights& weights,
    const SignalMask& mask) {
    const std::size_t m = lists.size();

    // Item vectors, resolved once per distinct candidate occurrence.
    std::vector<std::vector<std::optional<std::span<const double>>>> item_vecs(m);
    for (std::size_t i = 0; i < m; ++i) {
        item_vecs[i].reserve(lists[i].entries.size());
        for (const auto& e : lists[i].entries) {
            item_vecs[i].push_back(embeddings.vector(store.item(e.item).external_id));
        }
    }
    // Term vectors: averaged word vectors of in-vocabulary tokens.
    std::vector<std::vector<double>> term_vecs(m);
    for (std::size_t i = 0; i < m; ++i) {
        term_vecs[i] = embeddings.phrase_vector(tokenize(lists[i].term));
    }

    auto item_sim = [&](std::size_t i, std::size_t a, std::size_t k, std::size_t b) {
        const auto& va = item_vecs[i][a];
        const auto& vb = item_vecs[k][b];
        if (!va || !vb) return 0.5;
        return EmbeddingStore::sim(*va, *vb);
    };

    std::vector<std::vector<ScoredCandidate>> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& entries = lists[i].entries;
        out[i].resize(entries.size());
        for (std::size_t a = 0; a < entries.size(); ++a) {
            ScoredCandidate& c = out[i][a];
            c.item = entries[a].item;
            c.term_index = static_cast<std::uint32_t>(i);
            if (mask.match) c.match = 1.0 / entries[a].rank;

            if (m >= 2) {
                double coh_sum = 0.0, conn_sum = 0.0, rel_sum = 0.0;
                for (std::size_t k = 0; k < m; ++k) {
                    if (k == i) continue;
                    if (mask.coh) {
                        double best = 0.0;
                        for (std::size_t b = 0; b < lists[k].entries.size(); ++b) {
                            best = std::max(best, item_sim(i, a, k, b));
                        }
                        coh_sum += best;
                    }
                    if (mask.conn) {
                        double best = 0.0;
                        for (const auto& other : lists[k].entries) {
                            best = std::max(best, connectivity_value(
                                                      store.distance(c.item, other.item)));
                            if (best == 1.0) break;
                        }
                        conn_sum += best;
                    }
                    if (mask.rel) {
                        if (!item_vecs[i][a] || term_vecs[k].empty()) {
                            rel_sum += 0.5;
                        } else {
                            rel_sum += EmbeddingStore::sim(*item_vecs[i][a], term_vecs[k]);
                        }
                    }
                }
                const double denom = static_cast<double>(m - 1);
                c.coh = coh_sum / denom;
                c.conn = conn_sum / denom;
                c.rel = rel_sum / denom;
            }
            c.agg = agg_score(c, weights);
        }
    }
    return out;
}

namespace {

// Sorted-access order of one signal list: score desc, item code asc.
std::vector<std::uint32_t> sorted_order(const std::vector<ScoredCandidate>& scored,
                                        double ScoredCandidate::* signal) {
    std::vector<std::uint32_t> order(scored.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scored[a].*signal != scored[b].*signal) return scored[a].*signal > scored[b].*signal;
        return scored[a].item < scored[b].item;
    });
    return order;
}

bool agg_less(const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.agg != b.agg) return a.agg > b.agg;
    return a.item < b.item;
}

}  // namespace

TermResult threshold_topk(std::uint32_t term_index, std::uint32_t k,
                          const std::vector<ScoredCandidate>& scored,
                          const SignalWeights& weights, TaStats* stats) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    TermResult result;
    result.term_index = term_index;
    result.k_used = k;
    const std::size_t n = scored.size();
    if (n == 0) return result;

    const std::array<std::vector<std::uint32_t>, 4> orders = {
        sorted_order(scored, &ScoredCandidate::coh),
        sorted_order(scored, &ScoredCandidate::conn),
        sorted_order(scored, &ScoredCandidate::rel),
        sorted_order(scored, &ScoredCandidate::match),
    };
    const std::array<double, 4> w = {weights.coh, weights.conn, weights.rel, weights.match};
    const std::array<double ScoredCandidate::*, 4> fields = {
        &ScoredCandidate::coh, &ScoredCandidate::conn, &ScoredCandidate::rel,
        &ScoredCandidate::match};

    std::vector<bool> seen(n, false);
    std::vector<ScoredCandidate> top;  // kept sorted by (agg desc, code asc), size <= k

    for (std::size_t row = 0; row < n; ++row) {
        double delta = 0.0;
        for (std::size_t s = 0; s < 4; ++s) {
            const std::uint32_t idx = orders[s][row];
            if (stats) ++stats->sorted_accesses;
            if (!seen[idx]) {
                seen[idx] = true;
                // Random access: all four scores of this item come from the
                // precomputed cache; the aggregate is already attached.
                const ScoredCandidate& c = scored[idx];
                auto pos = std::lower_bound(top.begin(), top.end(), c, agg_less);
                top.insert(pos, c);
                if (top.size() > k) top.pop_back();
            }
            delta += w[s] * (scored[orders[s][row]].*(fields[s]));
        }
        if (stats) ++stats->rows_consumed;
        // Unseen items score at most delta in every remaining row. Strict
        // comparison keeps exact-tie instances scanning to the end, so the
        // output matches the full-scan order even when ties sit on the
        // threshold.
        if (top.size() >= k && top[k - 1].agg > delta) break;
    }

    result.items = std::move(top);
    return result;
}

double shannon_entropy(const std::vector<std::uint64_t>& frequencies) {
    std::uint64_t total = 0;
    for (auto f : frequencies) total += f;
    if (total == 0) {
        // All-zero profile: treated as uniform over the candidates.
        return frequencies.empty() ? 0.0 : std::log2(static_cast<double>(frequencies.size()));
    }
    double ent = 0.0;
    for (auto f : frequencies) {
        if (f == 0) continue;
        const double p = static_cast<double>(f) / static_cast<double>(total);
        ent -= p * std::log2(p);
    }
    return ent;
}

std::uint32_t auto_k(const std::vector<std::uint64_t>& fact_frequencies,
                     std::uint32_t depth, std::uint32_t k_max) {
    if (fact_frequencies.empty()) throw std::invalid_argument("auto_k on empty list");
    const double ent = shannon_entropy(fact_frequencies);
    auto k = static_cast<std::uint32_t>(std::floor(ent)) + 1;
    const std::uint32_t cap = std::min(depth, k_max);
    return std::clamp<std::uint32_t>(k, 1, cap < 1 ? 1 : cap);
}

AutoPPolicy auto_p_policy_from_string(const std::string& name) {
    if (name == "static") return AutoPPolicy::Static;
    if (name == "10^(5-k)") return AutoPPolicy::Pow5MinusK;
    if (name == "10^(5-0.5k)") return AutoPPolicy::Pow5MinusHalfK;
    if (name == "10^(4-0.5k)") return AutoPPolicy::Pow4MinusHalfK;
    throw std::invalid_argument("unknown auto-p policy: " + name);
}

const char* to_string(AutoPPolicy policy) {
    switch (policy) {
        case AutoPPolicy::Static: return "static";
        case AutoPPolicy::Pow5MinusK: return "10^(5-k)";
        case AutoPPolicy::Pow5MinusHalfK: return "10^(5-0.5k)";
        case AutoPPolicy::Pow4MinusHalfK: return "10^(4-0.5k)";
    }
    return "static";
}

std::uint64_t auto_p(std::uint32_t k, AutoPPolicy policy, std::uint64_t static_p) {
    double exponent = 0.0;
    switch (policy) {
        case AutoPPolicy::Static: return static_p;
        case AutoPPolicy::Pow5MinusK: exponent = 5.0 - k; break;
        case AutoPPolicy::Pow5MinusHalfK: exponent = 5.0 - 0.5 * k; break;
        case AutoPPolicy::Pow4MinusHalfK: exponent = 4.0 - 0.5 * k; break;
    }
    if (exponent < 0) return 0;
    // Integer exponents are computed exactly; only half-exponents go
    // through pow and floor.
    if (exponent == std::floor(exponent)) {
        std::uint64_t p = 1;
        for (int i = 0; i < static_cast<int>(exponent); ++i) p *= 10;
        return p;
    }
    return static_cast<std::uint64_t>(std::floor(std::pow(10.0, exponent)));
}

}  // namespace factscope
