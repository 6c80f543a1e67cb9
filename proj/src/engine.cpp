#include "factscope/engine.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace factscope {

using nlohmann::json;

namespace {

class StageClock {
  public:
    StageClock() : start_(std::chrono::steady_clock::now()) {}
    double lap_ms() {
        auto now = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(now - start_).count();
        start_ = now;
        return ms;
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin,
                        std::size_t end) {
    std::string out;
    for (std::size_t i = begin; i < end; ++i) {
        if (!out.empty()) out += ' ';
        out += tokens[i];
    }
    return out;
}

}  // namespace

Engine::Engine(EngineConfig config)
    : config_(std::move(config)),
      store_(KBStore::load(config_.bundle_dir)),
      lexical_(LexicalIndex::build(store_)),
      stopwords_(config_.stopwords_path.empty() ? StopwordSet::builtin_english()
                                                : StopwordSet::load(config_.stopwords_path)) {
    config_.validate();
    if (!config_.embeddings_path.empty()) {
        embeddings_ = EmbeddingStore::load(config_.embeddings_path);
    }

    for (const auto& item : store_.items()) {
        auto add_phrase = [&](const std::string& text) {
            auto tokens = tokenize(text);
            if (tokens.size() < 2) return;
            max_phrase_tokens_ = std::max(max_phrase_tokens_, tokens.size());
            phrase_lexicon_.insert(join_tokens(tokens, 0, tokens.size()));
        };
        add_phrase(item.label);
        for (const auto& a : item.aliases) add_phrase(a);
    }
}

Question Engine::segment(const std::string& raw) const {
    Question q;
    q.raw = raw;
    auto tokens = tokenize(raw);
    std::size_t i = 0;
    while (i < tokens.size()) {
        bool matched = false;
        const std::size_t longest = std::min(max_phrase_tokens_, tokens.size() - i);
        for (std::size_t len = longest; len >= 2; --len) {
            std::string candidate = join_tokens(tokens, i, i + len);
            if (phrase_lexicon_.count(candidate)) {
                q.terms.push_back(std::move(candidate));
                i += len;
                matched = true;
                break;
            }
        }
        if (!matched) {
            if (!stopwords_.contains(tokens[i])) q.terms.push_back(tokens[i]);
            ++i;
        }
    }
    return q;
}

SearchSpace Engine::build_search_space(const std::string& raw_question,
                                       const QueryOptions& options) const {
    const std::uint32_t depth = options.depth.value_or(config_.depth);
    const std::uint32_t k = options.k.value_or(config_.k);
    const std::uint64_t p = options.p.value_or(config_.p);
    const SignalWeights weights = options.weights.value_or(config_.weights);
    const AutoPPolicy policy = options.auto_p_policy.value_or(config_.auto_p_policy);
    const auto filter_n = options.bm25_filter_n ? options.bm25_filter_n : config_.bm25_filter_n;
    weights.validate();
    if (depth < 1) throw std::invalid_argument("d must be >= 1");

    SearchSpace space;
    StageClock clock;
    StageClock total;

    if (options.terms) {
        space.question.raw = raw_question;
        space.question.terms = *options.terms;
    } else {
        space.question = segment(raw_question);
    }
    if (space.question.terms.empty()) {
        throw std::invalid_argument("question has no terms after stopword removal");
    }
    space.timings.segment_ms = clock.lap_ms();

    std::vector<CandidateList> lists;
    lists.reserve(space.question.terms.size());
    for (const auto& term : space.question.terms) {
        lists.push_back(lexical_.candidates(term, depth));
    }
    space.timings.candidates_ms = clock.lap_ms();

    auto scored = compute_signals(store_, embeddings_, lists, weights, options.mask);
    space.timings.signals_ms = clock.lap_ms();

    std::vector<ItemCode> selected;
    std::vector<std::uint32_t> term_k(lists.size(), 0);
    for (std::size_t i = 0; i < lists.size(); ++i) {
        std::uint32_t k_used = k;
        if (k_used == 0) {  // auto
            if (lists[i].entries.empty()) {
                k_used = 1;
            } else {
                std::vector<std::uint64_t> freqs;
                freqs.reserve(lists[i].entries.size());
                for (const auto& e : lists[i].entries) {
                    freqs.push_back(store_.frequency(e.item).total);
                }
                k_used = auto_k(freqs, depth, config_.k_max);
            }
        }
        term_k[i] = k_used;
        auto result = threshold_topk(static_cast<std::uint32_t>(i), k_used, scored[i], weights);
        for (const auto& c : result.items) selected.push_back(c.item);
        space.per_term.push_back(std::move(result));
    }
    space.timings.topk_ms = clock.lap_ms();

    std::sort(selected.begin(), selected.end());
    selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
    for (std::size_t i = 0; i < space.per_term.size(); ++i) {
        const std::uint64_t term_p = auto_p(term_k[i], policy, p);
        for (const auto& c : space.per_term[i].items) {
            auto kept = prune_facts(store_, c.item, term_p);
            space.facts.insert(space.facts.end(), kept.begin(), kept.end());
        }
    }
    std::sort(space.facts.begin(), space.facts.end());
    space.facts.erase(std::unique(space.facts.begin(), space.facts.end()), space.facts.end());
    space.items_in_space = collect_space_items(store_, space.facts);
    space.timings.facts_ms = clock.lap_ms();

    if (filter_n) {
        space = factscope::bm25_filter(store_, space, *filter_n);
        space.timings.filter_ms = clock.lap_ms();
    }
    space.timings.total_ms = total.lap_ms();
    return space;
}

json Engine::to_json(const SearchSpace& space, bool include_timings) const {
    json j;
    j["question"] = space.question.raw;

    json terms = json::array();
    for (const auto& tr : space.per_term) {
        json t;
        t["term"] = space.question.terms[tr.term_index];
        t["k"] = tr.k_used;
        json items = json::array();
        for (const auto& c : tr.items) {
            const auto& item = store_.item(c.item);
            items.push_back({{"id", item.external_id},
                             {"label", item.label},
                             {"coh", c.coh},
                             {"conn", c.conn},
                             {"rel", c.rel},
                             {"match", c.match},
                             {"agg", c.agg}});
        }
        t["items"] = std::move(items);
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);

    auto item_ref = [&](ItemCode x) {
        const auto& item = store_.item(x);
        return json{{"id", item.external_id}, {"label", item.label}};
    };
    json facts = json::array();
    for (FactId fid : space.facts) {
        const Fact& f = store_.fact(fid);
        json jf;
        jf["subject"] = item_ref(f.subject);
        jf["predicate"] = item_ref(f.predicate);
        jf["object"] = item_ref(f.object);
        json quals = json::array();
        for (const auto& [qp, qo] : f.qualifiers) {
            quals.push_back({item_ref(qp), item_ref(qo)});
        }
        jf["qualifiers"] = std::move(quals);
        facts.push_back(std::move(jf));
    }
    j["facts"] = std::move(facts);

    json stats;
    stats["num_facts"] = space.facts.size();
    stats["num_items"] = space.items_in_space.size();
    if (include_timings) {
        stats["timings_ms"] = {{"segment", space.timings.segment_ms},
                               {"candidates", space.timings.candidates_ms},
                               {"signals", space.timings.signals_ms},
                               {"topk", space.timings.topk_ms},
                               {"facts", space.timings.facts_ms},
                               {"filter", space.timings.filter_ms},
                               {"total", space.timings.total_ms}};
    }
    j["stats"] = std::move(stats);
    return j;
}

}  // namespace factscope
