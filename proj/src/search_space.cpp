#include "factscope/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "factscope/text.hpp"

namespace factscope {

std::vector<FactId> prune_facts(const KBStore& store, ItemCode x, std::uint64_t p) {
    const auto& item = store.item(x);
    const auto profile = store.frequency(x);
    if (item.kind == ItemKind::Predicate) {
        if (profile.total > p) return {};
        auto nf = store.neighborhood(x);
        return {nf.begin(), nf.end()};
    }
    const std::uint64_t non_subject =
        static_cast<std::uint64_t>(profile.object_count) + profile.qualifier_object_count;
    if (non_subject > p) return store.subject_facts(x);
    auto nf = store.neighborhood(x);
    return {nf.begin(), nf.end()};
}

std::vector<ItemCode> collect_space_items(const KBStore& store,
                                          const std::vector<FactId>& facts) {
    std::vector<ItemCode> items;
    auto consider = [&](ItemCode x) {
        const auto kind = store.item(x).kind;
        if (kind == ItemKind::Entity || kind == ItemKind::Literal) items.push_back(x);
    };
    for (FactId fid : facts) {
        const Fact& f = store.fact(fid);
        consider(f.subject);
        consider(f.object);
        for (const auto& [qp, qo] : f.qualifiers) consider(qo);
    }
    std::sort(items.begin(), items.end());
    items.erase(std::unique(items.begin(), items.end()), items.end());
    return items;
}

std::string verbalize_fact(const KBStore& store, const Fact& f) {
    std::string out = store.item(f.subject).label;
    out += ' ';
    out += store.item(f.predicate).label;
    out += ' ';
    out += store.item(f.object).label;
    for (const auto& [qp, qo] : f.qualifiers) {
        out += ' ';
        out += store.item(qp).label;
        out += ' ';
        out += store.item(qo).label;
    }
    return out;
}

SearchSpace bm25_filter(const KBStore& store, const SearchSpace& space, std::uint32_t n) {
    if (n < 1) throw std::invalid_argument("bm25 filter size must be >= 1");
    if (space.facts.size() <= n) return space;

    const double k1 = 1.5;
    const double b = 0.75;
    const std::size_t doc_count = space.facts.size();

    // Per-fact token counts over verbalizations, plus corpus statistics.
    std::vector<std::map<std::string, std::uint32_t>> tf(doc_count);
    std::vector<std::uint32_t> lengths(doc_count, 0);
    std::map<std::string, std::uint32_t> df;
    std::uint64_t total_length = 0;
    for (std::size_t i = 0; i < doc_count; ++i) {
        auto tokens = tokenize(verbalize_fact(store, store.fact(space.facts[i])));
        for (const auto& t : tokens) ++tf[i][t];
        lengths[i] = static_cast<std::uint32_t>(tokens.size());
        total_length += tokens.size();
        for (const auto& [t, c] : tf[i]) ++df[t];
    }
    const double avgdl =
        total_length == 0 ? 1.0 : static_cast<double>(total_length) / doc_count;

    std::vector<std::string> query;
    for (const auto& term : space.question.terms) {
        for (auto& t : tokenize(term)) query.push_back(std::move(t));
    }

    std::vector<std::pair<double, FactId>> ranked(doc_count);
    for (std::size_t i = 0; i < doc_count; ++i) {
        double score = 0.0;
        for (const auto& t : query) {
            auto it = tf[i].find(t);
            if (it == tf[i].end()) continue;
            const double n_docs = static_cast<double>(doc_count);
            const double dfreq = df[t];
            const double idf = std::log((n_docs - dfreq + 0.5) / (dfreq + 0.5) + 1.0);
            const double f = it->second;
            score += idf * f * (k1 + 1.0) / (f + k1 * (1.0 - b + b * lengths[i] / avgdl));
        }
        ranked[i] = {score, space.facts[i]};
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    SearchSpace filtered = space;
    filtered.facts.clear();
    for (std::size_t i = 0; i < n && i < ranked.size(); ++i) {
        filtered.facts.push_back(ranked[i].second);
    }
    std::sort(filtered.facts.begin(), filtered.facts.end());
    filtered.items_in_space = collect_space_items(store, filtered.facts);
    return filtered;
}

}  // namespace factscope
