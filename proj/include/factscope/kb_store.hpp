#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "factscope/types.hpp"

namespace factscope {

/// Read-only, memory-resident fact-centric KB. Two indexes are kept:
/// NF maps an item to every fact it occurs in (any position, qualifiers
/// included), NI maps an item to its sorted, deduplicated co-occurring
/// items. Both are CSR arrays over dense item codes, so a lookup is a
/// slice into a flat array regardless of KB size. Immutable after
/// construction; safe for concurrent readers.
class KBStore {
  public:
    KBStore() = default;

    /// Builds NF/NI and role counts from scratch.
    static KBStore build(std::vector<KBItem> items, std::vector<Fact> facts);

    /// Writes the versioned index bundle (item metadata, fact table,
    /// NF/NI arrays) into a directory.
    void save(const std::string& dir) const;

    /// Loads a bundle written by save(); rejects unknown format versions.
    static KBStore load(const std::string& dir);

    std::size_t item_count() const { return items_.size(); }
    std::size_t fact_count() const { return facts_.size(); }

    const KBItem& item(ItemCode x) const;
    const Fact& fact(FactId f) const;
    const std::vector<Fact>& facts() const { return facts_; }
    const std::vector<KBItem>& items() const { return items_; }

    /// Code of an external id, or kInvalidItem when absent.
    ItemCode find(const std::string& external_id) const;

    /// NF(x): ids of all facts containing x.
    std::span<const FactId> neighborhood(ItemCode x) const;

    /// NI(x): sorted codes of all items co-occurring with x in some fact.
    std::span<const ItemCode> neighbors(ItemCode x) const;

    /// Fact-centric hop distance, computed by set-overlap tests on NI:
    /// hop1 iff x1 ∈ NI(x2), hop2 iff NI(x1) and NI(x2) intersect,
    /// far otherwise. distance(x, x) is hop1 by convention.
    HopDistance distance(ItemCode x1, ItemCode x2) const;

    FrequencyProfile frequency(ItemCode x) const;

    /// Facts of NF(x) where x is the subject.
    std::vector<FactId> subject_facts(ItemCode x) const;

  private:
    void check_code(ItemCode x) const;
    void build_indexes();

    std::vector<KBItem> items_;
    std::vector<Fact> facts_;
    std::unordered_map<std::string, ItemCode> by_external_id_;

    // CSR layouts: offsets have item_count()+1 entries.
    std::vector<std::uint64_t> nf_offsets_;
    std::vector<FactId> nf_data_;
    std::vector<std::uint64_t> ni_offsets_;
    std::vector<ItemCode> ni_data_;
    std::vector<FrequencyProfile> freq_;
};

}  // namespace factscope
