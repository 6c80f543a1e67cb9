#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "factscope/kb_store.hpp"
#include "factscope/types.hpp"

namespace factscope {

struct RawTriple {
    std::string subject;
    std::string predicate;
    std::string object;
};

struct ItemRecord {
    std::string external_id;
    std::string label;
    std::vector<std::string> aliases;
    std::string description;
    ItemKind kind = ItemKind::Entity;
};

/// A fact over external ids, before integer encoding.
struct RawFact {
    std::string subject;
    std::string predicate;
    std::string object;
    std::vector<std::pair<std::string, std::string>> qualifiers;
};

struct IngestReport {
    std::size_t facts = 0;
    std::size_t malformed_lines = 0;
    std::size_t orphan_groups = 0;
    std::vector<std::string> diagnostics;
};

/// Bijection external_id <-> dense code, assigned in first-occurrence order.
class IntegerCoding {
  public:
    ItemCode encode(const std::string& external_id) const;
    const std::string& decode(ItemCode code) const;
    ItemCode find(const std::string& external_id) const;  // kInvalidItem if absent
    ItemCode intern(const std::string& external_id);
    std::size_t size() const { return ids_.size(); }

  private:
    std::unordered_map<std::string, ItemCode> codes_;
    std::vector<std::string> ids_;
};

/// Joins reified triple groups back into qualifier-bearing facts and drops
/// the fact-id dummy nodes. A group consists of an attachment triple
/// <s, p, fact-id>, a main completion <fact-id, p, o> sharing the
/// attachment predicate, and zero or more qualifier triples
/// <fact-id, qp, qo>. Plain triples pass through as qualifier-free facts.
/// Orphan fragments (fact-id groups missing their main triple) are rejected
/// and listed in the report.
std::vector<RawFact> aggregate_reified(const std::vector<RawTriple>& triples,
                                       const std::string& fact_id_prefix,
                                       IngestReport& report);

/// Interns every identifier of every fact. Item records come first, in file
/// order; identifiers absent from the records are auto-registered as
/// literals when they occur in object or qualifier-object position, and are
/// a hard error elsewhere.
IntegerCoding encode_items(const std::vector<ItemRecord>& records,
                           const std::vector<RawFact>& facts,
                           std::vector<KBItem>& out_items,
                           std::vector<Fact>& out_facts);

std::vector<ItemRecord> read_items_jsonl(const std::string& path);
std::vector<RawFact> read_facts_jsonl(const std::string& path, IngestReport& report);
std::vector<RawTriple> read_triples_tsv(const std::string& path, IngestReport& report);

struct IngestOptions {
    std::string items_path;
    std::string facts_path;    // JSON-lines facts, or
    std::string triples_path;  // reified TSV triples
    std::string fact_id_prefix = "fid:";
    std::string out_dir;
};

/// Full ingestion pipeline: parse, aggregate, encode, build and save the
/// index bundle. Returns the report; throws on hard errors.
IngestReport run_ingest(const IngestOptions& options);

}  // namespace factscope
