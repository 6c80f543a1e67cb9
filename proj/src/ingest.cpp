#include "factscope/ingest.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace factscope {

using nlohmann::json;

ItemCode IntegerCoding::encode(const std::string& external_id) const {
    auto it = codes_.find(external_id);
    if (it == codes_.end()) {
        throw std::runtime_error("identifier not in coding: " + external_id);
    }
    return it->second;
}

const std::string& IntegerCoding::decode(ItemCode code) const {
    if (code >= ids_.size()) {
        throw std::out_of_range("code not in coding: " + std::to_string(code));
    }
    return ids_[code];
}

ItemCode IntegerCoding::find(const std::string& external_id) const {
    auto it = codes_.find(external_id);
    return it == codes_.end() ? kInvalidItem : it->second;
}

ItemCode IntegerCoding::intern(const std::string& external_id) {
    auto it = codes_.find(external_id);
    if (it != codes_.end()) return it->second;
    ItemCode code = static_cast<ItemCode>(ids_.size());
    codes_.emplace(external_id, code);
    ids_.push_back(external_id);
    return code;
}

std::vector<RawFact> aggregate_reified(const std::vector<RawTriple>& triples,
                                       const std::string& fact_id_prefix,
                                       IngestReport& report) {
    auto is_fact_id = [&](const std::string& s) {
        return !fact_id_prefix.empty() && s.rfind(fact_id_prefix, 0) == 0;
    };

    struct Group {
        bool has_attachment = false;
        std::string subject;
        std::string predicate;
        std::vector<std::pair<std::string, std::string>> body;  // fid-subject triples, input order
    };
    // std::map keeps group emission deterministic regardless of input order.
    std::map<std::string, Group> groups;
    std::vector<RawFact> facts;
    std::vector<std::string> group_order;

    for (const auto& t : triples) {
        if (t.subject.empty() || t.predicate.empty() || t.object.empty()) {
            ++report.malformed_lines;
            continue;
        }
        if (is_fact_id(t.object)) {
            auto& g = groups[t.object];
            if (!g.has_attachment) {
                g.has_attachment = true;
                g.subject = t.subject;
                g.predicate = t.predicate;
            } else {
                report.diagnostics.push_back("duplicate main triple for fact-id " + t.object);
                ++report.malformed_lines;
            }
        } else if (is_fact_id(t.subject)) {
            groups[t.subject].body.emplace_back(t.predicate, t.object);
        } else {
            facts.push_back(RawFact{t.subject, t.predicate, t.object, {}});
        }
    }

    for (auto& [fid, g] : groups) {
        if (!g.has_attachment) {
            ++report.orphan_groups;
            report.diagnostics.push_back("orphan fragment: no main triple for fact-id " + fid);
            continue;
        }
        // The main completion repeats the attachment predicate; the first
        // such body triple closes the main s/p/o, the rest are qualifiers.
        RawFact f;
        f.subject = g.subject;
        f.predicate = g.predicate;
        bool closed = false;
        for (auto& [p, o] : g.body) {
            if (!closed && p == g.predicate) {
                f.object = o;
                closed = true;
            } else {
                f.qualifiers.emplace_back(p, o);
            }
        }
        if (!closed) {
            ++report.orphan_groups;
            report.diagnostics.push_back("orphan fragment: no main-triple completion for fact-id " +
                                         fid);
            continue;
        }
        facts.push_back(std::move(f));
    }
    report.facts = facts.size();
    return facts;
}

IntegerCoding encode_items(const std::vector<ItemRecord>& records,
                           const std::vector<RawFact>& facts,
                           std::vector<KBItem>& out_items,
                           std::vector<Fact>& out_facts) {
    IntegerCoding coding;
    out_items.clear();
    out_facts.clear();

    for (const auto& r : records) {
        if (coding.find(r.external_id) != kInvalidItem) {
            throw std::runtime_error("duplicate item record: " + r.external_id);
        }
        ItemCode code = coding.intern(r.external_id);
        KBItem item;
        item.code = code;
        item.external_id = r.external_id;
        item.label = r.label;
        item.aliases = r.aliases;
        item.description = r.description;
        item.kind = r.kind;
        out_items.push_back(std::move(item));
    }

    auto resolve = [&](const std::string& id, bool literal_position) -> ItemCode {
        ItemCode code = coding.find(id);
        if (code != kInvalidItem) return code;
        if (!literal_position) {
            throw std::runtime_error("unknown identifier in fact: " + id);
        }
        code = coding.intern(id);
        KBItem item;
        item.code = code;
        item.external_id = id;
        item.label = id;  // literals carry their lexical form as label
        item.kind = ItemKind::Literal;
        out_items.push_back(std::move(item));
        return code;
    };

    for (const auto& rf : facts) {
        Fact f;
        f.id = static_cast<FactId>(out_facts.size());
        f.subject = resolve(rf.subject, false);
        f.predicate = resolve(rf.predicate, false);
        f.object = resolve(rf.object, true);
        for (const auto& [qp, qo] : rf.qualifiers) {
            f.qualifiers.emplace_back(resolve(qp, false), resolve(qo, true));
        }
        out_facts.push_back(std::move(f));
    }
    return coding;
}

std::vector<ItemRecord> read_items_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open items file: " + path);
    std::vector<ItemRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        ItemRecord r;
        r.external_id = j.at("id").get<std::string>();
        r.label = j.value("label", std::string{});
        r.aliases = j.value("aliases", std::vector<std::string>{});
        r.description = j.value("description", std::string{});
        r.kind = item_kind_from_string(j.value("kind", std::string{"entity"}));
        if (r.kind != ItemKind::Literal && r.label.empty()) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": non-literal item without label: " + r.external_id);
        }
        if (r.kind == ItemKind::Literal && r.label.empty()) r.label = r.external_id;
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<RawFact> read_facts_jsonl(const std::string& path, IngestReport& report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open facts file: " + path);
    std::vector<RawFact> facts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            ++report.malformed_lines;
            continue;
        }
        RawFact f;
        f.subject = j.value("s", std::string{});
        f.predicate = j.value("p", std::string{});
        f.object = j.value("o", std::string{});
        if (f.subject.empty() || f.predicate.empty() || f.object.empty()) {
            ++report.malformed_lines;
            continue;
        }
        if (j.contains("qualifiers")) {
            for (const auto& q : j["qualifiers"]) {
                f.qualifiers.emplace_back(q.at(0).get<std::string>(),
                                          q.at(1).get<std::string>());
            }
        }
        facts.push_back(std::move(f));
    }
    report.facts = facts.size();
    return facts;
}

std::vector<RawTriple> read_triples_tsv(const std::string& path, IngestReport& report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open triples file: " + path);
    std::vector<RawTriple> triples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            ++report.malformed_lines;
            continue;
        }
        triples.push_back(RawTriple{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1),
                                    line.substr(t2 + 1)});
    }
    return triples;
}

IngestReport run_ingest(const IngestOptions& options) {
    IngestReport report;
    auto records = read_items_jsonl(options.items_path);

    std::vector<RawFact> raw_facts;
    if (!options.facts_path.empty()) {
        raw_facts = read_facts_jsonl(options.facts_path, report);
    } else if (!options.triples_path.empty()) {
        auto triples = read_triples_tsv(options.triples_path, report);
        raw_facts = aggregate_reified(triples, options.fact_id_prefix, report);
    } else {
        throw std::runtime_error("ingest requires --facts or --triples");
    }

    std::vector<KBItem> items;
    std::vector<Fact> facts;
    encode_items(records, raw_facts, items, facts);
    auto store = KBStore::build(std::move(items), std::move(facts));
    store.save(options.out_dir);
    return report;
}

}  // namespace factscope
