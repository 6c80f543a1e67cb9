#include "factscope/kb_store.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace factscope {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

void write_u32s(std::ofstream& out, const std::vector<std::uint32_t>& v) {
    std::uint64_t n = v.size();
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(std::uint32_t)));
}

std::vector<std::uint32_t> read_u32s(std::ifstream& in, const std::string& what) {
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    if (!in) throw std::runtime_error("truncated bundle section: " + what);
    std::vector<std::uint32_t> v(n);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(n * sizeof(std::uint32_t)));
    if (!in) throw std::runtime_error("truncated bundle section: " + what);
    return v;
}

}  // namespace

const char* to_string(ItemKind kind) {
    switch (kind) {
        case ItemKind::Entity: return "entity";
        case ItemKind::Predicate: return "predicate";
        case ItemKind::Type: return "type";
        case ItemKind::Literal: return "literal";
    }
    return "entity";
}

ItemKind item_kind_from_string(const std::string& s) {
    if (s == "entity") return ItemKind::Entity;
    if (s == "predicate") return ItemKind::Predicate;
    if (s == "type") return ItemKind::Type;
    if (s == "literal") return ItemKind::Literal;
    throw std::runtime_error("unknown item kind: " + s);
}

KBStore KBStore::build(std::vector<KBItem> items, std::vector<Fact> facts) {
    KBStore store;
    store.items_ = std::move(items);
    store.facts_ = std::move(facts);
    for (std::size_t i = 0; i < store.facts_.size(); ++i) {
        store.facts_[i].id = static_cast<FactId>(i);
    }
    store.build_indexes();
    return store;
}

void KBStore::build_indexes() {
    const std::size_t n = items_.size();
    by_external_id_.reserve(n);
    for (const auto& it : items_) {
        if (it.code >= n) throw std::runtime_error("item code out of range: " + it.external_id);
        by_external_id_.emplace(it.external_id, it.code);
    }

    freq_.assign(n, FrequencyProfile{});
    std::vector<std::uint32_t> nf_counts(n, 0);
    auto each_member = [](const Fact& f, auto&& fn) {
        fn(f.subject);
        fn(f.predicate);
        fn(f.object);
        for (const auto& [qp, qo] : f.qualifiers) {
            fn(qp);
            fn(qo);
        }
    };

    std::vector<ItemCode> members;
    for (const auto& f : facts_) {
        members.clear();
        each_member(f, [&](ItemCode x) {
            if (x >= n) throw std::runtime_error("fact references unknown code");
            members.push_back(x);
        });
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (ItemCode x : members) ++nf_counts[x];

        ++freq_[f.subject].subject_count;
        ++freq_[f.object].object_count;
        for (const auto& [qp, qo] : f.qualifiers) ++freq_[qo].qualifier_object_count;
    }

    nf_offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) nf_offsets_[i + 1] = nf_offsets_[i] + nf_counts[i];
    nf_data_.assign(nf_offsets_[n], 0);
    std::vector<std::uint64_t> cursor(nf_offsets_.begin(), nf_offsets_.end() - 1);
    for (const auto& f : facts_) {
        members.clear();
        each_member(f, [&](ItemCode x) { members.push_back(x); });
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        for (ItemCode x : members) nf_data_[cursor[x]++] = f.id;
    }
    for (std::size_t i = 0; i < n; ++i) freq_[i].total = nf_counts[i];

    // NI: union of fact members over NF(x), minus x, sorted.
    ni_offsets_.assign(n + 1, 0);
    std::vector<ItemCode> scratch;
    std::vector<std::vector<ItemCode>> ni(n);
    for (std::size_t i = 0; i < n; ++i) {
        scratch.clear();
        auto span = std::span<const FactId>(nf_data_.data() + nf_offsets_[i],
                                            nf_offsets_[i + 1] - nf_offsets_[i]);
        for (FactId fid : span) {
            each_member(facts_[fid], [&](ItemCode x) {
                if (x != static_cast<ItemCode>(i)) scratch.push_back(x);
            });
        }
        std::sort(scratch.begin(), scratch.end());
        scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
        ni[i] = scratch;
        ni_offsets_[i + 1] = ni_offsets_[i] + scratch.size();
    }
    ni_data_.reserve(ni_offsets_[n]);
    for (auto& row : ni) {
        ni_data_.insert(ni_data_.end(), row.begin(), row.end());
    }
}

void KBStore::check_code(ItemCode x) const {
    if (x >= items_.size()) {
        throw std::out_of_range("unknown item code: " + std::to_string(x));
    }
}

const KBItem& KBStore::item(ItemCode x) const {
    check_code(x);
    return items_[x];
}

const Fact& KBStore::fact(FactId f) const {
    if (f >= facts_.size()) throw std::out_of_range("unknown fact id: " + std::to_string(f));
    return facts_[f];
}

ItemCode KBStore::find(const std::string& external_id) const {
    auto it = by_external_id_.find(external_id);
    return it == by_external_id_.end() ? kInvalidItem : it->second;
}

std::span<const FactId> KBStore::neighborhood(ItemCode x) const {
    check_code(x);
    return {nf_data_.data() + nf_offsets_[x], nf_offsets_[x + 1] - nf_offsets_[x]};
}

std::span<const ItemCode> KBStore::neighbors(ItemCode x) const {
    check_code(x);
    return {ni_data_.data() + ni_offsets_[x], ni_offsets_[x + 1] - ni_offsets_[x]};
}

HopDistance KBStore::distance(ItemCode x1, ItemCode x2) const {
    check_code(x1);
    check_code(x2);
    if (x1 == x2) return HopDistance::Hop1;
    auto n2 = neighbors(x2);
    if (std::binary_search(n2.begin(), n2.end(), x1)) return HopDistance::Hop1;
    auto n1 = neighbors(x1);
    // Linear merge over the two sorted neighbor arrays.
    std::size_t i = 0, j = 0;
    while (i < n1.size() && j < n2.size()) {
        if (n1[i] < n2[j]) ++i;
        else if (n2[j] < n1[i]) ++j;
        else return HopDistance::Hop2;
    }
    return HopDistance::Far;
}

FrequencyProfile KBStore::frequency(ItemCode x) const {
    check_code(x);
    return freq_[x];
}

std::vector<FactId> KBStore::subject_facts(ItemCode x) const {
    std::vector<FactId> out;
    for (FactId fid : neighborhood(x)) {
        if (facts_[fid].subject == x) out.push_back(fid);
    }
    return out;
}

void KBStore::save(const std::string& dir) const {
    std::error_code ec;
    fs::create_directories(dir, ec);

    {
        json meta;
        meta["format_version"] = kFormatVersion;
        meta["item_count"] = items_.size();
        meta["fact_count"] = facts_.size();
        std::ofstream out(fs::path(dir) / "meta.json");
        if (!out) throw std::runtime_error("cannot write bundle meta: " + dir);
        out << meta.dump(2) << "\n";
    }
    {
        std::ofstream out(fs::path(dir) / "items.jsonl");
        if (!out) throw std::runtime_error("cannot write bundle items: " + dir);
        for (const auto& it : items_) {
            json j;
            j["id"] = it.external_id;
            j["label"] = it.label;
            j["aliases"] = it.aliases;
            j["description"] = it.description;
            j["kind"] = to_string(it.kind);
            out << j.dump() << "\n";
        }
    }
    {
        std::ofstream out(fs::path(dir) / "facts.bin", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write bundle facts: " + dir);
        std::vector<std::uint32_t> flat;
        for (const auto& f : facts_) {
            flat.push_back(f.subject);
            flat.push_back(f.predicate);
            flat.push_back(f.object);
            flat.push_back(static_cast<std::uint32_t>(f.qualifiers.size()));
            for (const auto& [qp, qo] : f.qualifiers) {
                flat.push_back(qp);
                flat.push_back(qo);
            }
        }
        write_u32s(out, flat);
    }
    auto write_csr = [&](const char* name, const std::vector<std::uint64_t>& offsets,
                         const std::vector<std::uint32_t>& data) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out) throw std::runtime_error(std::string("cannot write bundle file: ") + name);
        std::vector<std::uint32_t> off32;
        off32.reserve(offsets.size() * 2);
        for (std::uint64_t o : offsets) {
            off32.push_back(static_cast<std::uint32_t>(o & 0xFFFFFFFFu));
            off32.push_back(static_cast<std::uint32_t>(o >> 32));
        }
        write_u32s(out, off32);
        write_u32s(out, data);
    };
    write_csr("nf.bin", nf_offsets_, nf_data_);
    write_csr("ni.bin", ni_offsets_, ni_data_);
}

KBStore KBStore::load(const std::string& dir) {
    KBStore store;
    {
        std::ifstream in(fs::path(dir) / "meta.json");
        if (!in) throw std::runtime_error("cannot open bundle meta in: " + dir);
        json meta = json::parse(in);
        int version = meta.at("format_version").get<int>();
        if (version != kFormatVersion) {
            throw std::runtime_error("unsupported bundle format version " +
                                     std::to_string(version));
        }
    }
    {
        std::ifstream in(fs::path(dir) / "items.jsonl");
        if (!in) throw std::runtime_error("cannot open bundle items in: " + dir);
        std::string line;
        ItemCode code = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line);
            KBItem it;
            it.code = code++;
            it.external_id = j.at("id").get<std::string>();
            it.label = j.at("label").get<std::string>();
            it.aliases = j.at("aliases").get<std::vector<std::string>>();
            it.description = j.at("description").get<std::string>();
            it.kind = item_kind_from_string(j.at("kind").get<std::string>());
            store.items_.push_back(std::move(it));
        }
    }
    {
        std::ifstream in(fs::path(dir) / "facts.bin", std::ios::binary);
        if (!in) throw std::runtime_error("cannot open bundle facts in: " + dir);
        auto flat = read_u32s(in, "facts");
        std::size_t i = 0;
        FactId id = 0;
        while (i < flat.size()) {
            if (i + 4 > flat.size()) throw std::runtime_error("corrupt fact table");
            Fact f;
            f.id = id++;
            f.subject = flat[i];
            f.predicate = flat[i + 1];
            f.object = flat[i + 2];
            std::uint32_t nq = flat[i + 3];
            i += 4;
            if (i + 2ull * nq > flat.size()) throw std::runtime_error("corrupt fact table");
            for (std::uint32_t q = 0; q < nq; ++q) {
                f.qualifiers.emplace_back(flat[i], flat[i + 1]);
                i += 2;
            }
            store.facts_.push_back(std::move(f));
        }
    }
    auto read_csr = [&](const char* name, std::vector<std::uint64_t>& offsets,
                        std::vector<std::uint32_t>& data) {
        std::ifstream in(fs::path(dir) / name, std::ios::binary);
        if (!in) throw std::runtime_error(std::string("cannot open bundle file: ") + name);
        auto off32 = read_u32s(in, name);
        offsets.clear();
        for (std::size_t i = 0; i + 1 < off32.size(); i += 2) {
            offsets.push_back(static_cast<std::uint64_t>(off32[i]) |
                              (static_cast<std::uint64_t>(off32[i + 1]) << 32));
        }
        data = read_u32s(in, name);
    };
    read_csr("nf.bin", store.nf_offsets_, store.nf_data_);
    read_csr("ni.bin", store.ni_offsets_, store.ni_data_);

    if (store.nf_offsets_.size() != store.items_.size() + 1 ||
        store.ni_offsets_.size() != store.items_.size() + 1) {
        throw std::runtime_error("bundle index size mismatch in: " + dir);
    }

    store.by_external_id_.reserve(store.items_.size());
    for (const auto& it : store.items_) {
        store.by_external_id_.emplace(it.external_id, it.code);
    }
    store.freq_.assign(store.items_.size(), FrequencyProfile{});
    for (const auto& f : store.facts_) {
        ++store.freq_[f.subject].subject_count;
        ++store.freq_[f.object].object_count;
        for (const auto& [qp, qo] : f.qualifiers) ++store.freq_[qo].qualifier_object_count;
    }
    for (std::size_t i = 0; i < store.items_.size(); ++i) {
        store.freq_[i].total =
            static_cast<std::uint32_t>(store.nf_offsets_[i + 1] - store.nf_offsets_[i]);
    }
    return store;
}

}  // namespace factscope
