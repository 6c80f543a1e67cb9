#include <doctest.h>

#include "factscope/kb_store.hpp"
#include "helpers.hpp"

using namespace factscope;

namespace {

const KBStore& fixture() {
    static KBStore store = KBStore::load(testutil::worldcup_bundle_dir());
    return store;
}

bool ni_contains(const KBStore& store, ItemCode x, ItemCode y) {
    auto ni = store.neighbors(x);
    return std::binary_search(ni.begin(), ni.end(), y);
}

}  // namespace

TEST_CASE("fixture neighborhoods") {
    const auto& store = fixture();
    auto team = store.find("france_team");
    auto final_ = store.find("wc2018_final");
    REQUIRE(team != kInvalidItem);
    REQUIRE(final_ != kInvalidItem);

    // the participating-team fact is in NF(france_team)
    bool found = false;
    for (FactId fid : store.neighborhood(team)) {
        const Fact& f = store.fact(fid);
        if (f.subject == final_ && f.object == team) found = true;
    }
    CHECK(found);
    CHECK(store.neighborhood(team).size() == 13);
}

TEST_CASE("item in no facts has an empty neighborhood") {
    std::vector<KBItem> items(2);
    items[0] = {0, "a", "a", {}, "", ItemKind::Entity};
    items[1] = {1, "b", "b", {}, "", ItemKind::Predicate};
    std::vector<Fact> facts;
    auto store = KBStore::build(std::move(items), std::move(facts));
    CHECK(store.neighborhood(0).empty());
    CHECK(store.neighbors(0).empty());
    CHECK(store.frequency(0).total == 0);
}

TEST_CASE("single fact neighbors") {
    std::vector<KBItem> items(3);
    for (ItemCode i = 0; i < 3; ++i) {
        items[i].code = i;
        items[i].external_id = std::string(1, char('x' + i));
        items[i].label = items[i].external_id;
    }
    items[1].kind = ItemKind::Predicate;
    std::vector<Fact> facts = {{0, 0, 1, 2, {}}};
    auto store = KBStore::build(std::move(items), std::move(facts));
    auto ni = store.neighbors(0);
    REQUIRE(ni.size() == 2);
    CHECK(ni[0] == 1);
    CHECK(ni[1] == 2);
}

TEST_CASE("fixture hop distances") {
    const auto& store = fixture();
    auto team = store.find("france_team");
    auto final_ = store.find("wc2018_final");
    auto moscow = store.find("moscow");
    auto luzhniki = store.find("luzhniki");

    CHECK(store.distance(team, final_) == HopDistance::Hop1);
    CHECK_FALSE(ni_contains(store, team, moscow));
    CHECK(ni_contains(store, team, luzhniki));  // shared qualifier fact
    CHECK(store.distance(team, moscow) == HopDistance::Hop2);
    CHECK(store.distance(team, team) == HopDistance::Hop1);

    // the asteroid only touches instance_of/type_asteroid; the attendance
    // literal only its own fact: no shared neighbor
    auto asteroid = store.find("asteroid_croatia");
    auto attendance_value = store.find("78011");
    REQUIRE(asteroid != kInvalidItem);
    REQUIRE(attendance_value != kInvalidItem);
    CHECK(store.distance(asteroid, attendance_value) == HopDistance::Far);
}

TEST_CASE("distance equals the BFS oracle on random KBs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 6; ++trial) {
        auto store = testutil::random_kb(40 + trial * 10, 60 + trial * 20, 100 + trial);
        std::uniform_int_distribution<ItemCode> pick(
            0, static_cast<ItemCode>(store.item_count() - 1));
        for (int i = 0; i < 300; ++i) {
            ItemCode a = pick(rng), b = pick(rng);
            int hops = testutil::bfs_hops(store, a, b);
            HopDistance expected = hops <= 1   ? HopDistance::Hop1
                                   : hops == 2 ? HopDistance::Hop2
                                               : HopDistance::Far;
            CAPTURE(trial);
            CAPTURE(a);
            CAPTURE(b);
            REQUIRE(store.distance(a, b) == expected);
            REQUIRE(store.distance(b, a) == expected);  // symmetry
        }
    }
}

TEST_CASE("NF and NI equal full-scan oracles on a random KB") {
    auto store = testutil::random_kb(120, 1000, 5);
    for (ItemCode x = 0; x < store.item_count(); ++x) {
        CAPTURE(x);
        auto nf = store.neighborhood(x);
        auto expected_nf = testutil::naive_nf(store, x);
        REQUIRE(std::vector<FactId>(nf.begin(), nf.end()) == expected_nf);

        auto ni = store.neighbors(x);
        auto expected_ni = testutil::naive_ni(store, x);
        REQUIRE(std::vector<ItemCode>(ni.begin(), ni.end()) == expected_ni);
    }
}

TEST_CASE("frequency role counts") {
    const auto& store = fixture();

    // qualifier object in the two participating-team facts, object of the
    // point-in-time fact
    auto date = store.find("15 July 2018");
    auto fd = store.frequency(date);
    CHECK(fd.subject_count == 0);
    CHECK(fd.object_count == 1);
    CHECK(fd.qualifier_object_count == 2);
    CHECK(fd.total == 3);

    auto pitana = store.find("pitana");
    auto fp = store.frequency(pitana);
    CHECK(fp.subject_count == 1);
    CHECK(fp.object_count == 1);
    CHECK(fp.qualifier_object_count == 0);
    CHECK(fp.total == 2);

    SUBCASE("counts equal role scans on a random KB") {
        auto kb = testutil::random_kb(80, 400, 3);
        for (ItemCode x = 0; x < kb.item_count(); ++x) {
            std::uint32_t s = 0, o = 0, q = 0;
            for (FactId fid : testutil::naive_nf(kb, x)) {
                const Fact& f = kb.fact(fid);
                if (f.subject == x) ++s;
                if (f.object == x) ++o;
                for (const auto& [qp, qo] : f.qualifiers) {
                    if (qo == x) ++q;
                }
            }
            auto prof = kb.frequency(x);
            CAPTURE(x);
            REQUIRE(prof.subject_count == s);
            REQUIRE(prof.object_count == o);
            REQUIRE(prof.qualifier_object_count == q);
            REQUIRE(prof.total == testutil::naive_nf(kb, x).size());
        }
    }
}

TEST_CASE("subject_facts filters by role") {
    const auto& store = fixture();
    auto final_ = store.find("wc2018_final");
    auto subj = store.subject_facts(final_);
    CHECK(subj.size() == store.frequency(final_).subject_count);
    for (FactId fid : subj) CHECK(store.fact(fid).subject == final_);

    auto date = store.find("15 July 2018");
    CHECK(store.subject_facts(date).empty());
}

TEST_CASE("invalid codes are rejected") {
    const auto& store = fixture();
    auto bad = static_cast<ItemCode>(store.item_count());
    CHECK_THROWS(store.item(bad));
    CHECK_THROWS(store.neighborhood(bad));
    CHECK_THROWS(store.neighbors(bad));
    CHECK_THROWS(store.distance(0, bad));
    CHECK_THROWS(store.frequency(bad));
    CHECK_THROWS((void)store.fact(static_cast<FactId>(store.fact_count())));
    CHECK(store.find("no such id") == kInvalidItem);
}
