#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "factscope/eval.hpp"
#include "helpers.hpp"

using namespace factscope;

namespace {

std::vector<BenchmarkInstance> fixture_questions() {
    return read_benchmark_jsonl(testutil::worldcup_dir() + "/questions.jsonl");
}

}  // namespace

TEST_CASE("answer presence") {
    const auto& engine = testutil::worldcup_engine();
    const auto& store = engine.store();
    auto space = engine.build_search_space("What is the capital of Croatia?");

    SUBCASE("gold entity in a retained fact") {
        CHECK(answer_presence(store, space, {"zagreb"}));
    }
    SUBCASE("absent gold answer") {
        CHECK_FALSE(answer_presence(store, space, {"mbappe"}));
    }
    SUBCASE("empty space") {
        SearchSpace empty;
        CHECK_FALSE(answer_presence(store, empty, {"zagreb"}));
    }
    SUBCASE("literal gold answers match by normalized form") {
        auto final_space = engine.build_search_space("Where was the 2018 final played?");
        CHECK(answer_presence(store, final_space, {"15 july 2018"}));
        CHECK_FALSE(answer_presence(store, final_space, {"16 July 2018"}));
    }
}

TEST_CASE("benchmark file parsing") {
    auto instances = fixture_questions();
    REQUIRE(instances.size() == 5);
    CHECK(instances[0].gold_answers.size() == 5);
    CHECK(instances[3].question == "What is the capital of Croatia?");

    SUBCASE("instances without answers are rejected") {
        auto path = std::filesystem::temp_directory_path() / "factscope_bad_bench.jsonl";
        {
            std::ofstream out(path);
            out << R"({"question":"who?","answers":[]})" << "\n";
        }
        CHECK_THROWS(read_benchmark_jsonl(path.string()));
        std::filesystem::remove(path);
    }
    SUBCASE("missing file") { CHECK_THROWS(read_benchmark_jsonl("/no/such.jsonl")); }
}

TEST_CASE("fixture benchmark reaches full answer presence under defaults") {
    const auto& engine = testutil::worldcup_engine();
    auto report = run_benchmark(engine, fixture_questions());
    REQUIRE(report.rows.size() == 5);
    for (const auto& row : report.rows) {
        CAPTURE(row.question);
        CHECK(row.answer_present);
        CHECK(row.space_size > 0);
    }
    CHECK(report.answer_presence == 100.0);
    CHECK(report.mean_space_size > 0.0);

    SUBCASE("aggregates are recomputable from the rows") {
        double size_sum = 0.0;
        std::size_t present = 0;
        for (const auto& r : report.rows) {
            size_sum += static_cast<double>(r.space_size);
            present += r.answer_present;
        }
        CHECK(report.mean_space_size ==
              doctest::Approx(size_sum / report.rows.size()).epsilon(1e-12));
        CHECK(report.answer_presence ==
              doctest::Approx(100.0 * present / report.rows.size()).epsilon(1e-12));
    }
}

TEST_CASE("report writers") {
    const auto& engine = testutil::worldcup_engine();
    auto report = run_benchmark(engine, fixture_questions());
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "factscope_reports";
    fs::create_directories(dir);

    write_report_json(report, (dir / "report.json").string());
    write_report_csv(report, (dir / "report.csv").string());

    std::ifstream jin(dir / "report.json");
    auto j = nlohmann::json::parse(jin);
    CHECK(j["aggregates"]["answer_presence_pct"] == 100.0);
    CHECK(j["per_question"].size() == 5);

    std::ifstream cin_(dir / "report.csv");
    std::string header;
    std::getline(cin_, header);
    CHECK(header == "question,answer_present,space_size,fact_count,elapsed_ms");
    std::size_t lines = 0;
    for (std::string line; std::getline(cin_, line);) ++lines;
    CHECK(lines == 5);
    fs::remove_all(dir);
}

TEST_CASE("grid search") {
    const auto& engine = testutil::worldcup_engine();
    auto instances = fixture_questions();

    SUBCASE("singleton grid returns that configuration") {
        GridPoint point;
        point.k = 2;
        point.p = 500;
        auto result = grid_search(engine, instances, {point});
        CHECK(result.best.k == 2);
        CHECK(result.best.p == 500);
        CHECK(result.all.size() == 1);
    }
    SUBCASE("the winner has the highest answer presence") {
        GridPoint good;  // defaults: auto-k, p=1000
        GridPoint tiny;
        tiny.k = 1;
        tiny.p = 1;
        auto result = grid_search(engine, instances, {tiny, good});
        CHECK(result.all.size() == 2);
        for (const auto& [point, report] : result.all) {
            CHECK(result.best_report.answer_presence >= report.answer_presence);
        }
        // ties go to the smaller mean search space
        if (result.all[0].second.answer_presence == result.all[1].second.answer_presence) {
            CHECK(result.best_report.mean_space_size <=
                  std::min(result.all[0].second.mean_space_size,
                           result.all[1].second.mean_space_size));
        }
    }
    SUBCASE("weight rows failing sum-to-1 are rejected") {
        GridPoint bad;
        bad.weights = SignalWeights{0.5, 0.5, 0.5, 0.5};
        CHECK_THROWS(grid_search(engine, instances, {bad}));
    }
    SUBCASE("empty grid is rejected") {
        CHECK_THROWS(grid_search(engine, instances, {}));
    }
}

TEST_CASE("synthetic KB generator") {
    auto store = make_synthetic_kb(500, 2000, 1);
    CHECK(store.item_count() == 500);
    CHECK(store.fact_count() == 2000);

    // deterministic for a fixed seed
    auto again = make_synthetic_kb(500, 2000, 1);
    for (FactId f = 0; f < 50; ++f) CHECK(store.fact(f) == again.fact(f));
}

TEST_CASE("micro benchmark smoke") {
    auto store = make_synthetic_kb(2000, 10000, 2);
    auto report = micro_bench(store, 256, 256, 20);
    CHECK(report.neighborhood.median_us >= 0.0);
    CHECK(report.distance.median_us >= 0.0);
    CHECK(report.naive_neighborhood.median_us > 0.0);
    CHECK(report.naive_distance.median_us > 0.0);
    // the indexed path should never lose to the full scan, even at this size
    CHECK(report.neighborhood.median_us < report.naive_neighborhood.median_us);
}
