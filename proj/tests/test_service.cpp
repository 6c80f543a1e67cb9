#include <doctest.h>

#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "factscope/service.hpp"
#include "helpers.hpp"

using namespace factscope;
using nlohmann::json;

namespace {

/// In-process server bound to an ephemeral port for the lifetime of the
/// test binary.
struct TestServer {
    httplib::Server server;
    int port = 0;
    std::thread thread;

    TestServer() {
        register_routes(server, testutil::worldcup_engine());
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~TestServer() {
        server.stop();
        thread.join();
    }
};

TestServer& instance() {
    static TestServer s;
    return s;
}

httplib::Client client() { return httplib::Client("127.0.0.1", instance().port); }

}  // namespace

TEST_CASE("health endpoint") {
    auto res = client().Get("/health");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body == "ok");
}

TEST_CASE("neighborhood endpoint") {
    SUBCASE("known item returns its facts") {
        auto res = client().Get("/neighborhood?item=luzhniki");
        REQUIRE(res);
        REQUIRE(res->status == 200);
        auto j = json::parse(res->body);
        const auto& store = testutil::worldcup_engine().store();
        CHECK(j["facts"].size() == store.neighborhood(store.find("luzhniki")).size());
    }
    SUBCASE("unknown item is 404") {
        auto res = client().Get("/neighborhood?item=atlantis");
        REQUIRE(res);
        CHECK(res->status == 404);
    }
    SUBCASE("missing parameter is 400") {
        auto res = client().Get("/neighborhood");
        REQUIRE(res);
        CHECK(res->status == 400);
    }
}

TEST_CASE("connectivity endpoint") {
    SUBCASE("1-hop fixture pair") {
        auto res = client().Get("/connectivity?item1=france_team&item2=wc2018_final");
        REQUIRE(res);
        REQUIRE(res->status == 200);
        CHECK(json::parse(res->body)["connectivity"] == 1.0);
    }
    SUBCASE("2-hop fixture pair") {
        auto res = client().Get("/connectivity?item1=france_team&item2=moscow");
        REQUIRE(res);
        REQUIRE(res->status == 200);
        CHECK(json::parse(res->body)["connectivity"] == 0.5);
    }
    SUBCASE("unknown item is 404") {
        auto res = client().Get("/connectivity?item1=atlantis&item2=moscow");
        REQUIRE(res);
        CHECK(res->status == 404);
    }
}

TEST_CASE("search-space endpoint") {
    SUBCASE("fixture question equals the in-process engine output") {
        json body = {{"question", "What is the capital of Croatia?"}};
        auto res = client().Post("/search-space", body.dump(), "application/json");
        REQUIRE(res);
        REQUIRE(res->status == 200);

        const auto& engine = testutil::worldcup_engine();
        auto space = engine.build_search_space("What is the capital of Croatia?");
        CHECK(res->body == engine.to_json(space, false).dump(2));
    }
    SUBCASE("per-query overrides are honored") {
        json body = {{"question", "Where was the 2018 final played?"}, {"k", 1}, {"p", 5}};
        auto res = client().Post("/search-space", body.dump(), "application/json");
        REQUIRE(res);
        REQUIRE(res->status == 200);
        auto j = json::parse(res->body);
        for (const auto& term : j["terms"]) CHECK(term["k"] == 1);
    }
    SUBCASE("malformed JSON body is 400") {
        auto res = client().Post("/search-space", "{nope", "application/json");
        REQUIRE(res);
        CHECK(res->status == 400);
    }
    SUBCASE("stopword-only question is 400, not 500") {
        json body = {{"question", "who is the"}};
        auto res = client().Post("/search-space", body.dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == 400);
        CHECK(json::parse(res->body).contains("error"));
    }
    SUBCASE("timings appear only when requested") {
        json body = {{"question", "What is the capital of Croatia?"}, {"timings", true}};
        auto res = client().Post("/search-space", body.dump(), "application/json");
        REQUIRE(res);
        REQUIRE(res->status == 200);
        CHECK(json::parse(res->body)["stats"].contains("timings_ms"));
    }
}

TEST_CASE("query options parsing") {
    auto options = query_options_from_json(json::parse(
        R"x({"k":"auto","p":50,"d":10,"weights":{"coh":0.25,"conn":0.25,"rel":0.25,"match":0.25},
             "auto_p_policy":"10^(5-k)","bm25_top_n":100,"terms":["a","b"],"timings":true})x"));
    CHECK(options.k == 0u);
    CHECK(options.p == 50u);
    CHECK(options.depth == 10u);
    CHECK(options.weights->coh == 0.25);
    CHECK(options.auto_p_policy == AutoPPolicy::Pow5MinusK);
    CHECK(options.bm25_filter_n == 100u);
    CHECK(options.terms == std::vector<std::string>{"a", "b"});
    CHECK(options.include_timings);

    CHECK_THROWS(query_options_from_json(json::parse(R"({"k":"sometimes"})")));
    CHECK_THROWS(query_options_from_json(json::parse(R"({"k":0})")));
}
