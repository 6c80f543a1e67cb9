#include "factscope/service.hpp"

#include <iostream>

namespace factscope {

using nlohmann::json;

QueryOptions query_options_from_json(const json& j) {
    QueryOptions options;
    if (j.contains("k")) {
        const auto& k = j["k"];
        if (k.is_string()) {
            if (k.get<std::string>() != "auto") throw std::invalid_argument("bad k");
            options.k = 0;
        } else {
            options.k = k.get<std::uint32_t>();
            if (*options.k < 1) throw std::invalid_argument("k must be >= 1 or \"auto\"");
        }
    }
    if (j.contains("p")) options.p = j["p"].get<std::uint64_t>();
    if (j.contains("d")) options.depth = j["d"].get<std::uint32_t>();
    if (j.contains("weights")) {
        const auto& w = j["weights"];
        SignalWeights weights;
        weights.coh = w.at("coh").get<double>();
        weights.conn = w.at("conn").get<double>();
        weights.rel = w.at("rel").get<double>();
        weights.match = w.at("match").get<double>();
        options.weights = weights;
    }
    if (j.contains("auto_p_policy")) {
        options.auto_p_policy = auto_p_policy_from_string(j["auto_p_policy"].get<std::string>());
    }
    if (j.contains("bm25_top_n")) options.bm25_filter_n = j["bm25_top_n"].get<std::uint32_t>();
    if (j.contains("terms")) options.terms = j["terms"].get<std::vector<std::string>>();
    options.include_timings = j.value("timings", false);
    return options;
}

void register_routes(httplib::Server& server, const Engine& engine) {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("ok", "text/plain");
    });

    server.Get("/neighborhood", [&engine](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("item")) {
            res.status = 400;
            res.set_content(R"({"error":"missing item parameter"})", "application/json");
            return;
        }
        const auto& store = engine.store();
        ItemCode code = store.find(req.get_param_value("item"));
        if (code == kInvalidItem) {
            res.status = 404;
            res.set_content(R"({"error":"unknown item"})", "application/json");
            return;
        }
        auto item_ref = [&](ItemCode x) {
            const auto& item = store.item(x);
            return json{{"id", item.external_id}, {"label", item.label}};
        };
        json facts = json::array();
        for (FactId fid : store.neighborhood(code)) {
            const Fact& f = store.fact(fid);
            json jf;
            jf["subject"] = item_ref(f.subject);
            jf["predicate"] = item_ref(f.predicate);
            jf["object"] = item_ref(f.object);
            json quals = json::array();
            for (const auto& [qp, qo] : f.qualifiers) quals.push_back({item_ref(qp), item_ref(qo)});
            jf["qualifiers"] = std::move(quals);
            facts.push_back(std::move(jf));
        }
        res.set_content(json{{"facts", std::move(facts)}}.dump(2), "application/json");
    });

    server.Get("/connectivity", [&engine](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_param("item1") || !req.has_param("item2")) {
            res.status = 400;
            res.set_content(R"({"error":"missing item1/item2 parameter"})", "application/json");
            return;
        }
        const auto& store = engine.store();
        ItemCode a = store.find(req.get_param_value("item1"));
        ItemCode b = store.find(req.get_param_value("item2"));
        if (a == kInvalidItem || b == kInvalidItem) {
            res.status = 404;
            res.set_content(R"({"error":"unknown item"})", "application/json");
            return;
        }
        const double value = connectivity_value(store.distance(a, b));
        res.set_content(json{{"connectivity", value}}.dump(2), "application/json");
    });

    server.Post("/search-space", [&engine](const httplib::Request& req, httplib::Response& res) {
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::parse_error&) {
            res.status = 400;
            res.set_content(R"({"error":"malformed JSON body"})", "application/json");
            return;
        }
        try {
            if (!body.contains("question") || !body["question"].is_string()) {
                throw std::invalid_argument("missing question");
            }
            auto options = query_options_from_json(body);
            auto space = engine.build_search_space(body["question"].get<std::string>(), options);
            res.set_content(engine.to_json(space, options.include_timings).dump(2),
                            "application/json");
        } catch (const std::invalid_argument& e) {
            res.status = 400;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        } catch (const std::exception&) {
            res.status = 500;
            res.set_content(R"({"error":"internal error"})", "application/json");
        }
    });
}

int serve(const Engine& engine, const std::string& bind_address, int port) {
    httplib::Server server;
    register_routes(server, engine);
    std::cerr << "listening on " << bind_address << ":" << port << "\n";
    if (!server.listen(bind_address, port)) {
        std::cerr << "failed to bind " << bind_address << ":" << port << "\n";
        return 1;
    }
    return 0;
}

}  // namespace factscope
