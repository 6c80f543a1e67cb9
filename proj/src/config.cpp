#include "factscope/config.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace factscope {

using nlohmann::json;

void EngineConfig::validate() const {
    weights.validate();
    if (depth < 1) throw std::invalid_argument("d must be >= 1");
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (!auto_k() && k > depth) throw std::invalid_argument("k must not exceed d");
    if (bm25_filter_n && *bm25_filter_n < 1) {
        throw std::invalid_argument("bm25 filter size must be >= 1");
    }
    if (bundle_dir.empty()) throw std::invalid_argument("bundle path is required");
}

EngineConfig EngineConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j = json::parse(in);

    EngineConfig cfg;
    cfg.bundle_dir = j.value("bundle", std::string{});
    cfg.embeddings_path = j.value("embeddings", std::string{});
    cfg.stopwords_path = j.value("stopwords", std::string{});
    if (j.contains("weights")) {
        const auto& w = j["weights"];
        cfg.weights.coh = w.at("coh").get<double>();
        cfg.weights.conn = w.at("conn").get<double>();
        cfg.weights.rel = w.at("rel").get<double>();
        cfg.weights.match = w.at("match").get<double>();
    }
    cfg.depth = j.value("d", cfg.depth);
    if (j.contains("k")) {
        const auto& k = j["k"];
        if (k.is_string()) {
            if (k.get<std::string>() != "auto") {
                throw std::runtime_error("k must be an integer or \"auto\"");
            }
            cfg.k = 0;
        } else {
            cfg.k = k.get<std::uint32_t>();
            if (cfg.k < 1) throw std::runtime_error("k must be >= 1 or \"auto\"");
        }
    }
    cfg.k_max = j.value("k_max", cfg.k_max);
    if (j.contains("p")) {
        const auto& p = j["p"];
        if (p.is_string()) {
            cfg.auto_p_policy = auto_p_policy_from_string(p.get<std::string>());
        } else {
            cfg.p = p.get<std::uint64_t>();
            cfg.auto_p_policy = AutoPPolicy::Static;
        }
    }
    if (j.contains("bm25_filter_n")) cfg.bm25_filter_n = j["bm25_filter_n"].get<std::uint32_t>();
    cfg.bind_address = j.value("bind", cfg.bind_address);
    cfg.port = j.value("port", cfg.port);
    return cfg;
}

void EngineConfig::apply_env() {
    auto env = [](const char* name) -> std::optional<std::string> {
        const char* v = std::getenv(name);
        if (!v || !*v) return std::nullopt;
        return std::string(v);
    };
    if (auto v = env("FACTSCOPE_BUNDLE")) bundle_dir = *v;
    if (auto v = env("FACTSCOPE_EMBEDDINGS")) embeddings_path = *v;
    if (auto v = env("FACTSCOPE_STOPWORDS")) stopwords_path = *v;
    if (auto v = env("FACTSCOPE_D")) depth = static_cast<std::uint32_t>(std::stoul(*v));
    if (auto v = env("FACTSCOPE_K")) k = (*v == "auto") ? 0 : static_cast<std::uint32_t>(std::stoul(*v));
    if (auto v = env("FACTSCOPE_K_MAX")) k_max = static_cast<std::uint32_t>(std::stoul(*v));
    if (auto v = env("FACTSCOPE_P")) {
        if (v->find('^') != std::string::npos) {
            auto_p_policy = auto_p_policy_from_string(*v);
        } else {
            p = std::stoull(*v);
            auto_p_policy = AutoPPolicy::Static;
        }
    }
    if (auto v = env("FACTSCOPE_BIND")) bind_address = *v;
    if (auto v = env("FACTSCOPE_PORT")) port = std::stoi(*v);
}

}  // namespace factscope
