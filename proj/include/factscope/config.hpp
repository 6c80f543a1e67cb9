#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "factscope/scoring.hpp"

namespace factscope {

/// Runtime configuration. Precedence when assembling: command-line flags
/// beat FACTSCOPE_* environment variables beat the config file.
struct EngineConfig {
    std::string bundle_dir;
    std::string embeddings_path;
    std::string stopwords_path;  // empty: built-in English list

    SignalWeights weights;
    std::uint32_t depth = 20;           // candidate list depth d
    std::uint32_t k = 0;                // 0 means auto
    std::uint32_t k_max = 5;
    std::uint64_t p = 1000;
    AutoPPolicy auto_p_policy = AutoPPolicy::Static;
    std::optional<std::uint32_t> bm25_filter_n;

    std::string bind_address = "127.0.0.1";
    int port = 8080;

    bool auto_k() const { return k == 0; }

    void validate() const;

    /// Parses the JSON config file.
    static EngineConfig from_file(const std::string& path);

    /// Applies FACTSCOPE_* environment variables on top of this config.
    void apply_env();
};

}  // namespace factscope
