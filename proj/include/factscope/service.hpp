#pragma once

#include <string>

#include <httplib.h>
#include <json.hpp>

#include "factscope/engine.hpp"

namespace factscope {

/// Parses per-query overrides from a request body: k (int or "auto"), p,
/// d, weights, auto_p_policy, bm25_top_n, terms, timings.
QueryOptions query_options_from_json(const nlohmann::json& j);

/// Installs the HTTP endpoints on a server:
///   POST /search-space   {question, ...overrides} -> search space JSON
///   GET  /neighborhood?item=<id>                  -> facts of the item
///   GET  /connectivity?item1=<id>&item2=<id>      -> {"connectivity": v}
///   GET  /health                                  -> ok
/// The engine is shared read-only across requests.
void register_routes(httplib::Server& server, const Engine& engine);

/// Blocking listen loop; returns non-zero when binding fails.
int serve(const Engine& engine, const std::string& bind_address, int port);

}  // namespace factscope
