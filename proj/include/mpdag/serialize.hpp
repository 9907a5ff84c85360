#pragma once

// JSON views of the library types. Keys are emitted in sorted order, so equal
// values serialize to identical bytes.

#include <string>
#include <vector>

#include <json.hpp>

#include "mpdag/graph.hpp"
#include "mpdag/ident.hpp"
#include "mpdag/idgraphs.hpp"
#include "mpdag/linear_scm.hpp"
#include "mpdag/paths.hpp"
#include "mpdag/simulation.hpp"

namespace mpdag {

using Json = nlohmann::json;

inline Json to_json(const Graph& g) {
  Json directed = Json::array(), undirected = Json::array();
  for (auto [u, v] : g.directed_edges()) directed.push_back({g.name(u), g.name(v)});
  for (auto [u, v] : g.undirected_edges()) undirected.push_back({g.name(u), g.name(v)});
  return {{"nodes", g.names()}, {"directed", directed}, {"undirected", undirected}};
}

inline Json to_json(const Graph& g, const NodePath& p) {
  std::vector<std::string> names;
  for (Node v : p.nodes) names.push_back(g.name(v));
  return {{"nodes", names}, {"text", to_string(g, p)}};
}

inline Json to_json(const Graph& g, const GFormula& f) {
  Json buckets = Json::array();
  for (const auto& b : f.buckets) buckets.push_back({{"nodes", node_names(g, b.nodes)}, {"parents", node_names(g, b.parents)}});
  return {{"A", node_names(g, f.treatment)},
          {"Y", node_names(g, f.outcome)},
          {"buckets", buckets},
          {"marginalize", node_names(g, f.marginalized)},
          {"text", f.to_string(g)}};
}

inline Json to_json(const PartitionReport& r) {
  return {{"covers", r.covers},
          {"disjoint", r.disjoint},
          {"identified", r.identified},
          {"distinct_formulas", r.distinct_formulas},
          {"ok", r.ok()},
          {"violations", r.violations}};
}

inline Json to_json(const Graph& root, const EnumerationResult& r) {
  Json graphs = Json::array(), audit = Json::array();
  for (const auto& g : r.graphs) graphs.push_back(to_json(g.graph()));
  for (const auto& b : r.audit) {
    Json entry = {{"id", b.id}};
    entry["edge"] = b.edge ? Json{root.name(b.edge->tail), root.name(b.edge->head)} : Json(nullptr);
    audit.push_back(entry);
  }
  return {{"A", node_names(root, r.treatment)},
          {"Y", node_names(root, r.outcome)},
          {"m", r.m},
          {"n", r.graphs.size()},
          {"graphs", graphs},
          {"audit", audit}};
}

inline Json to_json(const SimulationRecord& r) {
  Json j = {{"seed", r.seed},
            {"p", r.p},
            {"degree", r.degree},
            {"num_treatments", r.num_treatments},
            {"samples", r.samples}};
  if (!r.error.empty()) {
    j["error"] = r.error;
    return j;
  }
  j["A"] = r.treatment;
  j["Y"] = r.outcome;
  j["m"] = r.m;
  j["counts"] = {{"1", r.graphs[0]}, {"2", r.graphs[1]}, {"3", r.graphs[2]}, {"4", r.graphs[3]}};
  j["distinct"] = {{"1", r.distinct[0]}, {"2", r.distinct[1]}, {"3", r.distinct[2]}, {"4", r.distinct[3]}};
  j["truth"] = r.truth;
  j["redraws"] = r.redraws;
  j["match"] = r.match;
  j["tie_exhausted"] = r.tie_exhausted;
  return j;
}

}  // namespace mpdag
