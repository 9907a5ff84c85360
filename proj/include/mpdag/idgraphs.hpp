#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mpdag/error.hpp"
#include "mpdag/graph.hpp"
#include "mpdag/ident.hpp"
#include "mpdag/meek.hpp"
#include "mpdag/paths.hpp"

namespace mpdag {

// One recursion node of IDGraphs. The root has id ""; the children of node
// "x" are "x0" (tail -> head) and "x1" (head -> tail). Leaves carry no edge.
struct BranchRecord {
  std::string id;
  std::optional<Orientation> edge;
  friend bool operator==(const BranchRecord&, const BranchRecord&) = default;
};

struct EnumerationResult {
  NodeSet treatment;
  NodeSet outcome;
  std::vector<Mpdag> graphs;          // canonical order
  std::vector<BranchRecord> audit;    // preorder
  std::size_t m = 0;                  // proper possibly causal paths starting undirected, in the root
};

// First edge of the shortest proper possibly causal path that starts with an
// undirected edge; ties go to the lexicographically smallest node sequence.
inline Orientation select_branch_edge(const Mpdag& g, const NodeSet& A, const NodeSet& Y) {
  auto id = is_identified(g, A, Y);
  if (id.identified) throw PreconditionError("select_branch_edge: effect is already identified");
  return {id.witness->nodes[0], id.witness->nodes[1]};
}

namespace detail {

inline void id_graphs_into(const Mpdag& g, const NodeSet& A, const NodeSet& Y, const std::string& id,
                           EnumerationResult& out) {
  if (is_identified(g, A, Y).identified) {
    out.audit.push_back({id, std::nullopt});
    out.graphs.push_back(g);
    return;
  }
  Orientation e = select_branch_edge(g, A, Y);
  out.audit.push_back({id, e});
  auto forward = construct_mpdag(g, {e});
  auto backward = construct_mpdag(g, {{e.head, e.tail}});
  if (!forward || !backward)
    throw InternalInconsistency("id_graphs: branch edge " + g.graph().name(e.tail) + " - " + g.graph().name(e.head) +
                                " cannot be oriented both ways");
  id_graphs_into(*forward.mpdag, A, Y, id + "0", out);
  id_graphs_into(*backward.mpdag, A, Y, id + "1", out);
}

// Non-treatment nodes lying on some proper possibly causal path from A to Y.
inline NodeSet nodes_on_proper_paths(const Graph& g, const NodeSet& A, const NodeSet& Y) {
  NodeSet out;
  for_each_proper_possibly_causal_path(g, A, Y, false, [&](const NodePath& p) {
    for (std::size_t i = 1; i < p.nodes.size(); ++i) out.insert(p.nodes[i]);
    return true;
  });
  return out;
}

// Every valid orientation of `edges`, applied in order with closure after
// each. A prefix that fails cannot be rescued by later requests, so it is cut.
inline void orient_all_ways(const Mpdag& g, const std::vector<std::pair<Node, Node>>& edges, std::size_t i,
                            std::vector<Mpdag>& out) {
  if (i == edges.size()) {
    out.push_back(g);
    return;
  }
  auto [u, v] = edges[i];
  for (Orientation r : {Orientation{u, v}, Orientation{v, u}})
    if (auto next = construct_mpdag(g, {r})) orient_all_ways(*next.mpdag, edges, i + 1, out);
}

inline std::vector<Mpdag> orient_edges(const Mpdag& g, const std::vector<std::pair<Node, Node>>& edges) {
  std::vector<Mpdag> out;
  orient_all_ways(g, edges, 0, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

inline EnumerationResult id_graphs(const Mpdag& g, const NodeSet& A, const NodeSet& Y) {
  detail::check_query(g, A, Y, "id_graphs");
  EnumerationResult out;
  out.treatment = A;
  out.outcome = Y;
  out.m = proper_possibly_causal_paths(g.graph(), A, Y, true).size();
  detail::id_graphs_into(g, A, Y, "", out);
  std::sort(out.graphs.begin(), out.graphs.end());
  return out;
}

// IDA-style baseline: orient every undirected edge touching A in all valid ways.
inline std::vector<Mpdag> method2_graphs(const Mpdag& g, const NodeSet& A, const NodeSet& Y) {
  detail::check_query(g, A, Y, "method2_graphs");
  std::vector<std::pair<Node, Node>> edges;
  for (auto [u, v] : g.graph().undirected_edges())
    if (A.contains(u) || A.contains(v)) edges.emplace_back(u, v);
  return detail::orient_edges(g, edges);
}

// As method2_graphs, but only edges A1 - V1 whose V1 lies on a proper possibly causal path.
inline std::vector<Mpdag> method3_graphs(const Mpdag& g, const NodeSet& A, const NodeSet& Y) {
  detail::check_query(g, A, Y, "method3_graphs");
  const NodeSet on_paths = detail::nodes_on_proper_paths(g.graph(), A, Y);
  std::vector<std::pair<Node, Node>> edges;
  for (auto [u, v] : g.graph().undirected_edges())
    if ((A.contains(u) && on_paths.contains(v)) || (A.contains(v) && on_paths.contains(u))) edges.emplace_back(u, v);
  return detail::orient_edges(g, edges);
}

inline std::string edge_summary(const Graph& g) {
  std::string out;
  for (auto [u, v] : g.directed_edges()) out += (out.empty() ? "" : ", ") + g.name(u) + "->" + g.name(v);
  for (auto [u, v] : g.undirected_edges()) out += (out.empty() ? "" : ", ") + g.name(u) + "--" + g.name(v);
  return out;
}

struct PartitionReport {
  bool covers = true;
  bool disjoint = true;
  bool identified = true;
  bool distinct_formulas = true;
  std::vector<std::string> violations;

  bool ok() const noexcept { return covers && disjoint && identified && distinct_formulas; }
};

inline PartitionReport verify_partition(const EnumerationResult& result, const Mpdag& g) {
  const NodeSet& A = result.treatment;
  const NodeSet& Y = result.outcome;
  PartitionReport report;
  const Graph& root = g.graph();

  std::vector<Graph> all = enumerate_dags(g);
  std::vector<std::size_t> owners(all.size(), 0);
  for (std::size_t i = 0; i < result.graphs.size(); ++i) {
    for (const Graph& d : enumerate_dags(result.graphs[i])) {
      auto it = std::lower_bound(all.begin(), all.end(), d);
      if (it == all.end() || !(*it == d)) {
        report.covers = false;
        report.violations.push_back("graph " + std::to_string(i) + " represents a DAG outside the input: " +
                                    edge_summary(d));
        continue;
      }
      ++owners[it - all.begin()];
    }
  }
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (owners[k] == 0) {
      report.covers = false;
      report.violations.push_back("missing DAG: " + edge_summary(all[k]));
    } else if (owners[k] > 1) {
      report.disjoint = false;
      report.violations.push_back("DAG represented " + std::to_string(owners[k]) + " times: " + edge_summary(all[k]));
    }
  }

  std::vector<std::optional<GFormula>> formulas;
  for (std::size_t i = 0; i < result.graphs.size(); ++i) {
    if (!is_identified(result.graphs[i], A, Y).identified) {
      report.identified = false;
      report.violations.push_back("graph " + std::to_string(i) + " is not identified");
      formulas.emplace_back();
    } else {
      formulas.push_back(g_formula(result.graphs[i], A, Y));
    }
  }
  for (std::size_t i = 0; i < formulas.size(); ++i)
    for (std::size_t j = i + 1; j < formulas.size(); ++j)
      if (formulas[i] && formulas[j] && *formulas[i] == *formulas[j]) {
        report.distinct_formulas = false;
        report.violations.push_back("graphs " + std::to_string(i) + " and " + std::to_string(j) +
                                    " share the formula " + formulas[i]->to_string(root));
      }
  return report;
}

}  // namespace mpdag
