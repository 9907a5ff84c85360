#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mpdag/error.hpp"
#include "mpdag/graph.hpp"

namespace mpdag {

// A background-knowledge request: orient tail -> head.
struct Orientation {
  Node tail;
  Node head;
  friend bool operator==(const Orientation&, const Orientation&) = default;
  friend auto operator<=>(const Orientation&, const Orientation&) = default;
};

using OrientationList = std::vector<Orientation>;

class Mpdag;
Mpdag meek_closure(Graph g);

// A PDAG carrying a certificate that no orientation rule applies to it.
// Only meek_closure and construct_mpdag hand out certified graphs.
class Mpdag {
 public:
  Mpdag() = default;

  const Graph& graph() const noexcept { return graph_; }
  bool meek_closed() const noexcept { return closed_; }

  friend bool operator==(const Mpdag& a, const Mpdag& b) { return a.graph_ == b.graph_; }
  friend auto operator<=>(const Mpdag& a, const Mpdag& b) { return a.graph_ <=> b.graph_; }

 private:
  Mpdag(Graph g, bool closed) : graph_(std::move(g)), closed_(closed) {}
  friend Mpdag meek_closure(Graph g);

  Graph graph_;
  bool closed_ = false;
};

namespace meek {

// Each predicate asks whether the undirected edge u - v must become u -> v.

// R1: a -> u - v, a and v not adjacent.
inline bool rule1(const Graph& g, Node u, Node v) {
  for (Node a = 0; a < g.size(); ++a)
    if (a != v && g.has_directed(a, u) && !g.adjacent(a, v)) return true;
  return false;
}

// R2: u -> b -> v and u - v.
inline bool rule2(const Graph& g, Node u, Node v) {
  for (Node b = 0; b < g.size(); ++b)
    if (g.has_directed(u, b) && g.has_directed(b, v)) return true;
  return false;
}

// R3: u - a -> v, u - c -> v, a and c not adjacent, u - v.
inline bool rule3(const Graph& g, Node u, Node v) {
  for (Node a = 0; a < g.size(); ++a) {
    if (!g.has_undirected(u, a) || !g.has_directed(a, v)) continue;
    for (Node c = a + 1; c < g.size(); ++c)
      if (g.has_undirected(u, c) && g.has_directed(c, v) && !g.adjacent(a, c)) return true;
  }
  return false;
}

// R4: u - a -> b -> v with u - b, a and v not adjacent, u - v.
inline bool rule4(const Graph& g, Node u, Node v) {
  for (Node b = 0; b < g.size(); ++b) {
    if (!g.has_undirected(u, b) || !g.has_directed(b, v)) continue;
    for (Node a = 0; a < g.size(); ++a)
      if (a != v && g.has_undirected(u, a) && g.has_directed(a, b) && !g.adjacent(a, v)) return true;
  }
  return false;
}

// Applies R1..R4 to a fixpoint. Within a sweep the rules are tried in order
// and undirected edges in node order, first as u -> v then as v -> u.
// Returns the number of edges oriented.
inline std::size_t close_in_place(Graph& g) {
  using Rule = bool (*)(const Graph&, Node, Node);
  static constexpr Rule rules[] = {rule1, rule2, rule3, rule4};
  std::size_t oriented = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (Rule rule : rules) {
      for (auto [i, j] : g.undirected_edges()) {
        if (!g.has_undirected(i, j)) continue;
        if (rule(g, i, j)) g.orient(i, j);
        else if (rule(g, j, i)) g.orient(j, i);
        else continue;
        changed = true;
        ++oriented;
      }
    }
  }
  if (auto cycle = g.find_directed_cycle())
    throw InternalInconsistency("orientation rules produced a directed cycle through '" + g.name(cycle->front()) + "'");
  return oriented;
}

inline bool is_closed(const Graph& g) {
  for (auto [i, j] : g.undirected_edges())
    for (auto rule : {rule1, rule2, rule3, rule4})
      if (rule(g, i, j) || rule(g, j, i)) return false;
  return true;
}

}  // namespace meek

// Closes a PDAG under the orientation rules. The skeleton is unchanged and the
// directed edges only grow.
inline Mpdag meek_closure(Graph g) {
  if (auto cycle = g.find_directed_cycle())
    throw GraphError("meek_closure: input has a directed cycle through '" + g.name(cycle->front()) + "'");
  meek::close_in_place(g);
  return Mpdag(std::move(g), true);
}

struct ConstructResult {
  std::optional<Mpdag> mpdag;           // empty on FAIL
  std::optional<Orientation> offending;  // request that could not be honoured
  std::string reason;

  explicit operator bool() const noexcept { return mpdag.has_value(); }
};

inline void require_closed(const Mpdag& g, const char* op) {
  if (!g.meek_closed()) throw PreconditionError(std::string(op) + ": graph is not meek-closed");
}

// Adds background knowledge one request at a time, closing after each.
// FAIL when a request meets an opposite or missing edge, or when the final
// graph no longer honours an earlier request.
inline ConstructResult construct_mpdag(const Mpdag& g, const OrientationList& requests) {
  require_closed(g, "construct_mpdag");
  Graph work = g.graph();
  std::set<Orientation> seen;
  for (const auto& r : requests) {
    if (r.tail >= work.size() || r.head >= work.size() || r.tail == r.head)
      throw GraphError("construct_mpdag: request references an unknown node");
    if (!seen.insert(r).second) throw PreconditionError("construct_mpdag: duplicate request");
  }
  for (const auto& r : requests) {
    if (work.has_directed(r.tail, r.head)) continue;
    if (!work.has_undirected(r.tail, r.head)) {
      std::string why = work.adjacent(r.tail, r.head)
                            ? "edge is already " + work.name(r.head) + " -> " + work.name(r.tail)
                            : "nodes are not adjacent";
      return {std::nullopt, r, why};
    }
    work.orient(r.tail, r.head);
    meek::close_in_place(work);
  }
  for (const auto& r : requests)
    if (!work.has_directed(r.tail, r.head))
      return {std::nullopt, r, "closure contradicts the request"};
  return {meek_closure(std::move(work)), std::nullopt, {}};
}

namespace detail {

// Unshielded colliders a -> b <- c with a < c.
inline std::set<std::tuple<Node, Node, Node>> unshielded_colliders(const Graph& g) {
  std::set<std::tuple<Node, Node, Node>> out;
  for (Node b = 0; b < g.size(); ++b) {
    NodeSet pa = g.parents(b);
    for (std::size_t i = 0; i < pa.size(); ++i)
      for (std::size_t j = i + 1; j < pa.size(); ++j)
        if (!g.adjacent(pa[i], pa[j])) out.emplace(pa[i], b, pa[j]);
  }
  return out;
}

inline void require_dag(const Graph& d, const char* op) {
  if (!d.is_directed() || d.find_directed_cycle())
    throw PreconditionError(std::string(op) + ": input is not a DAG");
}

}  // namespace detail

// The CPDAG of a DAG's Markov equivalence class: skeleton plus unshielded
// colliders, closed under the orientation rules.
inline Mpdag cpdag_of_dag(const Graph& d) {
  detail::require_dag(d, "cpdag_of_dag");
  Graph g(d.names());
  for (auto [u, v] : d.directed_edges()) g.add_undirected(u, v);
  for (auto [a, b, c] : detail::unshielded_colliders(d)) {
    if (g.has_undirected(a, b)) g.orient(a, b);
    if (g.has_undirected(c, b)) g.orient(c, b);
  }
  return meek_closure(std::move(g));
}

inline bool is_represented(const Graph& d, const Mpdag& g) {
  detail::require_dag(d, "is_represented");
  if (d.names() != g.graph().names()) throw GraphError("is_represented: node sets differ");
  if (!d.same_skeleton(g.graph())) return false;
  for (auto [u, v] : g.graph().directed_edges())
    if (!d.has_directed(u, v)) return false;
  return detail::unshielded_colliders(d) == detail::unshielded_colliders(g.graph());
}

namespace detail {

inline void enumerate_into(const Mpdag& g, std::vector<Graph>& out) {
  auto edge = g.graph().first_undirected_edge();
  if (!edge) {
    out.push_back(g.graph());
    return;
  }
  auto [u, v] = *edge;
  for (Orientation r : {Orientation{u, v}, Orientation{v, u}})
    if (auto branch = construct_mpdag(g, {r})) enumerate_into(*branch.mpdag, out);
}

}  // namespace detail

// All DAGs represented by g, sorted canonically. Branches on the first
// undirected edge in node order; the recursion tree has |[g]| leaves.
inline std::vector<Graph> enumerate_dags(const Mpdag& g) {
  require_closed(g, "enumerate_dags");
  std::vector<Graph> out;
  detail::enumerate_into(g, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// The first leaf of the enumerate_dags branch tree.
inline Graph consistent_extension(const Mpdag& g) {
  require_closed(g, "consistent_extension");
  Mpdag current = g;
  while (auto edge = current.graph().first_undirected_edge()) {
    auto [u, v] = *edge;
    if (auto r = construct_mpdag(current, {{u, v}})) current = *r.mpdag;
    else if (auto s = construct_mpdag(current, {{v, u}})) current = *s.mpdag;
    else throw InternalInconsistency("consistent_extension: both orientations of " + current.graph().name(u) +
                                     " - " + current.graph().name(v) + " fail");
  }
  return current.graph();
}

}  // namespace mpdag
